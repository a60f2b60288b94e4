#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace pcaq {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Raised when an operation's mathematical preconditions fail (e.g. a
// denominator that must be positive, or a parameter outside the region where
// a bound is proved).
class RegimeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class BudgetExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr double kUnitTol = 1e-8;

inline bool all_finite(const Vec& v) { return v.allFinite(); }

// Throws std::invalid_argument unless |‖v‖ - 1| <= tol and v is finite.
void require_unit(const Vec& v, const char* what, double tol = kUnitTol);

}  // namespace pcaq
