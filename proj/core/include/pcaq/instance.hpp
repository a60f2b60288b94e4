#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "pcaq/common.hpp"

namespace pcaq {

// Dense symmetric matrix with shared immutable storage. Copies are cheap and
// safe to hand to other threads.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  // Rejects non-square, non-finite, or visibly asymmetric input
  // (|a_ij - a_ji| > 1e-12 * (1 + max|a|)); then mirrors the upper triangle so
  // the stored matrix is exactly symmetric.
  explicit SymmetricMatrix(Mat m);

  Eigen::Index dim() const { return m_ ? m_->rows() : 0; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return (*m_)(i, j); }
  const Mat& dense() const { return *m_; }
  Vec apply(const Vec& v) const;

 private:
  std::shared_ptr<const Mat> m_;
};

struct SpikedInstance {
  Vec theta;
  double lambda = 0.0;
  SymmetricMatrix noise;   // W
  SymmetricMatrix matrix;  // M = lambda * theta theta^T + W / sqrt(d)
  Eigen::Index dim() const { return theta.size(); }
};

struct SpectrumSummary {
  std::vector<double> eigenvalues;  // descending
  Vec top_vector;
  double op_norm = 0.0;
  double eigenratio = 0.0;  // NaN when lambda_1 <= 0
};

constexpr Eigen::Index kDefaultDenseCap = 8192;

// GOE(d): off-diagonal N(0,1), diagonal N(0,2).
SymmetricMatrix sample_goe(Eigen::Index d, std::uint64_t seed);
// Same draw order as sample_goe, written into `out` (resized to d x d).
void sample_goe_into(Eigen::Index d, std::uint64_t seed, Mat& out);

Vec sample_uniform_sphere(Eigen::Index d, std::uint64_t seed);

SpikedInstance make_spiked(Eigen::Index d, double lambda, std::uint64_t seed);
SpikedInstance make_spiked_from(Vec theta, double lambda, const SymmetricMatrix& noise);

// Full dense eigendecomposition (ground truth). Throws for non-finite input or
// d above `cap`.
SpectrumSummary spectrum(const SymmetricMatrix& m, Eigen::Index cap = kDefaultDenseCap);
// Eigenvalues only, descending. Roughly 4x cheaper than spectrum().
std::vector<double> eigenvalues_desc(const SymmetricMatrix& m, Eigen::Index cap = kDefaultDenseCap);

struct MembershipResult {
  bool member = false;
  int violating_index = 0;  // 1-based index j of the first |lambda_j| > gamma*lambda_1, 0 if none
  std::string reason;
};

// True iff lambda_1(M) = ||M|| > 0 and |lambda_j| <= gamma * lambda_1 for j >= 2.
MembershipResult check_membership(const SymmetricMatrix& m, double gamma);
MembershipResult check_membership(const std::vector<double>& eigenvalues_desc, double gamma);

double rayleigh(const SymmetricMatrix& m, const Vec& v);

// Extreme eigenvalues by Lanczos with full reorthogonalization on the explicit
// matrix. Used as the operator-norm reference above the dense cutoff; the
// residual bound certifies that each value is within `residual` of some
// eigenvalue.
struct ExtremeEigen {
  double lambda_max = 0.0;
  double lambda_min = 0.0;
  double residual_max = 0.0;
  double residual_min = 0.0;
  int iterations = 0;
  bool converged = false;
};
ExtremeEigen extreme_eigenvalues(const SymmetricMatrix& m, std::uint64_t seed, double rel_tol = 1e-10,
                                 int max_iter = 400);

// ||M||: dense eigenvalues for d <= dense_cutoff, extreme_eigenvalues above.
double op_norm(const SymmetricMatrix& m, Eigen::Index dense_cutoff = 1536);

struct KdEstimate {
  Eigen::Index d = 0;
  std::vector<double> samples;  // ||W|| / sqrt(d)
  double mean = 0.0;
  double sd = 0.0;
  double stderr_ = 0.0;
};

// Empirical K_d = E||W|| / sqrt(d) over n GOE draws.
KdEstimate estimate_kd(Eigen::Index d, int n, std::uint64_t seed, int jobs = 1);

}  // namespace pcaq
