#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pcaq/common.hpp"
#include "pcaq/oracle.hpp"

namespace pcaq {

enum class AlgorithmKind { power, lanczos, random_nonadaptive };

std::string to_string(AlgorithmKind k);
AlgorithmKind parse_algorithm(const std::string& s);  // "power" | "lanczos" | "random"

struct AlgorithmConfig {
  AlgorithmKind kind = AlgorithmKind::power;
  int budget = 1;
  std::uint64_t seed = 0;
  std::optional<Vec> init;  // unit vector; random on the sphere when absent
  double shift = 0.0;       // power method iterates with M + shift*I
};

struct AlgorithmResult {
  Vec v_hat;
  int queries_used = 0;
  bool early_termination = false;  // Krylov breakdown or observer stop
  std::vector<double> ritz_values;  // best Rayleigh value available after each query
  double iterate_rayleigh = 0.0;    // signed v^(T)^T M v^(T) of the last query
};

// Called after query t (1-based) with the vector the algorithm would output if
// its budget were t. Return false to stop early.
using StepObserver = std::function<bool(int t, const Vec& v_hat_t)>;

AlgorithmResult run_power(Oracle& o, const AlgorithmConfig& cfg, const StepObserver& obs = {});
AlgorithmResult run_lanczos(Oracle& o, const AlgorithmConfig& cfg, const StepObserver& obs = {});
AlgorithmResult run_random_nonadaptive(Oracle& o, const AlgorithmConfig& cfg, const StepObserver& obs = {});
AlgorithmResult run_algorithm(Oracle& o, const AlgorithmConfig& cfg, const StepObserver& obs = {});

// Rayleigh-Ritz over span(V) given W = M V: top eigenpair of the compressed
// matrix, lifted back. Rank-deficient columns of V are dropped.
struct RitzPair {
  double value = 0.0;
  Vec vector;
};
RitzPair ritz_top(const Mat& v, const Mat& w);

// Smallest T <= max_T at which the algorithm's output reaches
// v_hat^T M v_hat >= target_ratio * ||M|| on a fresh spiked instance drawn
// from `seed`; max_T + 1 when never. One instance and one growing session per
// call.
int queries_to_target(AlgorithmKind kind, Eigen::Index d, double lambda, double target_ratio, std::uint64_t seed,
                      int max_T);
// Same, on a caller-supplied matrix with known operator norm.
int queries_to_target_on(AlgorithmKind kind, const SymmetricMatrix& m, double op_norm_value, double target_ratio,
                         std::uint64_t alg_seed, int max_T);

}  // namespace pcaq
