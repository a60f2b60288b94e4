#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pcaq/algorithms.hpp"
#include "pcaq/common.hpp"

namespace pcaq {

// One comparison inside a Monte-Carlo report. Tail checks are one-sided:
// `le` passes when empirical <= bound + sigmas * stderr.
struct McRow {
  std::string label;
  double empirical = 0.0;
  double bound = 0.0;
  double stderr_ = 0.0;
  std::string relation;  // "<=", ">=", "==", "info"
  bool pass = true;
  std::string note;

  static McRow le(std::string label, double emp, double bound, double se, double sigmas = 3.0);
  static McRow ge(std::string label, double emp, double bound, double se, double sigmas = 3.0);
  static McRow info(std::string label, double value, std::string note = {});
  static McRow check(std::string label, bool ok, double emp, double bound, std::string relation, std::string note = {});
};

struct McReport {
  std::string check;
  std::vector<std::pair<std::string, std::string>> params;
  std::uint64_t seed = 0;
  std::size_t n_samples = 0;
  std::vector<McRow> rows;
  double seconds = 0.0;

  bool pass() const;
  std::string param_string() const;
  std::string summary() const;  // human-readable, one line per row
};

struct VerifyOptions {
  std::uint64_t seed = 20240601;
  int jobs = 1;
  // Overrides for the dimension and sample count of a named check.
  std::optional<int> d;
  std::optional<int> n;
};

// CSV with columns check,label,params,n,seed,empirical,bound,stderr,relation,pass,note.
std::string reports_csv(const std::vector<McReport>& reports);

// ||W||/sqrt d at each d: band [lo, hi] on the mean and sd <= sd_max.
McReport verify_kd(const std::vector<int>& d_grid, int n, const VerifyOptions& opt, double lo = 1.85,
                   double hi = 2.05, double sd_max = 0.1);

// Pr[sqrt d |<v,theta>| >= sqrt 2 + t] <= e^{-t^2/2}, plus the median check
// Pr[|<theta,v>| >= sqrt(2/d)] <= 0.55.
McReport verify_sphere_tail(int d, int n, const std::vector<double>& t_grid, const VerifyOptions& opt);

// E e^{lambda |<theta,v>|} <= e^{4 lambda^2/d + lambda sqrt(2/d)}.
McReport verify_sphere_mgf(int d, int n, const std::vector<double>& lambdas, const VerifyOptions& opt);

// theta^T W theta ~ N(0,2) and Pr[|theta^T W theta| >= t] <= 2 e^{-t^2/4}.
McReport verify_lipschitz_quadratic(int d, int n, const std::vector<double>& t_grid, const VerifyOptions& opt);

// Empirical law of the projected responses P_{i-1} M v_i (i = 1..k) for a fixed
// orthonormal query sequence: mean vs lambda <u,v_i> P_{i-1} u, covariance vs
// Sigma_i / d (relative Frobenius <= cov_tol), and the cross-covariance of
// consecutive responses vs 0.
McReport verify_conditional_law(int d, int n, double lambda, int k, const VerifyOptions& opt, double cov_tol = 0.10);

// E[W v1 v2^T W] vs v2 v1^T + <v1,v2> I; max-entry error <= tol.
McReport verify_gauss_quadratic(int d, int n, const VerifyOptions& opt, double tol = 0.05,
                                std::optional<std::pair<Vec, Vec>> vectors = std::nullopt);

// Monte-Carlo E_{P0}[(dP_u/dP0)(dP_s/dP0)] for the i-th projected response vs
// g_chi, over random configurations whose exponent lies in [0.1, max_exponent].
McReport verify_chi2_closed_form(int d, double lambda, int n, int n_configs, const VerifyOptions& opt,
                                 double rel_tol = 0.05, double max_exponent = 1.0);

// Truncated second moment <= prod g_chi <= e^{lambda^2 sum tau} on fixed
// feasible query sets, and prod_i g_chi(u,s) <= likelihood_product_bound over
// random feasible configurations.
McReport verify_likelihood_chain(int d, double lambda, int k, int n, int n_product_configs, const VerifyOptions& opt);

// KL between the conditional laws for spikes u0, u1 <= the per-step bound.
McReport verify_kl_step(int d, int n_configs, double lambda, const VerifyOptions& opt);

// Violation of the closed-form chi-square schedule by any of v^(1..T+1),
// for each algorithm on shared instances.
McReport verify_overlap_growth(const std::vector<AlgorithmKind>& kinds, int d, double lambda, double delta, int T, int n,
                               const VerifyOptions& opt);

// Sanity inversion: an algorithm that is handed theta queries it directly and
// must be reported as violating the schedule at k = 1 in every trial.
McReport verify_oracle_aware_probe(int d, double lambda, double delta, int n, const VerifyOptions& opt);

// Frequency of the three reduction events (spectral edges, class membership,
// F overlap for every Lanczos prefix up to lanczos_T) on spiked instances.
McReport verify_reduction_events(int d, double lambda, double delta0, int n, int lanczos_T, const VerifyOptions& opt,
                                 std::optional<double> kd = std::nullopt, int kd_samples = 20);

// Deterministic overlap geometry in d = 3: every grid vector w with
// w^T M w >= (1 - eps) theta^T M theta has |<w,theta>| >= F(eps, gamma).
McReport verify_inner_product_grid(int n_matrices, int grid_size, const VerifyOptions& opt);

// Lanczos Ritz-value test at threshold (2 + lambda)/2: type-I and type-II
// error against T, next to detection_error_bound.
McReport verify_detection_gap(int d, double lambda, const std::vector<int>& T_grid, int n, const VerifyOptions& opt,
                              double delta0 = 0.1);

// Convexity, normalization, linearity, data processing on random discrete
// measures, and the chi-square Bayes-risk inversion against bisection.
McReport verify_divergence_laws(int n_cases, const VerifyOptions& opt);

// KL schedule increments affine in log d; chi-square exact <= closed form;
// F >= its floor.
McReport verify_schedules(const VerifyOptions& opt);

// Empirical queries-to-target medians vs the main-theorem minimum, and the
// detection vacuity threshold ratio T*(1e12)/T*(1e6).
McReport verify_scaling(AlgorithmKind kind, const std::vector<int>& d_grid, double lambda, double target, int n,
                        int max_T, double delta0, const VerifyOptions& opt);

// Named checks for the command line. `quick` shrinks sample sizes.
std::vector<std::string> check_names();
McReport run_check(const std::string& name, bool quick, const VerifyOptions& opt);

}  // namespace pcaq
