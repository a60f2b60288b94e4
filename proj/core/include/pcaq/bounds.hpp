#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pcaq {

// An evaluated bound. For probability bounds `value` is clipped to [0,1] and
// `raw` keeps the unclipped number.
struct BoundReport {
  std::string kind;
  double value = 0.0;
  double raw = 0.0;
  bool vacuous = false;
  bool is_probability = true;
  std::vector<std::pair<std::string, double>> params;
  std::string constants_used;
  std::string note;
};

namespace constants {
// 2 / ((1/2)(1 - 1/sqrt 2)), about 13.657.
double c_prime();
// c(1/2, 1), the maximum of c(delta, lambda) over delta <= 1/2, lambda >= 1; about 17.281.
double c_double_prime();
// Estimation bound: 2 c', about 27.31.
double c1_estimation();
// Detection TV bound: sqrt(c''), about 4.157. The (c'' lambda^2)^{T/2} factor
// of the chi-square argument equals (sqrt(c'') lambda)^T.
double c1_detection();
// Main theorem: 1 / (K sqrt(c1_estimation())) with K = 2, about 0.0957,
// obtained by substituting lambda ~ K / gamma into the estimation bound.
double c1_main();
}  // namespace constants

// F(eps, gamma): overlap with the spike guaranteed by a Rayleigh quotient
// within a (1 - eps) factor of theta^T M theta. Requires gamma in [0,1) and
// eps in [0, 1 - gamma].
double f_overlap(double eps, double gamma);
// (1/(2 sqrt 2)) min{ sqrt(1 - eps/(1-gamma)), (1 - gamma - eps)/gamma }.
double f_overlap_floor(double eps, double gamma);

// Eigenratio reached by the spiked model with probability >= 1 - 2 delta0.
// Throws RegimeError unless lambda > kd + 2 sqrt(log(1/delta0)/d).
double gamma_of(double d, double lambda, double delta0, double kd);

enum class ScheduleKind { kl, chi_squared_exact, chi_squared_closed_form };
std::string to_string(ScheduleKind k);

struct TauSchedule {
  ScheduleKind kind = ScheduleKind::kl;
  std::vector<double> taus;  // tau_1 .. tau_{T+1} (possibly truncated)
  int requested = 0;         // T + 1
  bool saturated = false;    // truncated, or some tau reached d
  double d = 0, lambda = 0, delta = 0, c1 = 0, c2 = 0;
  // max_k (tau_{k+1} - tau_k) / log d over the computed entries.
  double growth_constant = 0;
};

// Overlap-information schedule from the KL recursion with tail constants
// (C1, C2). tau_1 solves e^{C2 - C1 tau_1} = tail_mass unless `tau1` is given.
// Stops (saturated) once C1 d / A_k <= 1 or a value reaches d.
TauSchedule kl_tau_schedule(double d, double lambda, int T, double C1 = 0.125, double C2 = 4.0,
                            double tail_mass = 0.5, std::optional<double> tau1 = std::nullopt);

// c(delta, lambda) = (1 + 1/lambda^2) / ((1 - 1/(2 lambda^2)) (1 - sqrt(1/(1 + log(1/delta))))).
double c_factor(double delta, double lambda);

struct ChiSchedules {
  TauSchedule exact;   // 1/2 (sqrt(tau_k) - sqrt 2)^2 = lambda^2 sum_{i<k} tau_i + (k-1) tau_1
  TauSchedule closed;  // tau_1 (2 lambda^2 c(delta, lambda))^{k-1}
};
ChiSchedules chi_tau_schedule(double d, double lambda, double delta, int T);
// Mass of spikes violating the chi-square schedule: 2 delta / (1 - delta).
double chi_violation_bound(double delta);

// Success probability bound for reaching <v_hat, theta>^2 >= eta:
// (2/(1-1/e)) exp(-d eta / (4 (c1 lambda^2)^T)).
BoundReport estimation_success_bound(double d, double eta, double lambda, double T,
                                     double c1 = constants::c1_estimation());
// 12 exp(-(d/4) F(eps, gamma)^2 (c1 gamma)^{2T}); gamma in (0, 1/c1), eps in (0, 1-gamma).
BoundReport main_theorem_bound(double d, double gamma, double eps, double T, double c1 = constants::c1_main());
// sqrt 2 (c1 lambda)^T d^{-1/4} (sqrt(log(d / (c1 lambda)^T)) + 4), lambda > 2.
BoundReport detection_tv_bound(double d, double lambda, double T, double c1 = constants::c1_detection());
// max(0, 1 - tv - 3 delta0), a lower bound on type-I + type-II error.
// Requires lambda >= kd + 4 d^{-1/2} sqrt(log(1/delta0)).
BoundReport detection_error_bound(double d, double lambda, double T, double delta0,
                                  double c1 = constants::c1_detection(), double kd = 2.0);

enum class BoundKind { main_theorem, estimation_success, detection_tv, detection_error };
std::string to_string(BoundKind k);
BoundKind parse_bound_kind(const std::string& s);

struct BoundParams {
  double d = 0;
  double lambda = 0;
  double gamma = 0;
  double eps = 0;
  double eta = 0;
  double delta0 = 0.1;
  double kd = 2.0;
  std::optional<double> c1;  // kind-specific default when absent
};

BoundReport evaluate_bound(BoundKind kind, const BoundParams& p, double T);

// Smallest integer T >= 0 with bound(T) >= threshold (bounds that weaken as T
// grows: main_theorem, estimation_success, detection_tv) or bound(T) <=
// threshold (detection_error). Returns cap + 1 when not reached. Throws if
// the scanned values are not monotone.
int min_queries(BoundKind kind, const BoundParams& p, double threshold, int cap = 10000);

// Smallest integer T >= 0 at which detection_tv_bound becomes vacuous
// (raw value >= 1); cap + 1 if never.
int detection_vacuity_threshold(double d, double lambda, double c1 = constants::c1_detection(), int cap = 10000);

// Continuous T at which main_theorem_bound equals `level`:
// log(d F^2 / (4 log(12/level))) / (2 log(1/(c1 gamma))).
double main_theorem_T_at(double d, double gamma, double eps, double c1, double level = 0.5);
// Continuous T at which estimation_success_bound equals `level`.
double estimation_T_at(double d, double eta, double lambda, double c1, double level = 0.5);

}  // namespace pcaq
