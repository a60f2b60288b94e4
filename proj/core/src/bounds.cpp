#include "pcaq/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "pcaq/common.hpp"

namespace pcaq {

namespace constants {
double c_prime() { return 2.0 / (0.5 * (1.0 - 1.0 / std::sqrt(2.0))); }
double c_double_prime() { return c_factor(0.5, 1.0); }
double c1_estimation() { return 2.0 * c_prime(); }
double c1_detection() { return std::sqrt(c_double_prime()); }
double c1_main() { return 1.0 / (2.0 * std::sqrt(c1_estimation())); }
}  // namespace constants

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

std::string describe_c1(double c1, double dflt, const char* dflt_name) {
  std::string s = "c1=" + fmt(c1);
  if (c1 == dflt) s += std::string(" (default ") + dflt_name + ")";
  else s += " (override)";
  return s;
}

void finish_probability(BoundReport& r, double raw) {
  r.raw = raw;
  r.is_probability = true;
  r.vacuous = !(raw < 1.0);
  r.value = std::clamp(raw, 0.0, 1.0);
}

}  // namespace

double f_overlap(double eps, double gamma) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw RegimeError("f_overlap: gamma must lie in [0,1)");
  if (!(eps >= 0.0)) throw RegimeError("f_overlap: eps must be >= 0");
  if (eps > 1.0 - gamma) throw RegimeError("f_overlap: eps exceeds 1 - gamma");
  const double g = gamma / (1.0 - gamma);
  const double rad = g * g + 1.0 - eps / (1.0 - gamma);
  return std::clamp(std::sqrt(std::max(rad, 0.0)) - g, 0.0, 1.0);
}

double f_overlap_floor(double eps, double gamma) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw RegimeError("f_overlap_floor: gamma must lie in [0,1)");
  if (!(eps >= 0.0) || eps > 1.0 - gamma) throw RegimeError("f_overlap_floor: eps must lie in [0, 1 - gamma]");
  const double a = std::sqrt(std::max(1.0 - eps / (1.0 - gamma), 0.0));
  const double b = gamma > 0.0 ? (1.0 - gamma - eps) / gamma : std::numeric_limits<double>::infinity();
  return std::min(a, b) / (2.0 * std::sqrt(2.0));
}

double gamma_of(double d, double lambda, double delta0, double kd) {
  if (!(d >= 1.0)) throw RegimeError("gamma_of: d must be >= 1");
  if (!(delta0 > 0.0 && delta0 < 1.0)) throw RegimeError("gamma_of: delta0 must lie in (0,1)");
  const double s = 2.0 * std::sqrt(std::log(1.0 / delta0) / d);
  if (!(lambda > kd + s))
    throw RegimeError("gamma_of: need lambda > K_d + 2 sqrt(log(1/delta0)/d) = " + fmt(kd + s));
  return (kd + s) / (lambda - s);
}

std::string to_string(ScheduleKind k) {
  switch (k) {
    case ScheduleKind::kl: return "kl";
    case ScheduleKind::chi_squared_exact: return "chi2-exact";
    case ScheduleKind::chi_squared_closed_form: return "chi2-closed";
  }
  return "unknown";
}

namespace {
void set_growth(TauSchedule& s) {
  s.growth_constant = 0.0;
  for (std::size_t k = 1; k < s.taus.size(); ++k)
    s.growth_constant = std::max(s.growth_constant, (s.taus[k] - s.taus[k - 1]) / std::log(s.d));
}
}  // namespace

TauSchedule kl_tau_schedule(double d, double lambda, int T, double C1, double C2, double tail_mass,
                            std::optional<double> tau1) {
  if (!(d > 1.0)) throw RegimeError("kl_tau_schedule: d must be > 1");
  if (!(lambda > 0.0)) throw RegimeError("kl_tau_schedule: lambda must be > 0");
  if (T < 1) throw RegimeError("kl_tau_schedule: T must be >= 1");
  if (!(C1 > 0.0)) throw RegimeError("kl_tau_schedule: C1 must be > 0");
  if (!(tail_mass > 0.0 && tail_mass < 1.0)) throw RegimeError("kl_tau_schedule: tail_mass must lie in (0,1)");
  TauSchedule s;
  s.kind = ScheduleKind::kl;
  s.d = d;
  s.lambda = lambda;
  s.c1 = C1;
  s.c2 = C2;
  s.requested = T + 1;
  const double t1 = tau1 ? *tau1 : (C2 + std::log(1.0 / tail_mass)) / C1;
  if (!(t1 > 0.0)) throw RegimeError("kl_tau_schedule: tau_1 must be > 0");
  s.taus.push_back(t1);
  if (t1 >= d) s.saturated = true;
  double sum = t1;
  for (int k = 1; k <= T && !s.saturated; ++k) {
    const double a = std::log(2.0) + 0.5 * lambda * lambda * (static_cast<double>(k) + sum);
    const double arg = C1 * d / a;
    if (arg <= 1.0) {
      s.saturated = true;
      break;
    }
    const double next = C2 / C1 + (a / C1) * (1.0 + std::log(arg));
    s.taus.push_back(next);
    sum += next;
    if (next >= d) s.saturated = true;
  }
  set_growth(s);
  return s;
}

double c_factor(double delta, double lambda) {
  if (!(delta > 0.0 && delta < 1.0)) throw RegimeError("c_factor: delta must lie in (0,1)");
  if (!(lambda >= 1.0)) throw RegimeError("c_factor: lambda must be >= 1");
  const double l2 = lambda * lambda;
  const double num = 1.0 + 1.0 / l2;
  const double den = (1.0 - 1.0 / (2.0 * l2)) * (1.0 - std::sqrt(1.0 / (1.0 + std::log(1.0 / delta))));
  return num / den;
}

ChiSchedules chi_tau_schedule(double d, double lambda, double delta, int T) {
  if (!(delta > 0.0 && delta < 1.0)) throw RegimeError("chi_tau_schedule: delta must lie in (0,1)");
  if (!(lambda >= 1.0)) throw RegimeError("chi_tau_schedule: lambda must be >= 1");
  if (T < 1) throw RegimeError("chi_tau_schedule: T must be >= 1");
  ChiSchedules out;
  const double c = c_factor(delta, lambda);
  const double l2 = lambda * lambda;
  const double tau1 = 2.0 * std::pow(std::sqrt(std::log(1.0 / delta)) + 1.0, 2);
  for (TauSchedule* s : {&out.exact, &out.closed}) {
    s->d = d;
    s->lambda = lambda;
    s->delta = delta;
    s->requested = T + 1;
  }
  out.exact.kind = ScheduleKind::chi_squared_exact;
  out.closed.kind = ScheduleKind::chi_squared_closed_form;
  double sum = 0.0;
  for (int k = 1; k <= T + 1; ++k) {
    const double rhs = l2 * sum + static_cast<double>(k - 1) * tau1;
    // Positive root of (1/2)(x - sqrt 2)^2 = rhs in x = sqrt(tau_k).
    const double x = std::sqrt(2.0) + std::sqrt(2.0 * rhs);
    const double ex = k == 1 ? tau1 : x * x;
    out.exact.taus.push_back(ex);
    sum += ex;
    out.closed.taus.push_back(tau1 * std::pow(2.0 * l2 * c, k - 1));
  }
  for (TauSchedule* s : {&out.exact, &out.closed}) {
    for (double t : s->taus)
      if (d > 0 && t >= d) s->saturated = true;
    if (d > 1) set_growth(*s);
  }
  return out;
}

double chi_violation_bound(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw RegimeError("chi_violation_bound: delta must lie in (0,1)");
  return 2.0 * delta / (1.0 - delta);
}

BoundReport estimation_success_bound(double d, double eta, double lambda, double T, double c1) {
  if (!(eta >= 0.0)) throw RegimeError("estimation_success_bound: eta must be >= 0");
  if (!(lambda >= 1.0)) throw RegimeError("estimation_success_bound: lambda must be >= 1");
  if (!(T >= 0.0)) throw RegimeError("estimation_success_bound: T must be >= 0");
  if (!(c1 > 0.0)) throw RegimeError("estimation_success_bound: c1 must be > 0");
  BoundReport r;
  r.kind = "estimation_success";
  r.params = {{"d", d}, {"eta", eta}, {"lambda", lambda}, {"T", T}};
  r.constants_used = describe_c1(c1, constants::c1_estimation(), "2c'");
  const double lead = 2.0 / (1.0 - std::exp(-1.0));
  // exponent = -d eta / (4 (c1 lambda^2)^T), evaluated in logs.
  const double log_den = std::log(4.0) + T * std::log(c1 * lambda * lambda);
  const double expo = eta > 0.0 ? -std::exp(std::log(d * eta) - log_den) : 0.0;
  finish_probability(r, lead * std::exp(expo));
  return r;
}

BoundReport main_theorem_bound(double d, double gamma, double eps, double T, double c1) {
  if (!(c1 > 0.0)) throw RegimeError("main_theorem_bound: c1 must be > 0");
  if (!(gamma > 0.0 && gamma < 1.0 / c1 && gamma < 1.0))
    throw RegimeError("main_theorem_bound: need gamma in (0, 1/c1) with gamma < 1 (1/c1 = " + fmt(1.0 / c1) + ")");
  if (!(eps > 0.0 && eps < 1.0 - gamma)) throw RegimeError("main_theorem_bound: need eps in (0, 1 - gamma)");
  if (!(T >= 0.0)) throw RegimeError("main_theorem_bound: T must be >= 0");
  BoundReport r;
  r.kind = "main_theorem";
  r.params = {{"d", d}, {"gamma", gamma}, {"eps", eps}, {"T", T}};
  r.constants_used = describe_c1(c1, constants::c1_main(), "1/(2 sqrt(2c'))");
  const double f = f_overlap(eps, gamma);
  const double expo = -(d / 4.0) * f * f * std::exp(2.0 * T * std::log(c1 * gamma));
  finish_probability(r, 12.0 * std::exp(expo));
  return r;
}

BoundReport detection_tv_bound(double d, double lambda, double T, double c1) {
  if (!(lambda > 2.0)) throw RegimeError("detection_tv_bound: lambda must be > 2");
  if (!(d > 1.0)) throw RegimeError("detection_tv_bound: d must be > 1");
  if (!(T >= 0.0)) throw RegimeError("detection_tv_bound: T must be >= 0");
  if (!(c1 > 0.0)) throw RegimeError("detection_tv_bound: c1 must be > 0");
  BoundReport r;
  r.kind = "detection_tv";
  r.params = {{"d", d}, {"lambda", lambda}, {"T", T}};
  r.constants_used = describe_c1(c1, constants::c1_detection(), "sqrt(c'')");
  const double logx = T * std::log(c1 * lambda);  // log (c1 lambda)^T
  const double logd = std::log(d);
  const double inner = logd - logx;
  const double raw = std::sqrt(2.0) * std::exp(logx - 0.25 * logd) * (std::sqrt(std::max(inner, 0.0)) + 4.0);
  finish_probability(r, raw);
  if (inner < 0.0) {
    r.vacuous = true;
    r.value = 1.0;
    r.note = "(c1 lambda)^T > d: inner log clamped to 0";
  }
  return r;
}

BoundReport detection_error_bound(double d, double lambda, double T, double delta0, double c1, double kd) {
  if (!(delta0 > 0.0 && delta0 < 1.0)) throw RegimeError("detection_error_bound: delta0 must lie in (0,1)");
  const double need = kd + 4.0 / std::sqrt(d) * std::sqrt(std::log(1.0 / delta0));
  if (!(lambda >= need))
    throw RegimeError("detection_error_bound: need lambda >= K_d + 4 d^{-1/2} sqrt(log(1/delta0)) = " + fmt(need));
  const BoundReport tv = detection_tv_bound(d, lambda, T, c1);
  BoundReport r;
  r.kind = "detection_error";
  r.params = {{"d", d}, {"lambda", lambda}, {"T", T}, {"delta0", delta0}, {"kd", kd}};
  r.constants_used = tv.constants_used;
  r.is_probability = false;
  r.raw = 1.0 - tv.value - 3.0 * delta0;
  r.value = std::max(0.0, r.raw);
  r.vacuous = r.value <= 0.0;
  r.note = tv.note;
  return r;
}

std::string to_string(BoundKind k) {
  switch (k) {
    case BoundKind::main_theorem: return "main_theorem";
    case BoundKind::estimation_success: return "estimation_success";
    case BoundKind::detection_tv: return "detection_tv";
    case BoundKind::detection_error: return "detection_error";
  }
  return "unknown";
}

BoundKind parse_bound_kind(const std::string& s) {
  if (s == "main_theorem" || s == "main") return BoundKind::main_theorem;
  if (s == "estimation_success" || s == "estimation") return BoundKind::estimation_success;
  if (s == "detection_tv" || s == "detection-tv") return BoundKind::detection_tv;
  if (s == "detection_error" || s == "detection-error") return BoundKind::detection_error;
  throw std::invalid_argument("unknown bound kind '" + s + "'");
}

BoundReport evaluate_bound(BoundKind kind, const BoundParams& p, double T) {
  switch (kind) {
    case BoundKind::main_theorem:
      return main_theorem_bound(p.d, p.gamma, p.eps, T, p.c1.value_or(constants::c1_main()));
    case BoundKind::estimation_success:
      return estimation_success_bound(p.d, p.eta, p.lambda, T, p.c1.value_or(constants::c1_estimation()));
    case BoundKind::detection_tv:
      return detection_tv_bound(p.d, p.lambda, T, p.c1.value_or(constants::c1_detection()));
    case BoundKind::detection_error:
      return detection_error_bound(p.d, p.lambda, T, p.delta0, p.c1.value_or(constants::c1_detection()), p.kd);
  }
  throw std::invalid_argument("evaluate_bound: unknown kind");
}

int min_queries(BoundKind kind, const BoundParams& p, double threshold, int cap) {
  if (!(threshold > 0.0 && threshold < 1.0)) throw std::invalid_argument("min_queries: threshold must lie in (0,1)");
  if (cap < 0) throw std::invalid_argument("min_queries: cap must be >= 0");
  const bool decreasing = kind == BoundKind::detection_error;
  double prev = decreasing ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
  for (int T = 0; T <= cap; ++T) {
    const double v = evaluate_bound(kind, p, T).value;
    if (decreasing ? v > prev + 1e-15 : v < prev - 1e-15)
      throw std::runtime_error("min_queries: bound is not monotone in T for " + to_string(kind));
    prev = v;
    if (decreasing ? v <= threshold : v >= threshold) return T;
  }
  return cap + 1;
}

int detection_vacuity_threshold(double d, double lambda, double c1, int cap) {
  for (int T = 0; T <= cap; ++T)
    if (detection_tv_bound(d, lambda, T, c1).vacuous) return T;
  return cap + 1;
}

double main_theorem_T_at(double d, double gamma, double eps, double c1, double level) {
  const double f = f_overlap(eps, gamma);
  if (!(c1 * gamma > 0.0 && c1 * gamma < 1.0)) throw RegimeError("main_theorem_T_at: need 0 < c1 gamma < 1");
  return std::log(d * f * f / (4.0 * std::log(12.0 / level))) / (2.0 * std::log(1.0 / (c1 * gamma)));
}

double estimation_T_at(double d, double eta, double lambda, double c1, double level) {
  const double lead = 2.0 / (1.0 - std::exp(-1.0));
  if (!(level < lead)) throw RegimeError("estimation_T_at: level must be below the bound's prefactor");
  if (!(c1 * lambda * lambda > 1.0)) throw RegimeError("estimation_T_at: need c1 lambda^2 > 1");
  return std::log(d * eta / (4.0 * std::log(lead / level))) / std::log(c1 * lambda * lambda);
}

}  // namespace pcaq
