#include <functional>
#include <map>
#include <stdexcept>

#include "pcaq/verify.hpp"

namespace pcaq {

namespace {

using Runner = std::function<McReport(bool quick, const VerifyOptions&)>;

int pick(const std::optional<int>& override_value, bool quick, int full, int fast) {
  if (override_value) return *override_value;
  return quick ? fast : full;
}

const std::vector<std::pair<std::string, Runner>>& registry() {
  static const std::vector<std::pair<std::string, Runner>> r = {
      {"kd",
       [](bool q, const VerifyOptions& o) {
         return verify_kd({pick(o.d, q, 500, 500)}, pick(o.n, q, 20, 20), o);
       }},
      {"sphere-tail",
       [](bool q, const VerifyOptions& o) {
         return verify_sphere_tail(pick(o.d, q, 200, 200), pick(o.n, q, 100000, 100000), {0.0, 0.5, 1.0, 1.5, 2.0}, o);
       }},
      {"sphere-mgf",
       [](bool q, const VerifyOptions& o) {
         return verify_sphere_mgf(pick(o.d, q, 100, 100), pick(o.n, q, 100000, 20000), {1.0, 5.0, 10.0}, o);
       }},
      {"lipschitz",
       [](bool q, const VerifyOptions& o) {
         return verify_lipschitz_quadratic(pick(o.d, q, 200, 100), pick(o.n, q, 100000, 20000), {1.0, 2.0, 3.0, 4.0}, o);
       }},
      {"conditional-law",
       [](bool q, const VerifyOptions& o) {
         const int d = pick(o.d, q, 100, 100);
         const int n = pick(o.n, q, 20000, 20000);
         McReport rep = verify_conditional_law(d, n, 0.0, 2, o);
         // Spiked case on half the sample, looser covariance tolerance.
         const McReport sp = verify_conditional_law(d, n / 2, 2.0, 2, o, 0.15);
         for (McRow row : sp.rows) {
           row.label = "lambda=2: " + row.label;
           rep.rows.push_back(row);
         }
         rep.seconds += sp.seconds;
         return rep;
       }},
      {"gauss-quadratic",
       [](bool q, const VerifyOptions& o) {
         return verify_gauss_quadratic(pick(o.d, q, 50, 50), pick(o.n, q, 100000, 50000), o);
       }},
      {"chi2-closed-form",
       [](bool q, const VerifyOptions& o) {
         return verify_chi2_closed_form(pick(o.d, q, 20, 20), 0.5, pick(o.n, q, 1000000, 200000), q ? 3 : 5, o);
       }},
      {"likelihood-chain",
       [](bool q, const VerifyOptions& o) {
         return verify_likelihood_chain(pick(o.d, q, 20, 20), 0.5, 3, pick(o.n, q, 200000, 50000), 100, o);
       }},
      {"kl-step",
       [](bool q, const VerifyOptions& o) { return verify_kl_step(pick(o.d, q, 20, 20), 100, 1.0, o); }},
      {"overlap-growth",
       [](bool q, const VerifyOptions& o) {
         return verify_overlap_growth({AlgorithmKind::power, AlgorithmKind::lanczos, AlgorithmKind::random_nonadaptive},
                                      pick(o.d, q, 2000, 500), 3.0, 0.05, 6, pick(o.n, q, 500, 200), o);
       }},
      {"oracle-probe",
       [](bool q, const VerifyOptions& o) {
         return verify_oracle_aware_probe(pick(o.d, q, 200, 200), 3.0, 0.05, pick(o.n, q, 50, 20), o);
       }},
      {"reduction-events",
       [](bool q, const VerifyOptions& o) {
         return verify_reduction_events(pick(o.d, q, 1000, 400), 4.0, 0.1, pick(o.n, q, 200, 100), 20, o);
       }},
      {"inner-product-grid",
       [](bool q, const VerifyOptions& o) { return verify_inner_product_grid(q ? 20 : 50, pick(o.n, q, 1000, 1000), o); }},
      {"detection-gap",
       [](bool q, const VerifyOptions& o) {
         std::vector<int> grid;
         for (int t = 1; t <= 12; ++t) grid.push_back(t);
         return verify_detection_gap(pick(o.d, q, 4096, 1024), 8.0, grid, pick(o.n, q, 50, 30), o);
       }},
      {"divergence-laws",
       [](bool q, const VerifyOptions& o) { return verify_divergence_laws(pick(o.n, q, 100, 100), o); }},
      {"schedules", [](bool, const VerifyOptions& o) { return verify_schedules(o); }},
      {"scaling",
       [](bool q, const VerifyOptions& o) {
         return verify_scaling(AlgorithmKind::power, {256, 1024, 4096}, 8.0, 0.9, pick(o.n, q, 21, 7), 60, 0.1, o);
       }},
  };
  return r;
}

}  // namespace

std::vector<std::string> check_names() {
  std::vector<std::string> out;
  for (const auto& [name, fn] : registry()) out.push_back(name);
  return out;
}

McReport run_check(const std::string& name, bool quick, const VerifyOptions& opt) {
  for (const auto& [n, fn] : registry())
    if (n == name) return fn(quick, opt);
  throw std::invalid_argument("unknown check '" + name + "'");
}

}  // namespace pcaq
