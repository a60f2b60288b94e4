// Runs every acceptance criterion at its pinned size and prints one
// PASS/FAIL line per criterion. Exit status is the number of failures.
#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "pcaq/verify.hpp"

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Outcome from_reports(const std::vector<pcaq::McReport>& reps) {
  Outcome o{true, {}};
  int failed = 0, total = 0;
  for (const auto& r : reps)
    for (const auto& row : r.rows) {
      ++total;
      if (!row.pass) {
        ++failed;
        o.pass = false;
        std::cerr << "  failed row [" << r.check << "] " << row.label << ": " << row.empirical << ' ' << row.relation
                  << ' ' << row.bound << " (se " << row.stderr_ << ")\n";
      }
    }
  o.detail = std::to_string(total - failed) + "/" + std::to_string(total) + " rows";
  return o;
}

Outcome one(const pcaq::McReport& r) { return from_reports({r}); }

}  // namespace

int main() {
  using namespace pcaq;
  VerifyOptions opt;

  struct Criterion {
    int id;
    std::string name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "GOE norm band at d=500, 20 samples, under 30 s",
       [&] {
         const auto t0 = Clock::now();
         Outcome o = one(verify_kd({500}, 20, opt));
         const double s = seconds_since(t0);
         o.pass = o.pass && s < 30.0;
         o.detail += ", " + std::to_string(s) + " s";
         return o;
       }},
      {2, "spherical tails at d=200, n=1e5",
       [&] { return one(verify_sphere_tail(200, 100000, {0.5, 1.0, 1.5, 2.0}, opt)); }},
      {3, "conditional law under the null at d=100, n=2e4",
       [&] { return one(verify_conditional_law(100, 20000, 0.0, 2, opt, 0.10)); }},
      {4, "Gaussian quadratic identity at d=50, n=1e5", [&] { return one(verify_gauss_quadratic(50, 100000, opt, 0.05)); }},
      {5, "chi-square closed form at d=20, lambda=0.5, n=1e6, 5 configs",
       [&] { return one(verify_chi2_closed_form(20, 0.5, 1000000, 5, opt, 0.05, 1.0)); }},
      {6, "overlap-growth schedule at d=2000, lambda=3, delta=0.05, T=6, n=500",
       [&] {
         return one(verify_overlap_growth(
             {AlgorithmKind::power, AlgorithmKind::lanczos, AlgorithmKind::random_nonadaptive}, 2000, 3.0, 0.05, 6, 500,
             opt));
       }},
      {7, "f-divergence laws, 100 cases each", [&] { return one(verify_divergence_laws(100, opt)); }},
      {8, "reduction events at d=1000, lambda=4, delta0=0.1, n=200; d=3 grid",
       [&] {
         return from_reports({verify_reduction_events(1000, 4.0, 0.1, 200, 20, opt),
                              verify_inner_product_grid(50, 1000, opt)});
       }},
      {9, "scaling over d in {256,1024,4096} at lambda=8",
       [&] { return one(verify_scaling(AlgorithmKind::power, {256, 1024, 4096}, 8.0, 0.9, 21, 60, 0.1, opt)); }},
      {10, "schedule growth and chi-square ordering", [&] { return one(verify_schedules(opt)); }},
      {11, "verify --check all --quick exits 0 in under 300 s",
       [&] {
         const std::string cmd = std::string(PCAQ_CLI_PATH) + " verify --check all --quick > /dev/null 2>&1";
         const auto t0 = Clock::now();
         const int status = std::system(cmd.c_str());
         const double s = seconds_since(t0);
         const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
         return Outcome{code == 0 && s < 300.0, "exit " + std::to_string(code) + ", " + std::to_string(s) + " s"};
       }},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = Outcome{false, std::string("error: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.name << " (" << o.detail << ")"
              << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures;
}
