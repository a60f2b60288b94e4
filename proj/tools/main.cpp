#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "commands.hpp"
#include "pcaq/common.hpp"
#include "pcaq/verify.hpp"

namespace {

// --out wins; otherwise $PCAQ_OUTPUT_DIR/<subcommand>.csv; otherwise stdout.
std::string resolve_output(const std::string& out, const std::string& sub) {
  if (!out.empty()) return out;
  if (const char* dir = std::getenv("PCAQ_OUTPUT_DIR"); dir && *dir)
    return (std::filesystem::path(dir) / (sub + ".csv")).string();
  return {};
}

template <class Fn>
int emit(const std::string& path, Fn run) {
  std::ostringstream buf;
  const int code = run(buf, std::cerr);
  if (path.empty()) {
    std::cout << buf.str();
    return code;
  }
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw pcaq::cli::UsageError("cannot open output file " + path);
  f << buf.str();
  std::cerr << "wrote " << path << '\n';
  return code;
}

std::vector<int> parse_grid(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw pcaq::cli::UsageError("--d-grid: bad entry '" + tok + "'");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace pcaq::cli;
  CLI::App app{"Query-complexity experiments for top-eigenvector estimation under a spiked Wigner model"};
  app.require_subcommand(1);
  std::string out;

  SimulateConfig sim;
  auto* s = app.add_subcommand("simulate", "run an algorithm on spiked instances; one CSV row per trial");
  s->add_option("--alg", sim.alg, "power | lanczos | random")->capture_default_str();
  s->add_option("--d", sim.d, "dimension")->capture_default_str();
  s->add_option("--lambda", sim.lambda, "spike strength")->capture_default_str();
  s->add_option("--T", sim.T, "query budget")->capture_default_str();
  s->add_option("--trials", sim.trials)->capture_default_str();
  s->add_option("--seed", sim.seed)->capture_default_str();
  s->add_option("--jobs", sim.jobs, "worker threads")->capture_default_str();
  s->add_option("--out", out, "output CSV path");

  BoundsConfig bc;
  std::string t_range;
  std::optional<int> t_single;
  auto* b = app.add_subcommand("bounds", "tabulate the lower bounds and overlap schedules against T");
  b->add_option("--kind", bc.kind, "main | estimation | detection-tv | detection-error | kl-schedule | chi-schedule | all")
      ->capture_default_str();
  b->add_option("--d", bc.d)->capture_default_str();
  b->add_option("--lambda", bc.lambda);
  b->add_option("--gamma", bc.gamma, "eigenratio; derived from --lambda when absent");
  b->add_option("--eps", bc.eps)->capture_default_str();
  b->add_option("--eta", bc.eta, "target squared overlap for the estimation bound")->capture_default_str();
  b->add_option("--delta", bc.delta, "chi-square schedule tail level")->capture_default_str();
  b->add_option("--delta0", bc.delta0)->capture_default_str();
  b->add_option("--T", t_single, "single T");
  b->add_option("--T-range", t_range, "a:b (inclusive)");
  b->add_option("--threshold", bc.threshold, "add a min_queries row per bound");
  b->add_option("--c1-main", bc.c1_main);
  b->add_option("--c1-estimation", bc.c1_estimation);
  b->add_option("--c1-detection", bc.c1_detection);
  b->add_option("--kd", bc.kd)->capture_default_str();
  b->add_option("--out", out);

  VerifyConfig vc;
  auto* v = app.add_subcommand("verify", "Monte-Carlo and deterministic checks; exit 1 if any fails");
  v->add_option("--check", vc.check, "check name, comma list, or all")->capture_default_str();
  v->add_flag("--quick", vc.quick, "reduced sample sizes");
  v->add_option("--d", vc.d);
  v->add_option("--n", vc.n);
  v->add_option("--seed", vc.seed)->capture_default_str();
  v->add_option("--jobs", vc.jobs)->capture_default_str();
  v->add_option("--out", out);
  v->add_flag_callback("--list", [] {
    for (const auto& n : pcaq::check_names()) std::cout << n << '\n';
    std::exit(0);
  }, "print check names");

  ScalingConfig sc;
  std::string grid = "256,1024,4096";
  auto* g = app.add_subcommand("scaling", "empirical queries-to-target against the main-theorem minimum");
  g->add_option("--alg", sc.alg)->capture_default_str();
  g->add_option("--d-grid", grid, "comma-separated dimensions")->capture_default_str();
  g->add_option("--lambda", sc.lambda)->capture_default_str();
  g->add_option("--target", sc.target, "Rayleigh ratio target")->capture_default_str();
  g->add_option("--trials", sc.trials)->capture_default_str();
  g->add_option("--max-T", sc.max_T)->capture_default_str();
  g->add_option("--delta0", sc.delta0)->capture_default_str();
  g->add_option("--kd", sc.kd)->capture_default_str();
  g->add_option("--c1-main", sc.c1_main);
  g->add_option("--seed", sc.seed)->capture_default_str();
  g->add_option("--jobs", sc.jobs)->capture_default_str();
  g->add_option("--out", out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (s->parsed()) return emit(resolve_output(out, "simulate"), [&](auto& o, auto& l) { return cmd_simulate(sim, o, l); });
    if (b->parsed()) {
      if (t_single && !t_range.empty()) throw UsageError("give --T or --T-range, not both");
      if (t_single) {
        bc.t_min = bc.t_max = *t_single;
      } else if (!t_range.empty()) {
        const auto colon = t_range.find(':');
        if (colon == std::string::npos) throw UsageError("--T-range must look like a:b");
        try {
          bc.t_min = std::stoi(t_range.substr(0, colon));
          bc.t_max = std::stoi(t_range.substr(colon + 1));
        } catch (const std::exception&) {
          throw UsageError("--T-range must look like a:b");
        }
      }
      return emit(resolve_output(out, "bounds"), [&](auto& o, auto& l) { return cmd_bounds(bc, o, l); });
    }
    if (v->parsed()) return emit(resolve_output(out, "verify"), [&](auto& o, auto& l) { return cmd_verify(vc, o, l); });
    if (g->parsed()) {
      sc.d_grid = parse_grid(grid);
      return emit(resolve_output(out, "scaling"), [&](auto& o, auto& l) { return cmd_scaling(sc, o, l); });
    }
  } catch (const std::invalid_argument& e) {  // UsageError and RegimeError
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
