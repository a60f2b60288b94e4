#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pcaq/bounds.hpp"
#include "pcaq/csv.hpp"
#include "pcaq/instance.hpp"
#include "pcaq/oracle.hpp"
#include "pcaq/rng.hpp"
#include "pcaq/stats.hpp"
#include "pcaq/verify.hpp"

namespace pcaq::cli {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw UsageError(msg);
}

std::string num(double x) { return fmt_num(x); }

template <class T>
void opt_flag(std::ostringstream& os, const char* name, const std::optional<T>& v) {
  if (v) os << " --" << name << ' ' << fmt_num(static_cast<double>(*v));
}

}  // namespace

std::string header(const SimulateConfig& c) {
  std::ostringstream os;
  os << "# pcaq simulate --alg " << c.alg << " --d " << c.d << " --lambda " << num(c.lambda) << " --T " << c.T
     << " --trials " << c.trials << " --seed " << c.seed;
  return os.str();
}

std::string header(const BoundsConfig& c) {
  std::ostringstream os;
  os << "# pcaq bounds --kind " << c.kind << " --d " << num(c.d);
  opt_flag(os, "lambda", c.lambda);
  opt_flag(os, "gamma", c.gamma);
  os << " --eps " << num(c.eps) << " --eta " << num(c.eta) << " --delta " << num(c.delta) << " --delta0 "
     << num(c.delta0) << " --T-range " << c.t_min << ':' << c.t_max;
  opt_flag(os, "threshold", c.threshold);
  opt_flag(os, "c1-main", c.c1_main);
  opt_flag(os, "c1-estimation", c.c1_estimation);
  opt_flag(os, "c1-detection", c.c1_detection);
  os << " --kd " << num(c.kd);
  return os.str();
}

std::string header(const VerifyConfig& c) {
  std::ostringstream os;
  os << "# pcaq verify --check " << c.check << (c.quick ? " --quick" : "");
  opt_flag(os, "d", c.d);
  opt_flag(os, "n", c.n);
  os << " --seed " << c.seed;
  return os.str();
}

std::string header(const ScalingConfig& c) {
  std::ostringstream os;
  os << "# pcaq scaling --alg " << c.alg << " --d-grid ";
  for (std::size_t i = 0; i < c.d_grid.size(); ++i) os << (i ? "," : "") << c.d_grid[i];
  os << " --lambda " << num(c.lambda) << " --target " << num(c.target) << " --trials " << c.trials << " --max-T "
     << c.max_T << " --delta0 " << num(c.delta0) << " --kd " << num(c.kd);
  opt_flag(os, "c1-main", c.c1_main);
  os << " --seed " << c.seed;
  return os.str();
}

int cmd_simulate(const SimulateConfig& c, std::ostream& out, std::ostream& log) {
  const AlgorithmKind kind = [&] {
    try {
      return parse_algorithm(c.alg);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }();
  require(c.d >= 1, "--d must be >= 1");
  require(std::isfinite(c.lambda) && c.lambda >= 0, "--lambda must be finite and >= 0");
  require(c.T >= 1, "--T must be >= 1");
  require(c.trials >= 1, "--trials must be >= 1");
  require(c.jobs >= 1, "--jobs must be >= 1");

  struct Row {
    int used = 0;
    Metrics m;
  };
  std::vector<Row> rows(static_cast<std::size_t>(c.trials));
  parallel_for(rows.size(), c.jobs, [&](std::size_t t) {
    const std::uint64_t ts = trial_seed(c.seed, t);
    const SpikedInstance inst = make_spiked(c.d, c.lambda, ts);
    QuerySession s(inst, c.T);
    AlgorithmConfig cfg;
    cfg.kind = kind;
    cfg.budget = c.T;
    cfg.seed = derive_seed(ts, 0xa1);
    const AlgorithmResult r = run_algorithm(s, cfg);
    rows[t].used = r.queries_used;
    rows[t].m = score(s.sealed(), inst);
  });

  CsvWriter w(out);
  w.comment(header(c).substr(2));
  std::vector<std::string> head = {"trial", "T", "queries_used", "rayleigh_ratio", "spike_overlap"};
  for (int k = 1; k <= c.T; ++k) head.push_back("overlap_" + std::to_string(k));
  w.row(head);
  for (std::size_t t = 0; t < rows.size(); ++t) {
    std::vector<std::string> f = {std::to_string(t), std::to_string(c.T), std::to_string(rows[t].used),
                                  num(rows[t].m.rayleigh_ratio), num(rows[t].m.spike_overlap)};
    for (int k = 0; k < c.T; ++k) {
      const auto& so = rows[t].m.step_overlaps;
      f.push_back(k < static_cast<int>(so.size()) ? num(so[static_cast<std::size_t>(k)]) : "");
    }
    w.row(f);
  }
  auto med = [&](auto get) {
    std::vector<double> xs;
    for (const auto& r : rows) {
      const double x = get(r);
      if (!std::isnan(x)) xs.push_back(x);
    }
    return num(median(xs));
  };
  std::vector<std::string> f = {"median", std::to_string(c.T), med([](const Row& r) { return double(r.used); }),
                                med([](const Row& r) { return r.m.rayleigh_ratio; }),
                                med([](const Row& r) { return r.m.spike_overlap; })};
  for (int k = 0; k < c.T; ++k)
    f.push_back(med([k](const Row& r) {
      return k < static_cast<int>(r.m.step_overlaps.size()) ? r.m.step_overlaps[static_cast<std::size_t>(k)]
                                                            : std::nan("");
    }));
  w.row(f);
  log << "simulate: " << c.trials << " trials of " << c.alg << " at d=" << c.d << ", T=" << c.T << '\n';
  return kExitOk;
}

int cmd_bounds(const BoundsConfig& c, std::ostream& out, std::ostream& log) {
  static const std::vector<std::string> kinds = {"main", "estimation", "detection-tv", "detection-error",
                                                 "kl-schedule", "chi-schedule"};
  require(c.kind == "all" || std::find(kinds.begin(), kinds.end(), c.kind) != kinds.end(),
          "--kind must be one of main, estimation, detection-tv, detection-error, kl-schedule, chi-schedule, all");
  require(c.d >= 1, "--d must be >= 1");
  require(c.t_min >= 0 && c.t_max >= c.t_min, "--T-range must be a:b with 0 <= a <= b");
  require(!c.threshold || (*c.threshold > 0 && *c.threshold < 1), "--threshold must lie in (0,1)");
  auto want = [&](const std::string& k) { return c.kind == "all" || c.kind == k; };

  CsvWriter w(out);
  w.comment(header(c).substr(2));
  w.row({"kind", "T", "value", "raw", "vacuous", "constants", "note"});
  auto regime_row = [&](const std::string& kind, const std::string& T, const std::string& msg) {
    w.row({kind, T, "nan", "nan", "", "", msg});
  };

  BoundParams p;
  p.d = c.d;
  p.eps = c.eps;
  p.eta = c.eta;
  p.delta0 = c.delta0;
  p.kd = c.kd;
  if (c.lambda) p.lambda = *c.lambda;
  std::string gamma_note;
  std::optional<double> gamma = c.gamma;
  if (!gamma && c.lambda) {
    try {
      gamma = gamma_of(c.d, *c.lambda, c.delta0, c.kd);
      gamma_note = "gamma from lambda: " + num(*gamma);
    } catch (const RegimeError& e) {
      gamma_note = e.what();
    }
  }

  struct Sel {
    std::string name;
    BoundKind kind;
    std::optional<double> c1;
    std::string missing;
  };
  std::vector<Sel> sel;
  if (want("main")) sel.push_back({"main", BoundKind::main_theorem, c.c1_main, gamma ? "" : "needs --gamma or a valid --lambda" + (gamma_note.empty() ? "" : ": " + gamma_note)});
  if (want("estimation")) sel.push_back({"estimation", BoundKind::estimation_success, c.c1_estimation, c.lambda ? "" : "needs --lambda"});
  if (want("detection-tv")) sel.push_back({"detection-tv", BoundKind::detection_tv, c.c1_detection, c.lambda ? "" : "needs --lambda"});
  if (want("detection-error")) sel.push_back({"detection-error", BoundKind::detection_error, c.c1_detection, c.lambda ? "" : "needs --lambda"});

  for (const Sel& s : sel) {
    BoundParams q = p;
    q.c1 = s.c1;
    if (s.kind == BoundKind::main_theorem && gamma) q.gamma = *gamma;
    if (!s.missing.empty()) {
      regime_row(s.name, "", s.missing);
      continue;
    }
    for (int T = c.t_min; T <= c.t_max; ++T) {
      try {
        const BoundReport r = evaluate_bound(s.kind, q, T);
        std::string note = r.note;
        if (s.kind == BoundKind::main_theorem && !gamma_note.empty()) note += (note.empty() ? "" : "; ") + gamma_note;
        w.row({s.name, std::to_string(T), num(r.value), num(r.raw), r.vacuous ? "1" : "0", r.constants_used, note});
      } catch (const std::invalid_argument& e) {
        regime_row(s.name, std::to_string(T), e.what());
      }
    }
    if (c.threshold) {
      try {
        const int mq = min_queries(s.kind, q, *c.threshold);
        w.row({"min_queries:" + s.name, std::to_string(mq), num(*c.threshold), "", "", "",
               s.kind == BoundKind::detection_error ? "first T with bound <= threshold"
                                                    : "first T with bound >= threshold"});
      } catch (const std::exception& e) {
        regime_row("min_queries:" + s.name, "", e.what());
      }
    }
  }

  if (want("kl-schedule") || want("chi-schedule")) {
    if (!c.lambda) {
      if (want("kl-schedule")) regime_row("kl-schedule", "", "needs --lambda");
      if (want("chi-schedule")) regime_row("chi-schedule", "", "needs --lambda");
    } else {
      auto emit = [&](const TauSchedule& s) {
        const std::string name = to_string(s.kind);
        for (std::size_t k = 0; k < s.taus.size(); ++k)
          w.row({name, std::to_string(k + 1), num(s.taus[k]), num(s.taus[k]), s.taus[k] >= c.d ? "1" : "0",
                 "C1=" + num(s.c1) + " C2=" + num(s.c2), ""});
        if (s.saturated)
          w.row({name, "", "nan", "nan", "1", "",
                 "saturated after " + std::to_string(s.taus.size()) + " of " + std::to_string(s.requested) + " entries"});
      };
      if (want("kl-schedule")) {
        try {
          emit(kl_tau_schedule(c.d, *c.lambda, c.t_max));
        } catch (const std::invalid_argument& e) {
          regime_row("kl", "", e.what());
        }
      }
      if (want("chi-schedule")) {
        try {
          const ChiSchedules cs = chi_tau_schedule(c.d, *c.lambda, c.delta, c.t_max);
          emit(cs.exact);
          emit(cs.closed);
        } catch (const std::invalid_argument& e) {
          regime_row("chi2", "", e.what());
        }
      }
    }
  }
  log << "bounds: T = " << c.t_min << ".." << c.t_max << '\n';
  return kExitOk;
}

int cmd_verify(const VerifyConfig& c, std::ostream& out, std::ostream& log) {
  const std::vector<std::string> all = check_names();
  std::vector<std::string> selected;
  if (c.check == "all") {
    selected = all;
  } else {
    std::stringstream ss(c.check);
    std::string name;
    while (std::getline(ss, name, ','))
      if (!name.empty()) selected.push_back(name);
  }
  require(!selected.empty(), "--check must name at least one check");
  for (const auto& name : selected) {
    if (std::find(all.begin(), all.end(), name) == all.end()) {
      std::string known;
      for (const auto& n : all) known += (known.empty() ? "" : ", ") + n;
      throw UsageError("unknown check '" + name + "' (known: " + known + ", all)");
    }
  }
  require(c.jobs >= 1, "--jobs must be >= 1");
  require(!c.d || *c.d >= 1, "--d must be >= 1");
  require(!c.n || *c.n >= 1, "--n must be >= 1");

  VerifyOptions opt;
  opt.seed = c.seed;
  opt.jobs = c.jobs;
  opt.d = c.d;
  opt.n = c.n;
  std::vector<McReport> reports;
  bool ok = true;
  for (const auto& name : selected) {
    McReport r = run_check(name, c.quick, opt);
    log << r.summary();
    log.flush();
    ok = ok && r.pass();
    reports.push_back(std::move(r));
  }
  out << header(c) << '\n' << reports_csv(reports);
  int failed = 0;
  for (const auto& r : reports) failed += !r.pass();
  log << (ok ? "all checks passed" : std::to_string(failed) + " check(s) failed") << " (" << reports.size()
      << " run)\n";
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_scaling(const ScalingConfig& c, std::ostream& out, std::ostream& log) {
  const AlgorithmKind kind = [&] {
    try {
      return parse_algorithm(c.alg);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }();
  require(!c.d_grid.empty(), "--d-grid must list at least one dimension");
  for (int d : c.d_grid) require(d >= 2, "--d-grid entries must be >= 2");
  require(c.target > 0 && c.target < 1, "--target must lie in (0,1)");
  require(c.trials >= 1 && c.max_T >= 1 && c.jobs >= 1, "--trials, --max-T and --jobs must be >= 1");
  // Regime checks before any simulation.
  std::vector<double> gammas;
  for (int d : c.d_grid) {
    const double g = gamma_of(d, c.lambda, c.delta0, c.kd);
    const double c1 = c.c1_main.value_or(constants::c1_main());
    if (!(1.0 - c.target < 1.0 - g)) throw RegimeError("scaling: eps = 1 - target must be below 1 - gamma = " + num(1.0 - g));
    if (!(c1 * g < 1.0)) throw RegimeError("scaling: need c1 gamma < 1");
    gammas.push_back(g);
  }

  CsvWriter w(out);
  w.comment(header(c).substr(2));
  w.row({"d", "gamma", "empirical_median", "theoretical_min_queries", "theoretical_T_continuous", "trials"});
  for (std::size_t i = 0; i < c.d_grid.size(); ++i) {
    const int d = c.d_grid[i];
    std::vector<int> qs(static_cast<std::size_t>(c.trials));
    const std::uint64_t ds = derive_seed(c.seed, static_cast<std::uint64_t>(d));
    parallel_for(qs.size(), c.jobs, [&](std::size_t t) {
      qs[t] = queries_to_target(kind, d, c.lambda, c.target, trial_seed(ds, t), c.max_T);
    });
    BoundParams bp;
    bp.d = d;
    bp.gamma = gammas[i];
    bp.eps = 1.0 - c.target;
    bp.c1 = c.c1_main;
    const int mq = min_queries(BoundKind::main_theorem, bp, 0.5);
    const double tc = main_theorem_T_at(d, gammas[i], bp.eps, c.c1_main.value_or(constants::c1_main()));
    w.row({std::to_string(d), num(gammas[i]), num(median_int(qs)), std::to_string(mq), num(tc),
           std::to_string(c.trials)});
    log << "scaling: d=" << d << " median " << median_int(qs) << ", theory " << mq << '\n';
  }
  return kExitOk;
}

}  // namespace pcaq::cli
