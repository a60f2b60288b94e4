#include "pcaq/algorithms.hpp"

#include <cmath>
#include <stdexcept>

#include "pcaq/instance.hpp"
#include "pcaq/rng.hpp"

namespace pcaq {

std::string to_string(AlgorithmKind k) {
  switch (k) {
    case AlgorithmKind::power: return "power";
    case AlgorithmKind::lanczos: return "lanczos";
    case AlgorithmKind::random_nonadaptive: return "random";
  }
  return "unknown";
}

AlgorithmKind parse_algorithm(const std::string& s) {
  if (s == "power") return AlgorithmKind::power;
  if (s == "lanczos") return AlgorithmKind::lanczos;
  if (s == "random" || s == "random-nonadaptive") return AlgorithmKind::random_nonadaptive;
  throw std::invalid_argument("unknown algorithm '" + s + "' (expected power, lanczos or random)");
}

namespace {

void check_config(const Oracle& o, const AlgorithmConfig& cfg) {
  if (cfg.budget < 1) throw std::invalid_argument("algorithm: budget must be >= 1");
  if (cfg.budget > o.remaining())
    throw std::invalid_argument("algorithm: budget exceeds the session's remaining queries");
  if (cfg.init) {
    if (cfg.init->size() != o.dim()) throw std::invalid_argument("algorithm: init has wrong dimension");
    require_unit(*cfg.init, "algorithm init");
  }
}

Vec initial_vector(const Oracle& o, const AlgorithmConfig& cfg) {
  if (cfg.init) return *cfg.init;
  return sample_uniform_sphere(o.dim(), derive_seed(cfg.seed, 0x1417));
}

}  // namespace

RitzPair ritz_top(const Mat& v, const Mat& w) {
  if (v.rows() != w.rows() || v.cols() != w.cols() || v.cols() == 0)
    throw std::invalid_argument("ritz_top: V and W must have matching nonempty shapes");
  // Orthonormalize V column by column (two-pass MGS), carrying the same
  // linear combinations through W so that WQ = M Q.
  const Eigen::Index d = v.rows(), k = v.cols();
  Mat q(d, k), mq(d, k);
  Eigen::Index r = 0;
  for (Eigen::Index j = 0; j < k; ++j) {
    Vec x = v.col(j), y = w.col(j);
    const double n0 = x.norm();
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index l = 0; l < r; ++l) {
        const double c = q.col(l).dot(x);
        x -= c * q.col(l);
        y -= c * mq.col(l);
      }
    const double n = x.norm();
    if (n <= 1e-10 * std::max(n0, 1.0)) continue;
    q.col(r) = x / n;
    mq.col(r) = y / n;
    ++r;
  }
  Mat h = q.leftCols(r).transpose() * mq.leftCols(r);
  h = 0.5 * (h + h.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  RitzPair out;
  out.value = es.eigenvalues()(r - 1);
  out.vector = (q.leftCols(r) * es.eigenvectors().col(r - 1)).normalized();
  return out;
}

AlgorithmResult run_power(Oracle& o, const AlgorithmConfig& cfg, const StepObserver& obs) {
  check_config(o, cfg);
  AlgorithmResult res;
  Vec v = initial_vector(o, cfg);
  for (int t = 1; t <= cfg.budget; ++t) {
    Vec w = o.query(v);
    ++res.queries_used;
    res.iterate_rayleigh = v.dot(w);
    if (cfg.shift != 0.0) w += cfg.shift * v;
    const double n = w.norm();
    // A zero product leaves the iterate where it is.
    Vec next = n > 0.0 ? Vec(w / n) : v;
    // The next iterate's quotient is unknown until it is queried, so the
    // power method reports the quotient of the iterate just queried.
    res.ritz_values.push_back(res.iterate_rayleigh);
    v = std::move(next);
    if (obs && !obs(t, v)) {
      res.early_termination = t < cfg.budget;
      break;
    }
  }
  res.v_hat = v;
  o.finalize(res.v_hat);
  return res;
}

AlgorithmResult run_lanczos(Oracle& o, const AlgorithmConfig& cfg, const StepObserver& obs) {
  check_config(o, cfg);
  AlgorithmResult res;
  const Eigen::Index d = o.dim();
  Mat q(d, cfg.budget), mq(d, cfg.budget);
  Vec v = initial_vector(o, cfg);
  RitzPair best;
  int k = 0;
  for (int t = 1; t <= cfg.budget; ++t) {
    q.col(k) = v;
    mq.col(k) = o.query(v);
    ++res.queries_used;
    res.iterate_rayleigh = v.dot(mq.col(k));
    ++k;
    best = ritz_top(q.leftCols(k), mq.leftCols(k));
    res.ritz_values.push_back(best.value);
    if (obs && !obs(t, best.vector)) {
      res.early_termination = t < cfg.budget;
      break;
    }
    if (t == cfg.budget) break;
    // Next Krylov direction: the newest response with all prior directions
    // removed (full reorthogonalization, two passes).
    Vec r = mq.col(k - 1);
    const double rn0 = r.norm();
    for (int pass = 0; pass < 2; ++pass)
      for (int l = 0; l < k; ++l) r -= q.col(l).dot(r) * q.col(l);
    const double rn = r.norm();
    if (rn < 1e-10 * std::max(1.0, rn0)) {
      res.early_termination = true;
      break;
    }
    v = r / rn;
  }
  res.v_hat = best.vector;
  o.finalize(res.v_hat);
  return res;
}

AlgorithmResult run_random_nonadaptive(Oracle& o, const AlgorithmConfig& cfg, const StepObserver& obs) {
  check_config(o, cfg);
  AlgorithmResult res;
  const Eigen::Index d = o.dim();
  // All queries are drawn up front from the seed, so none can depend on a
  // response.
  std::vector<Vec> plan;
  for (int t = 0; t < cfg.budget; ++t)
    plan.push_back(t == 0 && cfg.init ? *cfg.init : sample_uniform_sphere(d, derive_seed(cfg.seed, 0x2000 + t)));
  Mat v(d, cfg.budget), w(d, cfg.budget);
  RitzPair best;
  for (int t = 1; t <= cfg.budget; ++t) {
    v.col(t - 1) = plan[static_cast<std::size_t>(t - 1)];
    w.col(t - 1) = o.query(plan[static_cast<std::size_t>(t - 1)]);
    ++res.queries_used;
    res.iterate_rayleigh = v.col(t - 1).dot(w.col(t - 1));
    best = ritz_top(v.leftCols(t), w.leftCols(t));
    res.ritz_values.push_back(best.value);
    if (obs && !obs(t, best.vector)) {
      res.early_termination = t < cfg.budget;
      break;
    }
  }
  res.v_hat = best.vector;
  o.finalize(res.v_hat);
  return res;
}

AlgorithmResult run_algorithm(Oracle& o, const AlgorithmConfig& cfg, const StepObserver& obs) {
  switch (cfg.kind) {
    case AlgorithmKind::power: return run_power(o, cfg, obs);
    case AlgorithmKind::lanczos: return run_lanczos(o, cfg, obs);
    case AlgorithmKind::random_nonadaptive: return run_random_nonadaptive(o, cfg, obs);
  }
  throw std::invalid_argument("run_algorithm: unknown kind");
}

int queries_to_target_on(AlgorithmKind kind, const SymmetricMatrix& m, double op_norm_value, double target_ratio,
                         std::uint64_t alg_seed, int max_T) {
  if (!(target_ratio >= 0.0 && target_ratio < 1.0)) throw std::invalid_argument("queries_to_target: target_ratio must lie in [0,1)");
  if (max_T < 1) throw std::invalid_argument("queries_to_target: max_T must be >= 1");
  QuerySession s(m, max_T);
  AlgorithmConfig cfg;
  cfg.kind = kind;
  cfg.budget = max_T;
  cfg.seed = alg_seed;
  int hit = max_T + 1;
  const double target = target_ratio * op_norm_value;
  run_algorithm(s, cfg, [&](int t, const Vec& vh) {
    if (vh.dot(m.apply(vh)) >= target) {
      hit = t;
      return false;
    }
    return true;
  });
  return hit;
}

int queries_to_target(AlgorithmKind kind, Eigen::Index d, double lambda, double target_ratio, std::uint64_t seed,
                      int max_T) {
  const SpikedInstance inst = make_spiked(d, lambda, seed);
  return queries_to_target_on(kind, inst.matrix, op_norm(inst.matrix), target_ratio, derive_seed(seed, 0xa1), max_T);
}

}  // namespace pcaq
