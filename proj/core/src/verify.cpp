#include "pcaq/verify.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "pcaq/bounds.hpp"
#include "pcaq/csv.hpp"
#include "pcaq/divergences.hpp"
#include "pcaq/instance.hpp"
#include "pcaq/oracle.hpp"
#include "pcaq/rng.hpp"
#include "pcaq/stats.hpp"

namespace pcaq {

McRow McRow::le(std::string label, double emp, double bound, double se, double sigmas) {
  McRow r{std::move(label), emp, bound, se, "<=", true, {}};
  r.pass = emp <= bound + sigmas * se;
  return r;
}

McRow McRow::ge(std::string label, double emp, double bound, double se, double sigmas) {
  McRow r{std::move(label), emp, bound, se, ">=", true, {}};
  r.pass = emp >= bound - sigmas * se;
  return r;
}

McRow McRow::info(std::string label, double value, std::string note) {
  return McRow{std::move(label), value, std::numeric_limits<double>::quiet_NaN(), 0.0, "info", true, std::move(note)};
}

McRow McRow::check(std::string label, bool ok, double emp, double bound, std::string relation, std::string note) {
  return McRow{std::move(label), emp, bound, 0.0, std::move(relation), ok, std::move(note)};
}

bool McReport::pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const McRow& r) { return r.pass; });
}

std::string McReport::param_string() const {
  std::string s;
  for (const auto& [k, v] : params) {
    if (!s.empty()) s += ';';
    s += k + '=' + v;
  }
  return s;
}

std::string McReport::summary() const {
  std::ostringstream os;
  os << (pass() ? "PASS " : "FAIL ") << check << " [" << param_string() << "] n=" << n_samples << " seed=" << seed;
  if (seconds > 0) os << " (" << fmt_num(std::round(seconds * 100) / 100) << " s)";
  os << '\n';
  for (const auto& r : rows) {
    os << "  " << (r.pass ? "ok   " : "FAIL ") << r.label << ": " << fmt_num(r.empirical);
    if (r.relation != "info") {
      os << ' ' << r.relation << ' ' << fmt_num(r.bound);
      if (r.stderr_ > 0) os << " (se " << fmt_num(r.stderr_) << ')';
    }
    if (!r.note.empty()) os << "  # " << r.note;
    os << '\n';
  }
  return os.str();
}

std::string reports_csv(const std::vector<McReport>& reports) {
  std::ostringstream os;
  CsvWriter w(os);
  w.row({"check", "label", "params", "n", "seed", "empirical", "bound", "stderr", "relation", "pass", "note"});
  for (const auto& rep : reports)
    for (const auto& r : rep.rows)
      w.row({rep.check, r.label, rep.param_string(), std::to_string(rep.n_samples), std::to_string(rep.seed),
             fmt_num(r.empirical), fmt_num(r.bound), fmt_num(r.stderr_), r.relation, r.pass ? "1" : "0", r.note});
  return os.str();
}

namespace {

// Stream ids keep the checks on disjoint random streams under one user seed.
enum Stream : std::uint64_t {
  kStreamKd = 101,
  kStreamTail,
  kStreamMgf,
  kStreamLipschitz,
  kStreamCondLaw,
  kStreamGaussQuad,
  kStreamChi2,
  kStreamChain,
  kStreamKlStep,
  kStreamGrowth,
  kStreamProbe,
  kStreamReduction,
  kStreamGrid,
  kStreamDetection,
  kStreamDivergence,
  kStreamSchedules,
  kStreamScaling,
};

std::string str(double x) { return fmt_num(x); }
std::string str(int x) { return std::to_string(x); }

McReport make_report(std::string name, std::uint64_t seed, std::size_t n,
                     std::vector<std::pair<std::string, std::string>> params) {
  McReport r;
  r.check = std::move(name);
  r.seed = seed;
  r.n_samples = n;
  r.params = std::move(params);
  return r;
}

// Fixed-size chunks with their own seeded streams, reduced in chunk order, so
// the result does not depend on the worker count.
template <class Acc, class Fn>
Acc mc_chunks(std::size_t n, std::uint64_t seed, int jobs, const Acc& zero, Fn fn) {
  constexpr std::size_t kChunk = 2048;
  const std::size_t nchunks = (n + kChunk - 1) / kChunk;
  std::vector<Acc> parts(nchunks, zero);
  parallel_for(nchunks, jobs, [&](std::size_t c) {
    Rng rng(derive_seed(seed, c));
    const std::size_t count = std::min(kChunk, n - c * kChunk);
    for (std::size_t s = 0; s < count; ++s) fn(rng, parts[c]);
  });
  Acc total = zero;
  for (const auto& p : parts) total += p;
  return total;
}

Vec random_unit(Eigen::Index d, Rng& rng) {
  Vec v = rng.normal_vector(d);
  return v / v.norm();
}

Mat random_orthonormal(Eigen::Index d, Eigen::Index k, Rng& rng) {
  Mat g(d, k);
  rng.fill_normal(g.data(), static_cast<std::size_t>(d * k));
  Eigen::HouseholderQR<Mat> qr(g);
  return qr.householderQ() * Mat::Identity(d, k);
}

// Unit vector with <v, axis> = a and the rest uniform on the complement.
Vec tilted_unit(const Vec& axis, double a, Rng& rng) {
  Vec w = rng.normal_vector(axis.size());
  w -= axis.dot(w) * axis;
  w /= w.norm();
  return a * axis + std::sqrt(std::max(0.0, 1.0 - a * a)) * w;
}

void fill_goe(Rng& rng, Mat& w) {
  const Eigen::Index d = w.rows();
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const double z = rng.normal();
      w(i, j) = z;
      w(j, i) = z;
    }
    w(j, j) = std::numbers::sqrt2 * rng.normal();
  }
}

// Coefficients c with sum_{j<=k} c_jk z_jk = tr(B^T W) for W built from the
// standard normals z by fill_goe's convention (W_jj = sqrt 2 z_jj).
std::vector<double> goe_functional(const Mat& b) {
  const Eigen::Index d = b.rows();
  std::vector<double> c;
  c.reserve(static_cast<std::size_t>(d * (d + 1) / 2));
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) c.push_back(b(i, j) + b(j, i));
    c.push_back(std::numbers::sqrt2 * b(j, j));
  }
  return c;
}

double draw_functional(Rng& rng, const std::vector<double>& c) {
  double s = 0.0;
  for (double x : c) s += x * rng.normal();
  return s;
}

// Mean and standard error from running sums (sum, sum of squares, count).
std::pair<double, double> mean_se(double s, double s2, double n) {
  const double m = s / n;
  const double var = std::max(0.0, (s2 - n * m * m) / std::max(1.0, n - 1.0));
  return {m, std::sqrt(var / n)};
}

class Timer {
 public:
  Timer() : t0_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

McReport verify_kd(const std::vector<int>& d_grid, int n, const VerifyOptions& opt, double lo, double hi,
                   double sd_max) {
  require(n >= 10, "verify_kd: n must be >= 10");
  Timer timer;
  const std::uint64_t seed = derive_seed(opt.seed, kStreamKd);
  std::string grid;
  for (int d : d_grid) grid += (grid.empty() ? "" : " ") + str(d);
  McReport rep = make_report("kd", opt.seed, static_cast<std::size_t>(n) * d_grid.size(),
                             {{"d", grid}, {"n", str(n)}, {"band", str(lo) + ".." + str(hi)}});
  for (int d : d_grid) {
    require(d >= 1, "verify_kd: d must be >= 1");
    const KdEstimate k = estimate_kd(d, n, derive_seed(seed, static_cast<std::uint64_t>(d)), opt.jobs);
    const std::string at = " d=" + str(d);
    rep.rows.push_back(McRow::check("mean ||W||/sqrt(d) in band" + at, k.mean >= lo && k.mean <= hi, k.mean, hi,
                                    "in", "band [" + str(lo) + ", " + str(hi) + "], se " + str(k.stderr_)));
    rep.rows.push_back(McRow::check("sd ||W||/sqrt(d)" + at, k.sd <= sd_max, k.sd, sd_max, "<="));
  }
  rep.seconds = timer.seconds();
  return rep;
}

McReport verify_sphere_tail(int d, int n, const std::vector<double>& t_grid, const VerifyOptions& opt) {
  require(d >= 1, "verify_sphere_tail: d must be >= 1");
  require(n >= 10000, "verify_sphere_tail: n must be >= 1e4");
  Timer timer;
  const std::uint64_t seed = derive_seed(opt.seed, kStreamTail);
  McReport rep = make_report("sphere-tail", opt.seed, static_cast<std::size_t>(n), {{"d", str(d)}, {"n", str(n)}});
  Rng vr(derive_seed(seed, 0xffff));
  const Vec v = random_unit(d, vr);
  const double sd = std::sqrt(static_cast<double>(d));
  const double med = std::sqrt(2.0 / d);
  const std::size_t k = t_grid.size();
  const Vec counts = mc_chunks(static_cast<std::size_t>(n), derive_seed(seed, 1), opt.jobs, Vec(Vec::Zero(k + 1)),
                               [&](Rng& rng, Vec& acc) {
                                 const Vec th = random_unit(d, rng);
                                 const double ip = std::abs(v.dot(th));
                                 for (std::size_t j = 0; j < k; ++j)
                                   if (sd * ip >= std::numbers::sqrt2 + t_grid[j]) acc(static_cast<Eigen::Index>(j)) += 1;
                                 if (ip >= med) acc(static_cast<Eigen::Index>(k)) += 1;
                               });
  for (std::size_t j = 0; j < k; ++j) {
    const double p = counts(static_cast<Eigen::Index>(j)) / n;
    rep.rows.push_back(McRow::le("Pr[sqrt(d)|<v,theta>| >= sqrt2 + " + str(t_grid[j]) + "]", p,
                                 std::exp(-t_grid[j] * t_grid[j] / 2), binomial_stderr(p, n)));
  }
  const double pm = counts(static_cast<Eigen::Index>(k)) / n;
  rep.rows.push_back(McRow::le("Pr[|<v,theta>| >= sqrt(2/d)]", pm, 0.55, binomial_stderr(pm, n)));
  rep.seconds = timer.seconds();
  return rep;
}

McReport verify_sphere_mgf(int d, int n, const std::vector<double>& lambdas, const VerifyOptions& opt) {
  require(d >= 1 && n >= 2, "verify_sphere_mgf: need d >= 1, n >= 2");
  Timer timer;
  const std::uint64_t seed = derive_seed(opt.seed, kStreamMgf);
  McReport rep = make_report("sphere-mgf", opt.seed, static_cast<std::size_t>(n), {{"d", str(d)}, {"n", str(n)}});
  Rng vr(derive_seed(seed, 0xffff));
  const Vec v = random_unit(d, vr);
  const auto k = static_cast<Eigen::Index>(lambdas.size());
  const Vec acc = mc_chunks(static_cast<std::size_t>(n), derive_seed(seed, 1), opt.jobs, Vec(Vec::Zero(2 * k)),
                            [&](Rng& rng, Vec& a) {
                              const double ip = std::abs(v.dot(random_unit(d, rng)));
                              for (Eigen::Index j = 0; j < k; ++j) {
                                const double e = std::exp(lambdas[static_cast<std::size_t>(j)] * ip);
                                a(2 * j) += e;
                                a(2 * j + 1) += e * e;
                              }
                            });
  for (Eigen::Index j = 0; j < k; ++j) {
    const double lam = lambdas[static_cast<std::size_t>(j)];
    const auto [m, se] = mean_se(acc(2 * j), acc(2 * j + 1), n);
    rep.rows.push_back(McRow::le("E exp(" + str(lam) + " |<theta,v>|)", m, sphere_mgf_bound(lam, d), se));
  }
  rep.seconds = timer.seconds();
  return rep;
}

McReport verify_lipschitz_quadratic(int d, int n, const std::vector<double>& t_grid, const VerifyOptions& opt) {
  require(d >= 1 && n >= 2, "verify_lipschitz_quadratic: need d >= 1, n >= 2");
  Timer timer;
  const std::uint64_t seed = derive_seed(opt.seed, kStreamLipschitz);
  McReport rep = make_report("lipschitz", opt.seed, static_cast<std::size_t>(n), {{"d", str(d)}, {"n", str(n)}});
  Rng vr(derive_seed(seed, 0xffff));
  const Vec th = random_unit(d, vr);
  const std::vector<double> coef = goe_functional(th * th.transpose());
  const auto k = static_cast<Eigen::Index>(t_grid.size());
  const Vec acc = mc_chunks(static_cast<std::size_t>(n), derive_seed(seed, 1), opt.jobs, Vec(Vec::Zero(k + 2)),
                            [&](Rng& rng, Vec& a) {
                              const double q = draw_functional(rng, coef);
                              a(0) += q;
                              a(1) += q * q;
                              for (Eigen::Index j = 0; j < k; ++j)
                                if (std::abs(q) >= t_grid[static_cast<std::size_t>(j)]) a(2 + j) += 1;
                            });
  const double mean = acc(0) / n;
  const double var = acc(1) / n - mean * mean;
  // Var of the sample variance of a N(0, 2) sample is 2 * 2^2 / n.
  const double var_se = std::sqrt(8.0 / n);
  rep.rows.push_back(McRow::check("Var theta^T W theta", std::abs(var - 2.0) <= 4 * var_se, var, 2.0, "==",
                                  "within 4 se (" + str(var_se) + ")"));
  for (Eigen::Index j = 0; j < k; ++j) {
    const double t = t_grid[static_cast<std::size_t>(j)];
    const double p = acc(2 + j) / n;
    rep.rows.push_back(
        McRow::le("Pr[|theta^T W theta| >= " + str(t) + "]", p, std::min(1.0, 2 * std::exp(-t * t / 4)),
                  binomial_stderr(p, n)));
  }
  rep.seconds = timer.seconds();
  return rep;
}

namespace {
struct CondAcc {
  std::vector<Vec> sum;
  std::vector<Mat> outer;
  Mat cross;  // sum r_1 r_2^T
  CondAcc& operator+=(const CondAcc& o) {
    for (std::size_t i = 0; i < sum.size(); ++i) {
      sum[i] += o.sum[i];
      outer[i] += o.outer[i];
    }
    cross += o.cross;
    return *this;
  }
};
}  // namespace

McReport verify_conditional_law(int d, int n, double lambda, int k, const VerifyOptions& opt, double cov_tol) {
  require(d >= 2 && n >= 2 && k >= 1 && k <= d, "verify_conditional_law: need d >= 2, n >= 2, 1 <= k <= d");
  Timer timer;
  const std::uint64_t seed = derive_seed(opt.seed, kStreamCondLaw);
  McReport rep = make_report("conditional-law", opt.seed, static_cast<std::size_t>(n),
                             {{"d", str(d)}, {"n", str(n)}, {"lambda", str(lambda)}, {"k", str(k)}});
  Rng setup(derive_seed(seed, 0xffff));
  const Mat q = random_orthonormal(d, k, setup);
  const Vec u = random_unit(d, setup);
  const double sd = std::sqrt(static_cast<double>(d));
  std::vector<GaussianLaw> laws;
  std::vector<Mat> proj;
  for (int i = 1; i <= k; ++i) {
    laws.push_back(conditional_law(u, q, i, lambda));
    const auto prior = q.leftCols(i - 1);
    proj.push_back(Mat::Identity(d, d) - prior * prior.transpose());
  }
  const Mat m_spike = lambda * u * u.transpose();

  CondAcc zero;
  for (int i = 0; i < k; ++i) {
    zero.sum.push_back(Vec::Zero(d));
    zero.outer.push_back(Mat::Zero(d, d));
  }
  zero.cross = Mat::Zero(d, d);
  const CondAcc acc = mc_chunks(static_cast<std::size_t>(n), derive_seed(seed, 1), opt.jobs, zero,
                                [&](Rng& rng, CondAcc& a) {
                                  Mat w(d, d);
                                  fill_goe(rng, w);
                                  Vec r1;
                                  for (int i = 0; i < k; ++i) {
                                    const Vec mv = m_spike * q.col(i) + w * q.col(i) / sd;
                                    const Vec r = proj[static_cast<std::size_t>(i)] * mv;
                                    a.sum[static_cast<std::size_t>(i)] += r;
                                    a.outer[static_cast<std::size_t>(i)].selfadjointView<Eigen::Lower>().rankUpdate(r);
                                    if (i == 0) r1 = r;
                                    if (i == 1) a.cross += r1 * r.transpose();
                                  }
                                });
  std::vector<Vec> means;
  for (int i = 0; i < k; ++i) {
    const auto si = static_cast<std::size_t>(i);
    const Vec mean = acc.sum[si] / n;
    Mat outer = acc.outer[si].selfadjointView<Eigen::Lower>();
    const Mat cov = (outer - n * mean * mean.transpose()) / (n - 1.0);
    const GaussianLaw& law = laws[si];
    const double tr = law.cov.trace();
    const std::string at = " i=" + str(i + 1);
    rep.rows.push_back(McRow::le("||mean - lambda<u,v_i>P u||" + at, (mean - law.mean).norm(), 0.0, std::sqrt(tr / n)));
    const double rel = (cov - law.cov).norm() / law.cov.norm();
    rep.rows.push_back(McRow::check("rel Frobenius error of covariance" + at, rel <= cov_tol, rel, cov_tol, "<="));
    means.push_back(mean);
  }
  if (k >= 2) {
    const Mat cc = (acc.cross - n * means[0] * means[1].transpose()) / (n - 1.0);
    const double se = std::sqrt(laws[0].cov.trace() * laws[1].cov.trace() / n);
    rep.rows.push_back(McRow::le("||cross-cov(w1, w2)||_F", cc.norm(), 0.0, se));
  }
  rep.seconds = timer.seconds();
  return rep;
}

McReport verify_gauss_quadratic(int d, int n, const VerifyOptions& opt, double tol,
                                std::optional<std::pair<Vec, Vec>> vectors) {
  require(d >= 1 && n >= 2, "verify_gauss_quadratic: need d >= 1, n >= 2");
  Timer timer;
  const std::uint64_t seed = derive_seed(opt.seed, kStreamGaussQuad);
  McReport rep = make_report("gauss-quadratic", opt.seed, static_cast<std::size_t>(n), {{"d", str(d)}, {"n", str(n)}});
  Vec v1, v2;
  if (vectors) {
    v1 = vectors->first;
    v2 = vectors->second;
    require_unit(v1, "verify_gauss_quadratic v1");
    require_unit(v2, "verify_gauss_quadratic v2");
    require(v1.size() == d && v2.size() == d, "verify_gauss_quadratic: dimension mismatch");
  } else {
    Rng setup(derive_seed(seed, 0xffff));
    v1 = random_unit(d, setup);
    v2 = tilted_unit(v1, 0.6, setup);
  }
  struct Acc {
    Mat s, s2;
    Acc& operator+=(const Acc& o) {
      s += o.s;
      s2 += o.s2;
      return *this;
    }
  };
  const Acc zero{Mat::Zero(d, d), Mat::Zero(d, d)};
  const Acc acc = mc_chunks(static_cast<std::size_t>(n), derive_seed(seed, 1), opt.jobs, zero, [&](Rng& rng, Acc& a) {
    Mat w(d, d);
    fill_goe(rng, w);
    const Vec x = w * v1, y = w * v2;
    const Mat o = x * y.transpose();
    a.s += o;
    a.s2 += o.cwiseProduct(o);
  });
  const Mat mean = acc.s / n;
  const Mat expect = v2 * v1.transpose() + v1.dot(v2) * Mat::Identity(d, d);
  const double err = (mean - expect).cwiseAbs().maxCoeff();
  const double se = ((acc.s2 / n - mean.cwiseProduct(mean)).cwiseMax(0.0) / n).cwiseSqrt().maxCoeff();
  rep.rows.push_back(McRow::check("max |E[W v1 v2^T W] - (v2 v1^T + <v1,v2> I)|", err <= tol, err, tol, "<=",
                                  "largest entry se " + str(se)));
  rep.seconds = timer.seconds();
  return rep;
}

namespace {
// Gaussian likelihood-ratio pieces for the i-th projected response: with
// C = Sigma_i / d and m the spike mean, log dP_u/dP0 (y) = m^T C^+ y - m^T C^+ m / 2.
struct LrPiece {
  Vec cm;       // C^+ m
  double half;  // m^T C^+ m / 2
};
LrPiece lr_piece(const Vec& u, const Mat& q, int i, double lambda) {
  const GaussianLaw g = conditional_law(u, q, i, lambda);
  const Mat cp = pseudo_inverse_psd(g.cov);
  LrPiece p;
  p.cm = cp * g.mean;
  p.half = 0.5 * g.mean.dot(p.cm);
  return p;
}
}  // namespace

McReport verify_chi2_closed_form(int d, double lambda, int n, int n_configs, const VerifyOptions& opt, double rel_tol,
                                 double max_exponent) {
  require(d >= 3 && n >= 2 && n_configs >= 1, "verify_chi2_closed_form: need d >= 3, n >= 2, n_configs >= 1");
  Timer timer;
  const std::uint64_t seed = derive_seed(opt.seed, kStreamChi2);
  McReport rep = make_report("chi2-closed-form", opt.seed, static_cast<std::size_t>(n) * n_configs,
                             {{"d", str(d)}, {"lambda", str(lambda)}, {"n", str(n)}, {"configs", str(n_configs)}});
  Rng setup(derive_seed(seed, 0xffff));
  const double sd = std::sqrt(static_cast<double>(d));
  for (int c = 0; c < n_configs; ++c) {
    const int i = c % 2 == 0 ? 2 : 1;
    Mat q;
    Vec u, s;
    double expo = 0.0;
    for (int attempt = 0;; ++attempt) {
      require(attempt < 100000, "verify_chi2_closed_form: no configuration with exponent in range");
      q = random_orthonormal(d, 2, setup);
      const Vec v = q.col(i - 1);
      u = tilted_unit(v, 0.2 + 0.4 * setup.uniform(), setup);
      s = tilted_unit(v, 0.2 + 0.4 * setup.uniform(), setup);
      expo = log_g_chi(u, s, q, i, lambda, d);
      if (expo >= 0.1 && expo <= max_exponent) break;
    }
    const LrPiece pu = lr_piece(u, q, i, lambda), ps = lr_piece(s, q, i, lambda);
    // y = P_{i-1} W v_i / sqrt d; (C^+ m) lies in the range of P_{i-1}, so
    // (C^+ m)^T y = tr(B^T W) with B = (C^+ m) v_i^T / sqrt d.
    const std::vector<double> coef = goe_functional((pu.cm + ps.cm) * q.col(i - 1).transpose() / sd);
    const double shift = pu.half + ps.half;
    const Vec acc = mc_chunks(static_cast<std::size_t>(n), derive_seed(seed, 1000 + c), opt.jobs, Vec(Vec::Zero(2)),
                              [&](Rng& rng, Vec& a) {
                                const double x = std::exp(draw_functional(rng, coef) - shift);
                                a(0) += x;
                                a(1) += x * x;
                              });
    const auto [m, se] = mean_se(acc(0), acc(1), n);
    const double g = std::exp(expo);
    const double rel = std::abs(m / g - 1.0);
    rep.rows.push_back(McRow::check("config " + str(c + 1) + " (i=" + str(i) + "): |MC / g_chi - 1|", rel <= rel_tol,
                                    rel, rel_tol, "<=",
                                    "MC " + str(m) + " se " + str(se) + ", g_chi " + str(g) + ", exponent " + str(expo)));
  }
  rep.seconds = timer.seconds();
  return rep;
}

McReport verify_likelihood_chain(int d, double lambda, int k, int n, int n_product_configs, const VerifyOptions& opt) {
  require(d >= 2 && k >= 1 && k <= d && n >= 2, "verify_likelihood_chain: need d >= 2, 1 <= k <= d, n >= 2");
  Timer timer;
  const std::uint64_t seed = derive_seed(opt.seed, kStreamChain);
  McReport rep = make_report("likelihood-chain", opt.seed, static_cast<std::size_t>(n),
                             {{"d", str(d)}, {"lambda", str(lambda)}, {"k", str(k)}, {"n", str(n)},
                              {"product_configs", str(n_product_configs)}});
  Rng setup(derive_seed(seed, 0xffff));
  const double sd = std::sqrt(static_cast<double>(d));

  // Fixed query set with taus at the spike's own overlaps, so the
  // truncation event holds for u and the truncated moment is the full one.
  // The spike has d <u, q_i>^2 = 1; larger overlaps make LR^2 too heavy-tailed
  // for a plain Monte-Carlo mean.
  const Mat q = random_orthonormal(d, k, setup);
  Vec u;
  {
    const double a = 1.0 / sd;
    const Vec rest = tilted_unit(q.col(0), 0.0, setup);
    Vec r = rest - q * (q.transpose() * rest);
    r /= r.norm();
    u = a * q.rowwise().sum() + std::sqrt(std::max(0.0, 1.0 - k * a * a)) * r;
  }
  Mat b = Mat::Zero(d, d);
  double shift = 0.0, log_prod = 0.0, tau_sum = 0.0;
  for (int i = 1; i <= k; ++i) {
    const LrPiece p = lr_piece(u, q, i, lambda);
    b += 2.0 * p.cm * q.col(i - 1).transpose() / sd;
    shift += 2.0 * p.half;
    log_prod += log_g_chi(u, u, q, i, lambda, d);
    const double a = u.dot(q.col(i - 1));
    tau_sum += d * a * a;
  }
  const std::vector<double> coef = goe_functional(b);
  const Vec acc = mc_chunks(static_cast<std::size_t>(n), derive_seed(seed, 1), opt.jobs, Vec(Vec::Zero(2)),
                            [&](Rng& rng, Vec& a) {
                              const double x = std::exp(draw_functional(rng, coef) - shift);
                              a(0) += x;
                              a(1) += x * x;
                            });
  const auto [m, se] = mean_se(acc(0), acc(1), n);
  const double prod = std::exp(log_prod);
  rep.rows.push_back(McRow::le("E_P0[(dP_u/dP0)^2] vs prod g_chi(u,u)", m, prod, se));
  rep.rows.push_back(McRow::ge("E_P0[(dP_u/dP0)^2] vs prod g_chi(u,u) (lower side)", m, prod, se));
  const double cap = std::exp(lambda * lambda * tau_sum);
  rep.rows.push_back(McRow::check("prod g_chi(u,u) <= exp(lambda^2 sum tau)", prod <= cap * (1 + 1e-12), prod, cap, "<="));

  // Random feasible pairs: taus cover both spikes' overlaps.
  const int dp = std::max(d, 50);
  double worst = -std::numeric_limits<double>::infinity();
  for (int c = 0; c < n_product_configs; ++c) {
    const int kk = 1 + static_cast<int>(setup.uniform() * std::min(6, dp));
    const Mat qq = random_orthonormal(dp, kk, setup);
    const Vec uu = random_unit(dp, setup);
    const double rho = 2.0 * setup.uniform() - 1.0;
    const Vec ss = tilted_unit(uu, rho, setup);
    const double lam = 0.5 + 2.5 * setup.uniform();
    std::vector<double> taus;
    double lg = 0.0;
    for (int i = 1; i <= kk; ++i) {
      const Vec v = qq.col(i - 1);
      taus.push_back(std::max(1e-12, dp * std::max(std::pow(v.dot(uu), 2), std::pow(v.dot(ss), 2))));
      lg += log_g_chi(uu, ss, qq, i, lam, dp);
    }
    const double lb = std::log(likelihood_product_bound(uu, ss, taus, lam, dp, kk));
    worst = std::max(worst, lg - lb);
  }
  if (n_product_configs > 0)
    rep.rows.push_back(McRow::check("max log(prod g_chi(u,s) / product bound) over configs", worst <= 1e-9, worst, 0.0,
                                    "<=", str(n_product_configs) + " configs at d=" + str(dp)));
  rep.seconds = timer.seconds();
  return rep;
}

McReport verify_kl_step(int d, int n_configs, double lambda, const VerifyOptions& opt) {
  require(d >= 3 && n_configs >= 1, "verify_kl_step: need d >= 3, n_configs >= 1");
  Timer timer;
  const std::uint64_t seed = derive_seed(opt.seed, kStreamKlStep);
  McReport rep = make_report("kl-step", opt.seed, static_cast<std::size_t>(n_configs),
                             {{"d", str(d)}, {"lambda", str(lambda)}, {"configs", str(n_configs)}});
  Rng rng(seed);
  double worst = -std::numeric_limits<double>::infinity(), max_kl = 0.0;
  for (int c = 0; c < n_configs; ++c) {
    const int k = 1 + static_cast<int>(rng.uniform() * std::min(4, d - 1));
    const Mat q = random_orthonormal(d, k, rng);
    const Vec u0 = random_unit(d, rng);
    const Vec u1 = c % 2 == 0 ? random_unit(d, rng) : tilted_unit(u0, 2.0 * rng.uniform() - 1.0, rng);
    const GaussianLaw g0 = conditional_law(u0, q, k, lambda), g1 = conditional_law(u1, q, k, lambda);
    const double klv = gaussian_kl(g0.mean, g1.mean, g0.cov);
    const double bound = kl_step_bound(u0, u1, q.col(k - 1), lambda, d);
    worst = std::max(worst, klv - bound - 1e-9 * (1.0 + std::abs(bound)));
    max_kl = std::max(max_kl, klv);
  }
  rep.rows.push_back(McRow::check("max (KL(conditional laws) - per-step bound)", worst <= 0.0, worst, 0.0, "<=",
                                  "largest KL " + str(max_kl)));
  rep.seconds = timer.seconds();
  return rep;
}

McReport verify_overlap_growth(const std::vector<AlgorithmKind>& kinds, int d, double lambda, double delta, int T, int n,
                               const VerifyOptions& opt) {
  require(lambda >= 1.0, "verify_overlap_growth: lambda must be >= 1");
  require(d >= 2 && T >= 1 && n >= 1 && !kinds.empty(), "verify_overlap_growth: need d >= 2, T >= 1, n >= 1");
  Timer timer;
  const std::uint64_t seed = derive_seed(opt.seed, kStreamGrowth);
  std::string names;
  for (auto k : kinds) names += (names.empty() ? "" : " ") + to_string(k);
  McReport rep = make_report("overlap-growth", opt.seed, static_cast<std::size_t>(n),
                             {{"alg", names}, {"d", str(d)}, {"lambda", str(lambda)}, {"delta", str(delta)},
                              {"T", str(T)}, {"n", str(n)}});
  const std::vector<double> taus = chi_tau_schedule(d, lambda, delta, T).closed.taus;
  const std::size_t nk = kinds.size();
  // Per trial and algorithm: any violation, first-query violation.
  std::vector<std::vector<char>> any(n, std::vector<char>(nk)), first(n, std::vector<char>(nk));
  parallel_for(static_cast<std::size_t>(n), opt.jobs, [&](std::size_t t) {
    const std::uint64_t ts = trial_seed(seed, t);
    const SpikedInstance inst = make_spiked(d, lambda, ts);
    for (std::size_t a = 0; a < nk; ++a) {
      QuerySession s(inst, T);
      AlgorithmConfig cfg;
      cfg.kind = kinds[a];
      cfg.budget = T;
      cfg.seed = derive_seed(ts, 10 + static_cast<std::uint64_t>(kinds[a]));
      run_algorithm(s, cfg);
      std::vector<Vec> seq;
      for (const auto& st : s.transcript().steps()) seq.push_back(st.query);
      seq.push_back(*s.transcript().final_output());
      for (std::size_t k = 0; k < seq.size() && k < taus.size(); ++k) {
        const double ip = seq[k].dot(inst.theta);
        if (d * ip * ip > taus[k]) {
          any[t][a] = 1;
          if (k == 0) first[t][a] = 1;
        }
      }
    }
  });
  const double cap = chi_violation_bound(delta);
  for (std::size_t a = 0; a < nk; ++a) {
    double va = 0, vf = 0;
    for (int t = 0; t < n; ++t) {
      va += any[static_cast<std::size_t>(t)][a];
      vf += first[static_cast<std::size_t>(t)][a];
    }
    va /= n;
    vf /= n;
    const std::string alg = to_string(kinds[a]);
    rep.rows.push_back(McRow::le(alg + ": violation of closed-form schedule, k <= T+1", va, cap, binomial_stderr(va, n)));
    rep.rows.push_back(McRow::le(alg + ": violation at k = 1", vf, delta, binomial_stderr(vf, n)));
  }
  rep.rows.push_back(McRow::info("tau_1", taus.front()));
  rep.seconds = timer.seconds();
  return rep;
}

McReport verify_oracle_aware_probe(int d, double lambda, double delta, int n, const VerifyOptions& opt) {
  require(d >= 2 && n >= 1, "verify_oracle_aware_probe: need d >= 2, n >= 1");
  Timer timer;
  const std::uint64_t seed = derive_seed(opt.seed, kStreamProbe);
  McReport rep = make_report("oracle-probe", opt.seed, static_cast<std::size_t>(n),
                             {{"d", str(d)}, {"lambda", str(lambda)}, {"delta", str(delta)}, {"n", str(n)}});
  const double tau1 = chi_tau_schedule(d, lambda, delta, 1).closed.taus.front();
  std::vector<char> hit(static_cast<std::size_t>(n));
  parallel_for(static_cast<std::size_t>(n), opt.jobs, [&](std::size_t t) {
    const SpikedInstance inst = make_spiked(d, lambda, trial_seed(seed, t));
    QuerySession s(inst, 1);
    s.query(inst.theta);
    s.finalize(inst.theta);
    const double ip = s.transcript().step(0).query.dot(inst.theta);
    hit[t] = d * ip * ip > tau1;
  });
  double f = 0;
  for (char h : hit) f += h;
  f /= n;
  rep.rows.push_back(McRow::check("probe querying theta violates at k = 1", f == 1.0, f, 1.0, "==",
                                  "outside the query model; tau_1 = " + str(tau1)));
  rep.seconds = timer.seconds();
  return rep;
}

McReport verify_reduction_events(int d, double lambda, double delta0, int n, int lanczos_T, const VerifyOptions& opt,
                                 std::optional<double> kd, int kd_samples) {
  require(d >= 2 && n >= 1 && lanczos_T >= 1, "verify_reduction_events: need d >= 2, n >= 1, lanczos_T >= 1");
  Timer timer;
  const std::uint64_t seed = derive_seed(opt.seed, kStreamReduction);
  const double kd_value = kd ? *kd : estimate_kd(d, kd_samples, derive_seed(seed, 0xfffe), opt.jobs).mean;
  const double slack = 2.0 * std::sqrt(std::log(1.0 / delta0) / d);
  const double gamma = gamma_of(d, lambda, delta0, kd_value);
  McReport rep = make_report("reduction-events", opt.seed, static_cast<std::size_t>(n),
                             {{"d", str(d)}, {"lambda", str(lambda)}, {"delta0", str(delta0)}, {"n", str(n)},
                              {"lanczos_T", str(lanczos_T)}});
  struct Trial {
    bool e1 = false, e2 = false, e3 = true;
    int checked = 0;
  };
  std::vector<Trial> trials(static_cast<std::size_t>(n));
  parallel_for(static_cast<std::size_t>(n), opt.jobs, [&](std::size_t t) {
    const std::uint64_t ts = trial_seed(seed, t);
    const SpikedInstance inst = make_spiked(d, lambda, ts);
    const std::vector<double> ev = eigenvalues_desc(inst.matrix);
    Trial& tr = trials[t];
    const double bulk = std::max(std::abs(ev[1]), std::abs(ev.back()));
    tr.e1 = ev.front() >= lambda - slack && ev.front() >= std::abs(ev.back()) && bulk <= kd_value + slack;
    tr.e2 = check_membership(ev, gamma).member;
    const double tmt = rayleigh(inst.matrix, inst.theta);
    QuerySession s(inst, lanczos_T);
    AlgorithmConfig cfg;
    cfg.kind = AlgorithmKind::lanczos;
    cfg.budget = lanczos_T;
    cfg.seed = derive_seed(ts, 0x1a);
    run_algorithm(s, cfg, [&](int, const Vec& vh) {
      if (!(tmt > 0)) return true;
      const double eps = std::max(0.0, 1.0 - rayleigh(inst.matrix, vh) / tmt);
      if (eps <= 1.0 - gamma) {
        ++tr.checked;
        if (std::abs(vh.dot(inst.theta)) < f_overlap(eps, gamma) - 1e-12) tr.e3 = false;
      }
      return true;
    });
  });
  double c1 = 0, c2 = 0, c3 = 0, all = 0, checked = 0;
  for (const auto& tr : trials) {
    c1 += tr.e1;
    c2 += tr.e2;
    c3 += tr.e3;
    all += tr.e1 && tr.e2 && tr.e3;
    checked += tr.checked;
  }
  const double p = all / n;
  rep.rows.push_back(McRow::ge("conjunction of the three events", p, 1.0 - 2.0 * delta0, binomial_stderr(p, n)));
  rep.rows.push_back(McRow::info("item 1 (spectral edges)", c1 / n));
  rep.rows.push_back(McRow::info("item 2 (class membership)", c2 / n, "gamma = " + str(gamma)));
  rep.rows.push_back(McRow::info("item 3 (F overlap on Lanczos prefixes)", c3 / n,
                                 "non-vacuous prefix checks per trial " + str(checked / n)));
  rep.rows.push_back(McRow::info("K_d used", kd_value, kd ? "supplied" : "estimated from " + str(kd_samples) + " GOE draws"));
  rep.seconds = timer.seconds();
  return rep;
}

McReport verify_inner_product_grid(int n_matrices, int grid_size, const VerifyOptions& opt) {
  require(n_matrices >= 1 && grid_size >= 2, "verify_inner_product_grid: need n_matrices >= 1, grid_size >= 2");
  Timer timer;
  const std::uint64_t seed = derive_seed(opt.seed, kStreamGrid);
  McReport rep = make_report("inner-product-grid", opt.seed, static_cast<std::size_t>(n_matrices) * grid_size,
                             {{"d", "3"}, {"matrices", str(n_matrices)}, {"grid", str(grid_size)}});
  // Fibonacci lattice on S^2.
  std::vector<Eigen::Vector3d> grid;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int j = 0; j < grid_size; ++j) {
    const double z = 1.0 - 2.0 * (j + 0.5) / grid_size;
    const double r = std::sqrt(1.0 - z * z);
    grid.emplace_back(r * std::cos(golden * j), r * std::sin(golden * j), z);
  }
  Rng rng(seed);
  long checks = 0, violations = 0, used = 0, spectral_bad = 0;
  double worst = -std::numeric_limits<double>::infinity();
  for (int attempt = 0; used < n_matrices; ++attempt) {
    require(attempt < 1000 * n_matrices, "verify_inner_product_grid: could not draw admissible matrices");
    const Eigen::Vector3d th = random_unit(3, rng);
    const double lam = 1.0 + 4.0 * rng.uniform();
    const double sigma = 0.05 + 0.55 * rng.uniform();
    Eigen::Matrix3d w;
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) w(i, j) = w(j, i) = sigma * rng.normal() * (i == j ? std::numbers::sqrt2 : 1.0);
    const Eigen::Matrix3d m = lam * th * th.transpose() + w;
    const double wn = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(w).eigenvalues().cwiseAbs().maxCoeff();
    const double tmt = th.dot(m * th);
    if (!(tmt > 0) || wn / tmt >= 1.0) continue;
    ++used;
    const double gamma = wn / tmt;
    const Eigen::Vector3d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(m).eigenvalues();
    if (ev(2) < tmt - 1e-12 || ev(1) > wn + 1e-12) ++spectral_bad;
    for (const auto& g : grid) {
      const double eps = std::max(0.0, 1.0 - g.dot(m * g) / tmt);
      if (eps > 1.0 - gamma) continue;
      ++checks;
      const double gap = f_overlap(eps, gamma) - std::abs(g.dot(th));
      worst = std::max(worst, gap);
      if (gap > 1e-12) ++violations;
    }
  }
  rep.rows.push_back(McRow::check("grid vectors below F(eps, gamma)", violations == 0, static_cast<double>(violations), 0,
                                  "==", str(static_cast<double>(checks)) + " non-vacuous (w, M) pairs; max F - |<w,theta>| " +
                                            str(worst)));
  rep.rows.push_back(McRow::check("lambda_1 >= theta^T M theta and lambda_2 <= ||W||", spectral_bad == 0,
                                  static_cast<double>(spectral_bad), 0, "=="));
  // Large spike: F(eps, gamma) -> sqrt(1 - eps).
  const double g50 = 0.6 / 50.0;
  const double gap50 = std::sqrt(1.0 - 0.1) - f_overlap(0.1, g50);
  rep.rows.push_back(McRow::check("gamma = 0.6/50: sqrt(1 - eps) - F(0.1, gamma)", gap50 >= 0 && gap50 < 0.02, gap50, 0.02,
                                  "<="));
  rep.seconds = timer.seconds();
  return rep;
}

McReport verify_detection_gap(int d, double lambda, const std::vector<int>& T_grid, int n, const VerifyOptions& opt,
                              double delta0) {
  require(lambda > 2.0, "verify_detection_gap: lambda must be > 2");
  require(d >= 2 && n >= 1 && !T_grid.empty(), "verify_detection_gap: need d >= 2, n >= 1 and a T grid");
  Timer timer;
  const std::uint64_t seed = derive_seed(opt.seed, kStreamDetection);
  std::vector<int> grid = T_grid;
  std::sort(grid.begin(), grid.end());
  const int max_T = grid.back();
  McReport rep = make_report("detection-gap", opt.seed, static_cast<std::size_t>(n),
                             {{"d", str(d)}, {"lambda", str(lambda)}, {"T_max", str(max_T)}, {"n", str(n)}});
  const double thr = (2.0 + lambda) / 2.0;
  // ritz[t][h][T-1]: best Ritz value after T queries, h = 0 null, 1 spiked.
  std::vector<std::array<std::vector<double>, 2>> ritz(static_cast<std::size_t>(n));
  parallel_for(static_cast<std::size_t>(n), opt.jobs, [&](std::size_t t) {
    for (int h = 0; h < 2; ++h) {
      const std::uint64_t ts = derive_seed(trial_seed(seed, t), static_cast<std::uint64_t>(h));
      const SpikedInstance inst = make_spiked(d, h == 0 ? 0.0 : lambda, ts);
      QuerySession s(inst, max_T);
      AlgorithmConfig cfg;
      cfg.kind = AlgorithmKind::lanczos;
      cfg.budget = max_T;
      cfg.seed = derive_seed(ts, 0x1a);
      std::vector<double> r = run_algorithm(s, cfg).ritz_values;
      while (static_cast<int>(r.size()) < max_T) r.push_back(r.empty() ? 0.0 : r.back());
      ritz[t][static_cast<std::size_t>(h)] = std::move(r);
    }
  });
  const double L = std::log(static_cast<double>(d)) / std::log(lambda);
  double prev_err = std::numeric_limits<double>::quiet_NaN(), prev_se = 0;
  int cross = -1;
  bool type1_ok = true;
  double worst_type1 = 0;
  for (int T : grid) {
    double fa = 0, miss = 0;
    for (int t = 0; t < n; ++t) {
      const auto& rr = ritz[static_cast<std::size_t>(t)];
      if (rr[0][static_cast<std::size_t>(T - 1)] > thr) fa += 1;
      if (rr[1][static_cast<std::size_t>(T - 1)] <= thr) miss += 1;
    }
    fa /= n;
    miss /= n;
    const double err = fa + miss;
    const double se = std::sqrt(std::pow(binomial_stderr(fa, n), 2) + std::pow(binomial_stderr(miss, n), 2));
    const std::string at = " T=" + str(T);
    std::string bound_note;
    double lb = 0.0;
    try {
      lb = detection_error_bound(d, lambda, T, delta0).value;
    } catch (const RegimeError& e) {
      bound_note = e.what();
    }
    rep.rows.push_back(McRow::info("type I" + at, fa));
    rep.rows.push_back(McRow::info("type II" + at, miss));
    rep.rows.push_back(McRow::ge("error sum vs lower bound" + at, err, lb, se));
    if (!bound_note.empty()) rep.rows.back().note = bound_note;
    if (!std::isnan(prev_err))
      rep.rows.push_back(McRow::le("error sum nonincreasing" + at, err, prev_err, std::sqrt(se * se + prev_se * prev_se)));
    if (cross < 0 && err <= 0.1) cross = T;
    worst_type1 = std::max(worst_type1, fa);
    if (fa > 0.1) type1_ok = false;
    prev_err = err;
    prev_se = se;
  }
  rep.rows.push_back(McRow::check("null type I at threshold " + str(thr), type1_ok, worst_type1, 0.1, "<="));
  const bool in_band = cross > 0 && cross >= L / 3.0 && cross <= 3.0 * L;
  rep.rows.push_back(McRow::check("first T with error <= 0.1, vs log d / log lambda", in_band,
                                  static_cast<double>(cross), L, "within x3",
                                  cross < 0 ? "never crossed on the grid" : ""));
  rep.seconds = timer.seconds();
  return rep;
}

McReport verify_divergence_laws(int n_cases, const VerifyOptions& opt) {
  require(n_cases >= 1, "verify_divergence_laws: n_cases must be >= 1");
  Timer timer;
  const std::uint64_t seed = derive_seed(opt.seed, kStreamDivergence);
  McReport rep = make_report("divergence-laws", opt.seed, static_cast<std::size_t>(n_cases), {{"cases", str(n_cases)}});
  Rng rng(seed);
  const std::vector<ConvexGenerator> gens = {ConvexGenerator::chi2(), ConvexGenerator::kl()};
  auto measure = [&](int m, bool allow_zero) {
    std::vector<double> x(static_cast<std::size_t>(m));
    for (auto& v : x) v = (allow_zero && rng.uniform() < 0.15) ? 0.0 : -std::log(1.0 - rng.uniform()) * (0.2 + 2 * rng.uniform());
    return DiscreteMeasure(x);
  };
  auto size = [&] { return 2 + static_cast<int>(rng.uniform() * 19); };
  double w_conv = -1e300, w_norm = 0, w_lin = 0, w_dpi = -1e300;
  for (int c = 0; c < n_cases; ++c) {
    for (const auto& f : gens) {
      // Joint convexity.
      const int m = size();
      const DiscreteMeasure mu1 = measure(m, true), mu2 = measure(m, true), nu1 = measure(m, false), nu2 = measure(m, false);
      const double a = rng.uniform();
      std::vector<double> mx(static_cast<std::size_t>(m)), nx(static_cast<std::size_t>(m));
      for (int i = 0; i < m; ++i) {
        mx[static_cast<std::size_t>(i)] = a * mu1[static_cast<std::size_t>(i)] + (1 - a) * mu2[static_cast<std::size_t>(i)];
        nx[static_cast<std::size_t>(i)] = a * nu1[static_cast<std::size_t>(i)] + (1 - a) * nu2[static_cast<std::size_t>(i)];
      }
      const double lhs = d_f(DiscreteMeasure(mx), DiscreteMeasure(nx), f);
      const double rhs = a * d_f(mu1, nu1, f) + (1 - a) * d_f(mu2, nu2, f);
      w_conv = std::max(w_conv, lhs - rhs);

      // Normalization onto probability measures.
      const double dn = d_f(mu1, nu1, f);
      const ConvexGenerator g = f.normalized(mu1.total(), nu1.total());
      const double dg = d_f(mu1.scaled(1.0 / mu1.total()), nu1.scaled(1.0 / nu1.total()), g);
      w_norm = std::max(w_norm, std::abs(dn - dg));

      // Linearity in the generator.
      const double beta = 0.1 + 2.9 * rng.uniform(), alpha = 4 * rng.uniform() - 2;
      const double dl = d_f(mu1, nu1, f.affine(beta, alpha));
      w_lin = std::max(w_lin, std::abs(dl - (alpha * nu1.total() + beta * dn)));

      // Data processing under a random column-stochastic channel.
      const int mo = size();
      Mat ch(mo, m);
      for (int j = 0; j < m; ++j) {
        double s = 0;
        for (int i = 0; i < mo; ++i) s += (ch(i, j) = rng.uniform() < 0.3 ? 0.0 : rng.uniform());
        if (s == 0) ch(0, j) = s = 1;
        ch.col(j) /= s;
      }
      w_dpi = std::max(w_dpi, d_f(push_forward(ch, mu1), push_forward(ch, nu1), f) - dn);
    }
  }
  rep.rows.push_back(McRow::check("convexity: max(D(mix) - mix of D)", w_conv <= 1e-9, w_conv, 1e-9, "<="));
  rep.rows.push_back(McRow::check("normalization: max |D_f - D_g(normalized)|", w_norm <= 1e-9, w_norm, 1e-9, "<="));
  rep.rows.push_back(McRow::check("linearity: max |D_{bf+a} - (a|nu| + b D_f)|", w_lin <= 1e-9, w_lin, 1e-9, "<="));
  rep.rows.push_back(McRow::check("data processing: max(D(G mu, G nu) - D(mu, nu))", w_dpi <= 1e-9, w_dpi, 1e-9, "<="));

  double w_fano = 0, w_dom = -1e300;
  const ConvexGenerator chi = ConvexGenerator::chi2();
  for (int c = 0; c < n_cases; ++c) {
    const double v0 = 0.01 + 0.98 * rng.uniform();
    const double p = 0.05 + 0.95 * rng.uniform();
    const double info = 5.0 * rng.uniform();
    const double bis = gen_fano_value_bound(v0, p, 1.0, info, chi);
    w_fano = std::max(w_fano, std::abs(bis - chi2_fano_exact(v0, p, info)));
    w_dom = std::max(w_dom, bis - chi2_fano_closed_form(v0, info));
  }
  rep.rows.push_back(McRow::check("chi2 Bayes-risk inversion: max |bisection - exact|", w_fano <= 1e-6, w_fano, 1e-6, "<="));
  rep.rows.push_back(McRow::check("bisection <= V0 + sqrt(V0(1-V0) info)", w_dom <= 1e-9, w_dom, 1e-9, "<="));
  rep.seconds = timer.seconds();
  return rep;
}

McReport verify_schedules(const VerifyOptions& opt) {
  Timer timer;
  McReport rep = make_report("schedules", opt.seed, 0, {{"kl_lambda", "1"}, {"kl_d", "1e3..1e9"}, {"chi_T", "20"}});
  std::vector<double> logd, inc1, logd2, inc2;
  for (int e = 3; e <= 9; ++e) {
    const double d = std::pow(10.0, e);
    const TauSchedule s = kl_tau_schedule(d, 1.0, 5);
    if (s.taus.size() >= 2) {
      logd.push_back(std::log(d));
      inc1.push_back(s.taus[1] - s.taus[0]);
    }
    if (s.taus.size() >= 3 && s.taus[2] < d) {
      logd2.push_back(std::log(d));
      inc2.push_back(s.taus[2] - s.taus[1]);
    }
  }
  if (logd.size() >= 3) {
    const LinearFit f = linear_fit(logd, inc1);
    rep.rows.push_back(McRow::check("KL increment tau_2 - tau_1 ~ a log d + b: R^2", f.r2 >= 0.95, f.r2, 0.95, ">=",
                                    "a = " + str(f.slope) + ", b = " + str(f.intercept)));
  } else {
    rep.rows.push_back(McRow::check("KL increment tau_2 - tau_1 defined", false, static_cast<double>(logd.size()), 3, ">="));
  }
  if (logd2.size() >= 3) {
    const LinearFit f = linear_fit(logd2, inc2);
    rep.rows.push_back(McRow::check("KL increment tau_3 - tau_2 ~ a log d + b: R^2", f.r2 >= 0.95, f.r2, 0.95, ">=",
                                    "a = " + str(f.slope) + ", b = " + str(f.intercept)));
  } else {
    rep.rows.push_back(McRow::info("KL increments beyond k = 1 defined at d", static_cast<double>(logd2.size()),
                                   "recursion saturates; fit not attempted"));
  }

  double worst = -1e300;
  int cells = 0;
  for (double delta : {0.01, 0.05, 0.1, 0.25, 0.5})
    for (double lam : {1.0, 1.5, 2.0, 3.0, 4.0, 8.0}) {
      const ChiSchedules cs = chi_tau_schedule(1e6, lam, delta, 20);
      for (std::size_t k = 0; k < cs.exact.taus.size(); ++k)
        worst = std::max(worst, cs.exact.taus[k] / cs.closed.taus[k] - 1.0);
      ++cells;
    }
  rep.rows.push_back(McRow::check("chi2 exact / closed form - 1, max over grid", worst <= 1e-12, worst, 1e-12, "<=",
                                  str(cells) + " (delta, lambda) cells, T = 20"));

  Rng rng(derive_seed(opt.seed, kStreamSchedules));
  double w_floor = -1e300;
  for (int i = 0; i < 200; ++i) {
    const double gamma = 0.999 * rng.uniform();
    const double eps = (1.0 - gamma) * rng.uniform();
    w_floor = std::max(w_floor, f_overlap_floor(eps, gamma) - f_overlap(eps, gamma));
  }
  rep.rows.push_back(McRow::check("F floor - F, max over 200 points", w_floor <= 1e-12, w_floor, 0.0, "<="));

  std::vector<double> le, te;
  for (int e = 3; e <= 9; ++e) {
    le.push_back(std::log(std::pow(10.0, e) * 0.5));
    te.push_back(estimation_T_at(std::pow(10.0, e), 0.5, 4.0, constants::c1_estimation()));
  }
  const LinearFit fe = linear_fit(le, te);
  rep.rows.push_back(McRow::check("estimation T at level 1/2 vs log(d eta): R^2", fe.r2 >= 0.99, fe.r2, 0.99, ">=",
                                  "lambda = 4, eta = 1/2"));
  rep.seconds = timer.seconds();
  return rep;
}

McReport verify_scaling(AlgorithmKind kind, const std::vector<int>& d_grid, double lambda, double target, int n,
                        int max_T, double delta0, const VerifyOptions& opt) {
  require(!d_grid.empty() && n >= 1 && max_T >= 1, "verify_scaling: need a d grid, n >= 1, max_T >= 1");
  require(target > 0 && target < 1, "verify_scaling: target must lie in (0, 1)");
  Timer timer;
  const std::uint64_t seed = derive_seed(opt.seed, kStreamScaling);
  std::string grid;
  for (int d : d_grid) grid += (grid.empty() ? "" : " ") + str(d);
  McReport rep = make_report("scaling", opt.seed, static_cast<std::size_t>(n) * d_grid.size(),
                             {{"alg", to_string(kind)}, {"d", grid}, {"lambda", str(lambda)}, {"target", str(target)},
                              {"n", str(n)}});
  double prev = -1;
  for (int d : d_grid) {
    std::vector<int> qs(static_cast<std::size_t>(n));
    const std::uint64_t ds = derive_seed(seed, static_cast<std::uint64_t>(d));
    parallel_for(static_cast<std::size_t>(n), opt.jobs, [&](std::size_t t) {
      qs[t] = queries_to_target(kind, d, lambda, target, trial_seed(ds, t), max_T);
    });
    const double med = median_int(qs);
    const std::string at = " d=" + str(d);
    BoundParams bp;
    bp.d = d;
    bp.lambda = lambda;
    bp.gamma = gamma_of(d, lambda, delta0, 2.0);
    bp.eps = 1.0 - target;
    const int theory = min_queries(BoundKind::main_theorem, bp, 0.5);
    rep.rows.push_back(McRow::check("median queries_to_target >= main-theorem T - 1" + at, med >= theory - 1, med,
                                    theory - 1, ">=", "gamma = " + str(bp.gamma)));
    if (prev >= 0) rep.rows.push_back(McRow::check("median nondecreasing in d" + at, med >= prev, med, prev, ">="));
    prev = med;
  }
  const int t6 = detection_vacuity_threshold(1e6, lambda), t12 = detection_vacuity_threshold(1e12, lambda);
  const double ratio = t6 > 0 ? static_cast<double>(t12) / t6 : std::numeric_limits<double>::infinity();
  rep.rows.push_back(McRow::check("detection T*(1e12) / T*(1e6)", ratio >= 1.8 && ratio <= 2.2, ratio, 2.0, "in [1.8,2.2]",
                                  "T*(1e6) = " + str(t6) + ", T*(1e12) = " + str(t12)));
  rep.seconds = timer.seconds();
  return rep;
}

}  // namespace pcaq
