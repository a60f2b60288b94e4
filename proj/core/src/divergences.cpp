#include "pcaq/divergences.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pcaq {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// t * slope with the convention 0 * inf = 0.
double mass_times_slope(double t, double slope) { return t > 0.0 ? t * slope : 0.0; }
}  // namespace

DiscreteMeasure::DiscreteMeasure(std::vector<double> masses) : m_(std::move(masses)) {
  for (double x : m_) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw std::invalid_argument("DiscreteMeasure: masses must be finite and >= 0");
    total_ += x;
  }
}

bool DiscreteMeasure::is_probability() const { return std::abs(total_ - 1.0) <= 1e-12; }

DiscreteMeasure DiscreteMeasure::scaled(double a) const {
  std::vector<double> m = m_;
  for (double& x : m) x *= a;
  return DiscreteMeasure(std::move(m));
}

ConvexGenerator ConvexGenerator::chi2() { return {"x^2", [](double x) { return x * x; }, kInf}; }

ConvexGenerator ConvexGenerator::kl() {
  return {"x log x", [](double x) { return x > 0.0 ? x * std::log(x) : 0.0; }, kInf};
}

ConvexGenerator ConvexGenerator::affine(double beta, double alpha) const {
  if (!(beta > 0.0)) throw std::invalid_argument("ConvexGenerator::affine: beta must be > 0");
  auto g = f;
  return {name + " (affine)", [g, beta, alpha](double x) { return beta * g(x) + alpha; }, beta * slope_at_infinity};
}

ConvexGenerator ConvexGenerator::normalized(double mu_total, double nu_total) const {
  if (!(mu_total > 0.0 && nu_total > 0.0)) throw std::invalid_argument("ConvexGenerator::normalized: totals must be > 0");
  auto g = f;
  return {name + " (normalized)", [g, mu_total, nu_total](double t) { return nu_total * g(t * mu_total / nu_total); },
          mass_times_slope(mu_total, slope_at_infinity)};
}

bool ConvexGenerator::midpoint_convex(double xmax, int n, double tol) const {
  std::vector<double> xs;
  for (int i = 0; i < n; ++i) xs.push_back(xmax * std::pow(10.0, -6.0 * (n - 1 - i) / (n - 1)));
  for (double x : xs)
    for (double y : xs)
      if (f(0.5 * (x + y)) > 0.5 * (f(x) + f(y)) + tol * (1.0 + std::abs(f(x)) + std::abs(f(y)))) return false;
  return true;
}

double d_f(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const ConvexGenerator& f) {
  if (mu.size() != nu.size()) throw std::invalid_argument("d_f: measures must share a support");
  if (!(nu.total() > 0.0)) throw std::invalid_argument("d_f: nu must have positive total mass");
  double s = 0.0, off = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (nu[i] > 0.0) s += nu[i] * f.f(mu[i] / nu[i]);
    else off += mu[i];
  }
  return s + mass_times_slope(off, f.slope_at_infinity);
}

double chi2_plus1(const DiscreteMeasure& mu, const DiscreteMeasure& nu) { return d_f(mu, nu, ConvexGenerator::chi2()); }
double kl(const DiscreteMeasure& mu, const DiscreteMeasure& nu) { return d_f(mu, nu, ConvexGenerator::kl()); }

DiscreteMeasure push_forward(const Mat& channel, const DiscreteMeasure& mu) {
  if (static_cast<std::size_t>(channel.cols()) != mu.size()) throw std::invalid_argument("push_forward: shape mismatch");
  for (Eigen::Index j = 0; j < channel.cols(); ++j) {
    if ((channel.col(j).array() < 0.0).any()) throw std::invalid_argument("push_forward: negative channel entry");
    if (std::abs(channel.col(j).sum() - 1.0) > 1e-12) throw std::invalid_argument("push_forward: channel is not column-stochastic");
  }
  const Vec m = Eigen::Map<const Vec>(mu.masses().data(), static_cast<Eigen::Index>(mu.size()));
  const Vec out = channel * m;
  return DiscreteMeasure(std::vector<double>(out.data(), out.data() + out.size()));
}

double phi_f(double a, double b, double p, double q, const ConvexGenerator& f) {
  constexpr double eps = 1e-15;
  if (a < -eps || a > p + eps * (1 + p)) throw std::invalid_argument("phi_f: need 0 <= a <= p");
  if (b < -eps || b > q + eps * (1 + q)) throw std::invalid_argument("phi_f: need 0 <= b <= q");
  a = std::clamp(a, 0.0, p);
  b = std::clamp(b, 0.0, q);
  const double left = b > 0.0 ? b * f.f(a / b) : mass_times_slope(a, f.slope_at_infinity);
  const double qb = q - b, pa = p - a;
  const double right = qb > 0.0 ? qb * f.f(pa / qb) : mass_times_slope(pa, f.slope_at_infinity);
  return left + right;
}

double gen_fano_value_bound(double V0, double p, double q, double info, const ConvexGenerator& f) {
  if (!(V0 > 0.0 && V0 < 1.0)) throw std::invalid_argument("gen_fano_value_bound: V0 must lie in (0,1)");
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("gen_fano_value_bound: p must lie in (0,1]");
  if (!(q > 0.0)) throw std::invalid_argument("gen_fano_value_bound: q must be > 0");
  if (!(info >= 0.0)) throw std::invalid_argument("gen_fano_value_bound: info must be >= 0");
  const double b = q * V0;
  auto phi = [&](double v) { return phi_f(v, b, p, q, f); };
  double lo = p * V0, hi = p;
  if (phi(hi) <= info) return hi;
  if (phi(lo) > info) return lo;
  // phi(., b; p, q) is nondecreasing on [p V0, p]; keep phi(lo) <= info < phi(hi).
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    if (phi(mid) <= info) lo = mid;
    else hi = mid;
  }
  return lo;
}

double chi2_fano_exact(double V0, double p, double info) {
  if (!(V0 > 0.0 && V0 < 1.0)) throw std::invalid_argument("chi2_fano_exact: V0 must lie in (0,1)");
  if (info < p * p) return p * V0;
  return std::min(p, p * V0 + std::sqrt(V0 * (1.0 - V0) * (info - p * p)));
}

double chi2_fano_closed_form(double V0, double info) { return V0 + std::sqrt(V0 * (1.0 - V0) * info); }

ClippedValue global_fano_bound(double V0, double info) {
  if (!(V0 > 0.0 && V0 < 1.0)) throw std::invalid_argument("global_fano_bound: V0 must lie in (0,1)");
  if (!(info >= 0.0)) throw std::invalid_argument("global_fano_bound: info must be >= 0");
  ClippedValue r;
  r.raw = (info + std::log(2.0)) / std::log(1.0 / V0);
  r.vacuous = r.raw >= 1.0;
  r.value = std::min(r.raw, 1.0);
  return r;
}

ClippedValue truncated_chi2_tv(double chi_term, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("truncated_chi2_tv: p must lie in [0,1]");
  ClippedValue r;
  r.clamped = chi_term < 1.0;
  r.raw = 0.5 * std::sqrt(std::max(chi_term - 1.0, 0.0)) + (std::sqrt(2.0 * (1.0 - p)) + (1.0 - p)) / 2.0;
  r.vacuous = r.raw >= 1.0;
  r.value = std::min(r.raw, 1.0);
  return r;
}

Mat pseudo_inverse_psd(const Mat& sigma, double rel_cut) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (sigma + sigma.transpose()));
  const Vec& ev = es.eigenvalues();
  const double smax = ev.cwiseAbs().maxCoeff();
  Vec inv = Vec::Zero(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > rel_cut * smax) inv(i) = 1.0 / ev(i);
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

double gaussian_kl(const Vec& mu1, const Vec& mu2, const Mat& sigma) {
  if (mu1.size() != mu2.size() || sigma.rows() != mu1.size() || sigma.cols() != mu1.size())
    throw std::invalid_argument("gaussian_kl: shape mismatch");
  const Vec delta = mu1 - mu2;
  const double dn = delta.norm();
  if (dn == 0.0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (sigma + sigma.transpose()));
  const Vec& ev = es.eigenvalues();
  const double smax = ev.cwiseAbs().maxCoeff();
  const Vec c = es.eigenvectors().transpose() * delta;
  double quad = 0.0, ker2 = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > 1e-10 * smax) quad += c(i) * c(i) / ev(i);
    else ker2 += c(i) * c(i);
  }
  if (std::sqrt(ker2) > 1e-8 * dn) throw RegimeError("gaussian_kl: mean difference has a component in ker(Sigma)");
  return 0.5 * quad;
}

namespace {
void check_orthonormal(const Mat& q) {
  const Mat g = q.transpose() * q;
  if ((g - Mat::Identity(q.cols(), q.cols())).cwiseAbs().maxCoeff() > 1e-8)
    throw std::invalid_argument("queries must be orthonormal");
}
}  // namespace

double log_g_chi(const Vec& u, const Vec& s, const Mat& queries, int i, double lambda, double d) {
  if (i < 1 || i > queries.cols()) throw std::invalid_argument("g_chi: index out of range");
  if (u.size() != queries.rows() || s.size() != queries.rows()) throw std::invalid_argument("g_chi: shape mismatch");
  check_orthonormal(queries);
  const auto prior = queries.leftCols(i - 1);
  const Vec v = queries.col(i - 1);
  const Vec pu = u - prior * (prior.transpose() * u);
  const Vec ps = s - prior * (prior.transpose() * s);
  const double vu = v.dot(u), vs = v.dot(s);
  // u^T P (P - v v^T / 2) P s, using P v = v.
  const double quad = pu.dot(ps) - 0.5 * v.dot(pu) * v.dot(ps);
  return lambda * lambda * d * vu * vs * quad;
}

double g_chi(const Vec& u, const Vec& s, const Mat& queries, int i, double lambda, double d) {
  return std::exp(log_g_chi(u, s, queries, i, lambda, d));
}

double likelihood_product_bound(const Vec& u, const Vec& s, const std::vector<double>& taus, double lambda, double d,
                                int T) {
  if (T < 0 || static_cast<std::size_t>(T) > taus.size()) throw std::invalid_argument("likelihood_product_bound: T out of range");
  double sum = 0.0;
  for (int i = 0; i < T; ++i) {
    if (!(taus[static_cast<std::size_t>(i)] > 0.0)) throw std::invalid_argument("likelihood_product_bound: taus must be > 0");
    sum += taus[static_cast<std::size_t>(i)];
  }
  return std::exp(lambda * lambda * (std::abs(u.dot(s)) * sum + sum * sum / d));
}

double sphere_mgf_bound(double lambda_arg, double d) {
  if (!(lambda_arg >= 0.0)) throw std::invalid_argument("sphere_mgf_bound: lambda must be >= 0");
  return std::exp(4.0 * lambda_arg * lambda_arg / d + lambda_arg * std::sqrt(2.0 / d));
}

double kl_step_bound(const Vec& u0, const Vec& u1, const Vec& v, double lambda, double d) {
  const double a = u0.dot(v), b = u1.dot(v);
  return 0.5 * lambda * lambda * d * (a * a + b * b - 2.0 * a * b * u0.dot(u1));
}

GaussianLaw conditional_law(const Vec& u, const Mat& queries, int i, double lambda) {
  if (i < 1 || i > queries.cols()) throw std::invalid_argument("conditional_law: index out of range");
  const Eigen::Index d = queries.rows();
  const auto prior = queries.leftCols(i - 1);
  const Mat p = Mat::Identity(d, d) - prior * prior.transpose();
  const Vec v = queries.col(i - 1);
  GaussianLaw g;
  g.mean = lambda * u.dot(v) * (p * u);
  g.cov = p * (Mat::Identity(d, d) + v * v.transpose()) * p / static_cast<double>(d);
  return g;
}

}  // namespace pcaq
