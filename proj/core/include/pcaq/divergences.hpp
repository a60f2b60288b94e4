#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pcaq/common.hpp"

namespace pcaq {

// Finite nonnegative measure on an indexed support; need not be normalized.
class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;
  explicit DiscreteMeasure(std::vector<double> masses);
  std::size_t size() const { return m_.size(); }
  double operator[](std::size_t i) const { return m_[i]; }
  const std::vector<double>& masses() const { return m_; }
  double total() const { return total_; }
  bool is_probability() const;
  DiscreteMeasure scaled(double a) const;

 private:
  std::vector<double> m_;
  double total_ = 0.0;
};

// Convex f on (0, inf) with f(0) taken as the right limit, plus the slope at
// infinity f'(inf) = lim f(x)/x (may be +inf).
struct ConvexGenerator {
  std::string name;
  std::function<double(double)> f;
  double slope_at_infinity = 0.0;

  static ConvexGenerator chi2();  // x^2
  static ConvexGenerator kl();    // x log x, f(0) = 0
  // beta f + alpha, beta > 0.
  ConvexGenerator affine(double beta, double alpha) const;
  // g(t) = |nu| f(t |mu| / |nu|), the generator that moves D_f(mu, nu) onto
  // the normalized pair.
  ConvexGenerator normalized(double mu_total, double nu_total) const;

  // Midpoint convexity on a log-spaced grid of (0, xmax].
  bool midpoint_convex(double xmax = 1e3, int n = 60, double tol = 1e-9) const;
};

// D_f(mu, nu) = sum_{nu>0} nu f(mu/nu) + f'(inf) mu{nu = 0}, with 0 * inf = 0.
double d_f(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const ConvexGenerator& f);
double chi2_plus1(const DiscreteMeasure& mu, const DiscreteMeasure& nu);
double kl(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

// Image of mu under a column-stochastic channel: (Gamma mu)_j = sum_i Gamma(j, i) mu_i.
DiscreteMeasure push_forward(const Mat& channel, const DiscreteMeasure& mu);

// phi_f(a, b; p, q) = b f(a/b) + (q - b) f((p - a)/(q - b)); the b -> 0 and
// b -> q ends use the slope at infinity.
double phi_f(double a, double b, double p, double q, const ConvexGenerator& f);

// Largest V consistent with the generalized Bayes-risk dichotomy:
// max(p V0, sup{V in [p V0, p] : phi_f(V, q V0; p, q) <= info}), by bisection
// (tolerance 1e-9).
double gen_fano_value_bound(double V0, double p, double q, double info, const ConvexGenerator& f);
// Exact root of phi_{x^2}(V, V0; p, 1) = info on the upper branch:
// p V0 + sqrt(V0 (1 - V0) (info - p^2)), or p V0 when info < p^2.
double chi2_fano_exact(double V0, double p, double info);
// Closed-form cap V0 + sqrt(V0 (1 - V0) info).
double chi2_fano_closed_form(double V0, double info);

// (info + log 2) / log(1 / V0), clipped at 1.
struct ClippedValue {
  double value = 0.0;
  double raw = 0.0;
  bool vacuous = false;
  bool clamped = false;  // negative radicand clamped (truncated_chi2_tv only)
};
ClippedValue global_fano_bound(double V0, double info);

// (1/2) sqrt(max(chi - 1, 0)) + (sqrt(2(1-p)) + (1 - p)) / 2, clipped at 1.
ClippedValue truncated_chi2_tv(double chi_term, double p);

// (1/2) dmu^T Sigma^+ dmu, pseudo-inverse cutting eigenvalues below
// 1e-10 * sigma_max. Throws RegimeError when dmu has a component in ker Sigma
// (relative size above 1e-8): the divergence is infinite there.
double gaussian_kl(const Vec& mu1, const Vec& mu2, const Mat& sigma);
Mat pseudo_inverse_psd(const Mat& sigma, double rel_cut = 1e-10);

// exp{lambda^2 d <v_i,u><v_i,s> u^T P_{i-1} Sigma_i^+ P_{i-1} s} with
// Sigma_i^+ = P_{i-1} - (1/2) v_i v_i^T. `queries` holds orthonormal columns;
// i is 1-based.
double g_chi(const Vec& u, const Vec& s, const Mat& queries, int i, double lambda, double d);
// Log of the same quantity.
double log_g_chi(const Vec& u, const Vec& s, const Mat& queries, int i, double lambda, double d);

// exp{lambda^2 (|<u,s>| S + S^2 / d)}, S = sum of the first T taus.
double likelihood_product_bound(const Vec& u, const Vec& s, const std::vector<double>& taus, double lambda, double d,
                                int T);

// exp{4 lambda^2 / d + lambda sqrt(2/d)}.
double sphere_mgf_bound(double lambda_arg, double d);

// (lambda^2 d / 2)(<u0,v>^2 + <u1,v>^2 - 2 <u0,v><u1,v><u0,u1>).
double kl_step_bound(const Vec& u0, const Vec& u1, const Vec& v, double lambda, double d);

// Mean and covariance of P_{i-1} M v_i given the previous queries, for the
// spiked model with spike u: N(lambda <u,v_i> P_{i-1} u, Sigma_i / d) with
// Sigma_i = P_{i-1}(I + v_i v_i^T)P_{i-1}.
struct GaussianLaw {
  Vec mean;
  Mat cov;
};
GaussianLaw conditional_law(const Vec& u, const Mat& queries, int i, double lambda);

}  // namespace pcaq
