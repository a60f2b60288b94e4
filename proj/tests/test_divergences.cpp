#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "pcaq/divergences.hpp"
#include "pcaq/instance.hpp"
#include "pcaq/rng.hpp"

using namespace pcaq;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

// Columns from numpy's QR of a fixed 5x2 matrix (see tests/oracle).
Mat fixed_queries() {
  Mat q(5, 2);
  q << -0.8481889296799712, 0.14892310647413004, -0.25445667890399126, -0.8318227568825284, -0.08481889296799709,
      0.40651983118613894, -0.4240944648399855, -0.01878309451025066, 0.16963778593599418, -0.34681642363569926;
  return q;
}

}  // namespace

TEST(DiscreteMeasure, Basics) {
  const DiscreteMeasure m({0.25, 0.75});
  EXPECT_TRUE(m.is_probability());
  EXPECT_DOUBLE_EQ(m.scaled(2.0).total(), 2.0);
  EXPECT_THROW(DiscreteMeasure({0.5, -0.1}), std::invalid_argument);
}

TEST(DF, Examples) {
  const DiscreteMeasure nu({0.5, 0.5});
  EXPECT_NEAR(d_f(nu, nu, ConvexGenerator::chi2()), 1.0, 1e-15);
  EXPECT_NEAR(d_f(nu, nu, ConvexGenerator::kl()), 0.0, 1e-15);
  EXPECT_NEAR(d_f(DiscreteMeasure({0.3, 0.2}), nu, ConvexGenerator::chi2()), 0.26, 1e-15);
  EXPECT_NEAR(chi2_plus1(nu.scaled(0.5), nu), 0.25, 1e-15);
}

TEST(DF, OffSupportMass) {
  const DiscreteMeasure mu({0.5, 0.5}), nu({1.0, 0.0});
  EXPECT_EQ(chi2_plus1(mu, nu), kInf);
  EXPECT_EQ(kl(mu, nu), kInf);
  // No mass off the support: 0 * inf = 0.
  EXPECT_NEAR(kl(DiscreteMeasure({1.0, 0.0}), nu), 0.0, 1e-15);
}

TEST(KL, TwoAtoms) {
  const double p = 0.3, q = 0.6;
  const double expect = p * std::log(p / q) + (1 - p) * std::log((1 - p) / (1 - q));
  EXPECT_NEAR(kl(DiscreteMeasure({p, 1 - p}), DiscreteMeasure({q, 1 - q})), expect, 1e-15);
}

TEST(Chi2Plus1, LowerBoundByMassRatio) {
  const DiscreteMeasure nu({0.2, 0.3, 0.5});
  const DiscreteMeasure mu({0.1, 0.4, 0.2});
  EXPECT_GE(chi2_plus1(mu, nu), mu.total() * mu.total() / nu.total());
  EXPECT_NEAR(chi2_plus1(nu.scaled(0.7), nu), 0.49, 1e-15);
}

TEST(PhiF, Examples) {
  const ConvexGenerator f = ConvexGenerator::chi2();
  EXPECT_NEAR(phi_f(0.5, 0.5, 1, 1, f), 1.0, 1e-15);
  const double p = 0.6, q = 0.8;
  for (double b : {0.1, 0.4, 0.7}) {
    const double at_min = phi_f(p / q * b, b, p, q, f);
    EXPECT_NEAR(at_min, q * (p / q) * (p / q), 1e-14);
    EXPECT_GE(phi_f(p / q * b + 0.05, b, p, q, f), at_min);
  }
  EXPECT_EQ(phi_f(0.2, 0.0, p, q, f), kInf);
  EXPECT_THROW(phi_f(0.7, 0.1, p, q, f), std::invalid_argument);
  EXPECT_THROW(phi_f(0.1, 0.9, p, q, f), std::invalid_argument);
}

TEST(PhiF, JointlyConvex) {
  Rng rng(5);
  const double p = 0.7, q = 1.0;
  for (const auto& f : {ConvexGenerator::chi2(), ConvexGenerator::kl()})
    for (int i = 0; i < 200; ++i) {
      const double a1 = rng.uniform() * p, b1 = 0.01 + 0.98 * rng.uniform() * q;
      const double a2 = rng.uniform() * p, b2 = 0.01 + 0.98 * rng.uniform() * q;
      const double mid = phi_f((a1 + a2) / 2, (b1 + b2) / 2, p, q, f);
      EXPECT_LE(mid, (phi_f(a1, b1, p, q, f) + phi_f(a2, b2, p, q, f)) / 2 + 1e-9);
    }
}

TEST(GenFano, Examples) {
  const ConvexGenerator f = ConvexGenerator::chi2();
  EXPECT_NEAR(gen_fano_value_bound(0.3, 0.8, 1.0, 0.0, f), 0.24, 1e-9);
  EXPECT_NEAR(gen_fano_value_bound(0.3, 0.8, 1.0, 1e9, f), 0.8, 1e-9);
  EXPECT_NEAR(gen_fano_value_bound(0.3, 0.8, 1.0, 0.9, f), 0.47366642891095845, 1e-6);
  EXPECT_NEAR(chi2_fano_exact(0.3, 0.8, 0.9), 0.47366642891095845, 1e-14);
  for (double info : {0.7, 1.0, 2.0}) {
    EXPECT_NEAR(gen_fano_value_bound(0.2, 1.0, 1.0, info, f), chi2_fano_exact(0.2, 1.0, info), 1e-6);
    EXPECT_LE(chi2_fano_exact(0.2, 0.9, info), chi2_fano_closed_form(0.2, info) + 1e-15);
  }
  EXPECT_DOUBLE_EQ(chi2_fano_exact(0.3, 0.8, 0.5), 0.24);
}

TEST(GlobalFano, Examples) {
  const ClippedValue a = global_fano_bound(std::exp(-10.0), 0.0);
  EXPECT_NEAR(a.value, 0.069314718055994531, 1e-15);
  EXPECT_FALSE(a.vacuous);
  const ClippedValue b = global_fano_bound(1 - 1e-9, 0.0);
  EXPECT_TRUE(b.vacuous);
  EXPECT_DOUBLE_EQ(b.value, 1.0);
  EXPECT_LT(global_fano_bound(0.01, 0.1).raw, global_fano_bound(0.01, 0.2).raw);
  EXPECT_THROW(global_fano_bound(1.0, 0.0), std::invalid_argument);
}

TEST(TruncatedChi2Tv, Examples) {
  EXPECT_NEAR(truncated_chi2_tv(1.0, 1.0).value, 0.0, 1e-15);
  const ClippedValue v = truncated_chi2_tv(1.0, 0.0);
  EXPECT_NEAR(v.raw, (std::sqrt(2.0) + 1) / 2, 1e-15);
  EXPECT_TRUE(v.vacuous);
  EXPECT_DOUBLE_EQ(v.value, 1.0);
  EXPECT_NEAR(truncated_chi2_tv(1.04, 1.0).value, 0.1, 1e-15);
  const ClippedValue c = truncated_chi2_tv(0.9, 1.0);
  EXPECT_TRUE(c.clamped);
  EXPECT_EQ(c.value, 0.0);
  EXPECT_THROW(truncated_chi2_tv(1.0, 1.5), std::invalid_argument);
}

TEST(GaussianKl, Examples) {
  const Vec z = Vec::Zero(3);
  EXPECT_EQ(gaussian_kl(z, z, Mat::Identity(3, 3)), 0.0);
  EXPECT_NEAR(gaussian_kl(Eigen::Vector3d(1, 0, 0), z, Mat::Identity(3, 3)), 0.5, 1e-15);
  const Mat s = Eigen::Vector3d(1, 1, 0).asDiagonal();
  EXPECT_NEAR(gaussian_kl(Eigen::Vector3d(1, 1, 0), z, s), 1.0, 1e-14);
  EXPECT_THROW(gaussian_kl(Eigen::Vector3d(0, 0, 1), z, s), RegimeError);
}

TEST(GChi, Examples) {
  const Mat q = fixed_queries();
  Vec u(5), s(5);
  u << 0.4, -0.2, 0.5, 0.6, 0.3;
  s << 0.1, 0.7, -0.3, 0.4, 0.2;
  u.normalize();
  s.normalize();
  EXPECT_NEAR(g_chi(u, s, q, 1, 0.7, 5), 0.966415322857234, 1e-12);
  EXPECT_NEAR(g_chi(u, s, q, 2, 0.7, 5), 1.02447261159437, 1e-12);

  // Spike orthogonal to the query: exponent zero.
  Vec w = u - q.col(0) * q.col(0).dot(u);
  w.normalize();
  EXPECT_NEAR(g_chi(w, s, q, 1, 0.7, 5), 1.0, 1e-14);

  const Vec v = q.col(0);
  const double lam = 0.3, d = 5;
  EXPECT_NEAR(log_g_chi(v, v, q, 1, lam, d), lam * lam * d / 2, 1e-12);
  EXPECT_THROW(g_chi(u, s, q * 2.0, 1, 0.7, 5), std::invalid_argument);
}

TEST(LikelihoodProduct, Examples) {
  const Vec e1 = Eigen::Vector2d(1, 0), e2 = Eigen::Vector2d(0, 1);
  const std::vector<double> taus = {3.0, 5.0};
  EXPECT_NEAR(likelihood_product_bound(e1, e2, taus, 0.5, 100, 2), std::exp(0.25 * 64 / 100), 1e-14);
  EXPECT_EQ(likelihood_product_bound(e1, e1, taus, 0.0, 100, 2), 1.0);
  EXPECT_NEAR(likelihood_product_bound(e1, e1, taus, 0.5, 100, 2), std::exp(0.25 * (8 + 0.64)), 1e-12);
}

TEST(SphereMgf, Examples) {
  EXPECT_EQ(sphere_mgf_bound(0.0, 100), 1.0);
  EXPECT_NEAR(sphere_mgf_bound(5.0, 100), 5.5129881006378744, 1e-13);
}

TEST(KlStep, MatchesGaussianKl) {
  const int d = 8;
  const Vec u0 = sample_uniform_sphere(d, 1), u1 = sample_uniform_sphere(d, 2), v = sample_uniform_sphere(d, 3);
  const double lam = 1.3;
  // Laws of the first response M v: mean lam <u,v> u, covariance (I + v v^T)/d.
  const Mat cov = (Mat::Identity(d, d) + v * v.transpose()) / d;
  const double direct = gaussian_kl(lam * u0.dot(v) * u0, lam * u1.dot(v) * u1, cov);
  EXPECT_LE(direct, kl_step_bound(u0, u1, v, lam, d) + 1e-12);
}

TEST(ConditionalLaw, FirstStep) {
  const int d = 6;
  const Vec u = sample_uniform_sphere(d, 4);
  Mat q = Mat::Zero(d, 1);
  q(0, 0) = 1.0;
  const GaussianLaw g = conditional_law(u, q, 1, 2.0);
  EXPECT_LE((g.mean - 2.0 * u(0) * u).norm(), 1e-14);
  Mat expect = Mat::Identity(d, d);
  expect(0, 0) = 2.0;
  EXPECT_LE((g.cov - expect / d).norm(), 1e-14);
}

TEST(Generators, AffineAndNormalized) {
  const ConvexGenerator f = ConvexGenerator::chi2();
  EXPECT_TRUE(f.midpoint_convex());
  EXPECT_TRUE(ConvexGenerator::kl().midpoint_convex());
  const DiscreteMeasure mu({0.1, 0.3}), nu({0.4, 0.2});
  EXPECT_NEAR(d_f(mu, nu, f.affine(2.0, 1.0)), 2.0 * d_f(mu, nu, f) + nu.total(), 1e-14);
  const ConvexGenerator g = f.normalized(mu.total(), nu.total());
  EXPECT_NEAR(d_f(mu.scaled(1 / mu.total()), nu.scaled(1 / nu.total()), g), d_f(mu, nu, f), 1e-12);
}

TEST(PushForward, DataProcessing) {
  Mat ch(2, 3);
  ch << 1.0, 0.5, 0.0, 0.0, 0.5, 1.0;
  const DiscreteMeasure mu({0.2, 0.5, 0.3}), nu({0.4, 0.2, 0.4});
  const DiscreteMeasure pm = push_forward(ch, mu);
  EXPECT_NEAR(pm[0], 0.45, 1e-15);
  EXPECT_NEAR(pm[1], 0.55, 1e-15);
  EXPECT_LE(kl(pm, push_forward(ch, nu)), kl(mu, nu) + 1e-12);
  EXPECT_LE(chi2_plus1(pm, push_forward(ch, nu)), chi2_plus1(mu, nu) + 1e-12);
}
