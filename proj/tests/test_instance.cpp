#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "pcaq/instance.hpp"
#include "pcaq/rng.hpp"

using namespace pcaq;

TEST(SymmetricMatrix, RejectsBadInput) {
  EXPECT_THROW(SymmetricMatrix(Mat::Zero(2, 3)), std::invalid_argument);
  Mat a = Mat::Identity(3, 3);
  a(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(SymmetricMatrix{a}, std::invalid_argument);
  Mat b = Mat::Identity(3, 3);
  b(0, 2) = 0.5;
  EXPECT_THROW(SymmetricMatrix{b}, std::invalid_argument);
}

TEST(SymmetricMatrix, MirrorsRoundingAsymmetry) {
  Mat a(2, 2);
  a << 1.0, 0.3, 0.3 + 1e-15, 2.0;
  const SymmetricMatrix m(a);
  EXPECT_EQ(m(0, 1), m(1, 0));
}

TEST(SampleGoe, SymmetricAndDeterministic) {
  const SymmetricMatrix w = sample_goe(5, 42);
  const SymmetricMatrix w2 = sample_goe(5, 42);
  EXPECT_TRUE(w.dense() == w.dense().transpose());
  EXPECT_TRUE(w.dense() == w2.dense());
  EXPECT_FALSE(w.dense() == sample_goe(5, 43).dense());
  EXPECT_THROW(sample_goe(0, 1), std::invalid_argument);
}

TEST(SampleGoe, ScalarVarianceIsTwo) {
  double s2 = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double x = sample_goe(1, static_cast<std::uint64_t>(i))(0, 0);
    s2 += x * x;
  }
  const double var = s2 / n;
  EXPECT_GE(var, 1.9);
  EXPECT_LE(var, 2.1);
}

TEST(SampleGoe, EntrywiseVariancesAtD3) {
  const int n = 20000;
  Mat s2 = Mat::Zero(3, 3);
  for (int i = 0; i < n; ++i) {
    const Mat w = sample_goe(3, derive_seed(7, static_cast<std::uint64_t>(i))).dense();
    s2 += w.cwiseProduct(w);
  }
  s2 /= n;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double target = i == j ? 2.0 : 1.0;
      // Var of x^2 for N(0, s) is 2 s^2.
      const double se = std::sqrt(2.0 * target * target / n);
      EXPECT_NEAR(s2(i, j), target, 3 * se) << i << "," << j;
    }
}

TEST(SampleUniformSphere, UnitAndOneDimensional) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Vec v = sample_uniform_sphere(1, s);
    EXPECT_EQ(std::abs(v(0)), 1.0);
  }
  EXPECT_NEAR(sample_uniform_sphere(300, 3).norm(), 1.0, 1e-12);
  EXPECT_THROW(sample_uniform_sphere(0, 1), std::invalid_argument);
}

TEST(SampleUniformSphere, Isotropy) {
  const int n = 100000;
  Mat acc = Mat::Zero(50, 50);
  double e1 = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vec v = sample_uniform_sphere(50, derive_seed(11, static_cast<std::uint64_t>(i)));
    acc.selfadjointView<Eigen::Lower>().rankUpdate(v);
    const Vec w = sample_uniform_sphere(100, derive_seed(12, static_cast<std::uint64_t>(i)));
    e1 += w(0) * w(0);
  }
  const Mat mean = Mat(acc.selfadjointView<Eigen::Lower>()) / n;
  EXPECT_LE((mean - Mat::Identity(50, 50) / 50.0).cwiseAbs().maxCoeff(), 0.005);
  EXPECT_GE(e1 / n, 0.009);
  EXPECT_LE(e1 / n, 0.011);
}

TEST(SampleUniformSphere, SphericalTailAtD200) {
  const int n = 20000;
  int hits = 0;
  const Vec v = sample_uniform_sphere(200, 99);
  for (int i = 0; i < n; ++i)
    if (std::sqrt(200.0) * std::abs(v.dot(sample_uniform_sphere(200, derive_seed(13, i)))) >= std::sqrt(2.0) + 1.0) ++hits;
  const double p = static_cast<double>(hits) / n;
  EXPECT_LE(p, std::exp(-0.5) + 3 * std::sqrt(p * (1 - p) / n));
}

TEST(MakeSpiked, InvariantsAndNullCase) {
  const SpikedInstance a = make_spiked(40, 3.0, 5);
  EXPECT_NEAR(a.theta.norm(), 1.0, 1e-12);
  const Mat expect = 3.0 * a.theta * a.theta.transpose() + a.noise.dense() / std::sqrt(40.0);
  EXPECT_LE((a.matrix.dense() - expect).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_TRUE(make_spiked(40, 3.0, 5).theta == a.theta);

  const SpikedInstance z = make_spiked(30, 0.0, 8);
  EXPECT_LE((z.matrix.dense() - z.noise.dense() / std::sqrt(30.0)).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_THROW(make_spiked(10, -1.0, 1), std::invalid_argument);
}

TEST(MakeSpiked, TopEigenvalueNearLambdaAtD1000) {
  int inside = 0;
  const int trials = 100;
  for (int t = 0; t < trials; ++t) {
    const SpikedInstance inst = make_spiked(1000, 4.0, derive_seed(21, static_cast<std::uint64_t>(t)));
    const double l1 = extreme_eigenvalues(inst.matrix, 3).lambda_max;
    if (l1 >= 3.7 && l1 <= 4.5) ++inside;
  }
  EXPECT_GE(inside, 95);
}

TEST(Spectrum, SmallExamples) {
  const SpectrumSummary id = spectrum(SymmetricMatrix(Mat::Identity(4, 4)));
  for (double e : id.eigenvalues) EXPECT_NEAR(e, 1.0, 1e-14);
  EXPECT_NEAR(id.eigenratio, 1.0, 1e-14);

  const SpectrumSummary d3 = spectrum(SymmetricMatrix(Mat(Eigen::Vector3d(3, 1, -2).asDiagonal())));
  EXPECT_DOUBLE_EQ(d3.op_norm, 3.0);
  EXPECT_NEAR(d3.eigenratio, 2.0 / 3.0, 1e-14);

  const Vec th = sample_uniform_sphere(6, 4);
  const SpectrumSummary r1 = spectrum(SymmetricMatrix(Mat(2.5 * th * th.transpose())));
  EXPECT_NEAR(r1.eigenvalues.front(), 2.5, 1e-12);
  EXPECT_NEAR(std::abs(r1.top_vector.dot(th)), 1.0, 1e-12);

  Mat bad = Mat::Identity(2, 2);
  EXPECT_THROW(spectrum(SymmetricMatrix(bad), 1), std::invalid_argument);
}

TEST(Spectrum, ReconstructionAndEigenpair) {
  for (int d : {2, 17, 64}) {
    const SymmetricMatrix w = sample_goe(d, static_cast<std::uint64_t>(d));
    const SpectrumSummary s = spectrum(w);
    EXPECT_NEAR(s.top_vector.norm(), 1.0, 1e-10);
    EXPECT_LE((w.apply(s.top_vector) - s.eigenvalues.front() * s.top_vector).norm(), 1e-8 * s.op_norm);
    for (std::size_t j = 1; j < s.eigenvalues.size(); ++j) EXPECT_GE(s.eigenvalues[j - 1], s.eigenvalues[j]);
    Eigen::SelfAdjointEigenSolver<Mat> es(w.dense());
    const Mat rec = es.eigenvectors() * es.eigenvalues().asDiagonal() * es.eigenvectors().transpose();
    EXPECT_LE((rec - w.dense()).norm(), 1e-8);
  }
}

TEST(Membership, Examples) {
  const auto diag = [](std::initializer_list<double> xs) {
    Vec v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v(i++) = x;
    return SymmetricMatrix(Mat(v.asDiagonal()));
  };
  EXPECT_TRUE(check_membership(diag({1.0, 0.5}), 0.6).member);
  const MembershipResult r = check_membership(diag({1.0, 0.5}), 0.4);
  EXPECT_FALSE(r.member);
  EXPECT_EQ(r.violating_index, 2);
  for (double g : {0.0, 0.5, 0.99}) EXPECT_FALSE(check_membership(diag({-2.0, 1.0}), g).member);
}

TEST(Membership, ConsistentWithEigenratio) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const SpikedInstance inst = make_spiked(30, 6.0, s);
    const SpectrumSummary sp = spectrum(inst.matrix);
    ASSERT_GT(sp.eigenvalues.front(), 0.0);
    ASSERT_GE(sp.eigenvalues.front(), -sp.eigenvalues.back());
    EXPECT_TRUE(check_membership(inst.matrix, sp.eigenratio + 1e-15).member);
  }
}

TEST(Rayleigh, Examples) {
  const SymmetricMatrix m(Mat(Eigen::Vector2d(3, 1).asDiagonal()));
  EXPECT_DOUBLE_EQ(rayleigh(m, Eigen::Vector2d(1, 0)), 3.0);
  EXPECT_THROW(rayleigh(m, Eigen::Vector2d(1, 1)), std::invalid_argument);
  const SymmetricMatrix w = sample_goe(20, 3);
  const SpectrumSummary s = spectrum(w);
  EXPECT_NEAR(rayleigh(w, s.top_vector), s.eigenvalues.front(), 1e-8);
  EXPECT_NEAR(rayleigh(SymmetricMatrix(Mat::Identity(9, 9)), sample_uniform_sphere(9, 1)), 1.0, 1e-14);
}

TEST(OpNorm, KrylovMatchesDense) {
  const SpikedInstance inst = make_spiked(400, 3.0, 77);
  const double dense = spectrum(inst.matrix).op_norm;
  EXPECT_NEAR(op_norm(inst.matrix, 100), dense, 1e-8 * dense);
  const SymmetricMatrix w = sample_goe(300, 5);
  const ExtremeEigen e = extreme_eigenvalues(w, 9);
  const std::vector<double> ev = eigenvalues_desc(w);
  EXPECT_NEAR(e.lambda_max, ev.front(), 1e-7);
  EXPECT_NEAR(e.lambda_min, ev.back(), 1e-7);
}

TEST(EstimateKd, BandAtD500) {
  const KdEstimate k = estimate_kd(500, 20, 2024);
  EXPECT_EQ(k.samples.size(), 20u);
  EXPECT_GE(k.mean, 1.85);
  EXPECT_LE(k.mean, 2.05);
  EXPECT_LE(k.sd, 0.1);
}
