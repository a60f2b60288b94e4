#include <gtest/gtest.h>

#include <cmath>

#include "pcaq/algorithms.hpp"
#include "pcaq/instance.hpp"
#include "pcaq/oracle.hpp"
#include "pcaq/rng.hpp"

using namespace pcaq;

namespace {

Vec unit(Eigen::Index d, Eigen::Index i) {
  Vec v = Vec::Zero(d);
  v(i) = 1.0;
  return v;
}

}  // namespace

TEST(QuerySession, ReturnsExactProductsAndEnforcesBudget) {
  const SpikedInstance inst = make_spiked(30, 2.0, 1);
  QuerySession s(inst, 3);
  for (int i = 0; i < 3; ++i) {
    const Vec v = sample_uniform_sphere(30, 100 + i);
    EXPECT_LE((s.query(v) - inst.matrix.dense() * v).norm(), 1e-12);
  }
  EXPECT_EQ(s.queries_made(), 3);
  EXPECT_EQ(s.remaining(), 0);
  EXPECT_THROW(s.query(unit(30, 0)), BudgetExhausted);
  EXPECT_EQ(s.transcript().size(), 3u);
}

TEST(QuerySession, RejectsBadQueries) {
  const SpikedInstance inst = make_spiked(10, 1.0, 2);
  EXPECT_THROW(QuerySession(inst, 0), std::invalid_argument);
  QuerySession s(inst, 5);
  EXPECT_THROW(s.query(Vec::Ones(10)), std::invalid_argument);
  EXPECT_THROW(s.query(unit(9, 0)), std::invalid_argument);
  Vec nan = unit(10, 0);
  nan(3) = std::nan("");
  EXPECT_THROW(s.query(nan), std::invalid_argument);
  EXPECT_EQ(s.queries_made(), 0);
}

TEST(QuerySession, RepeatedQueryIsDegenerateButCharged) {
  const SpikedInstance inst = make_spiked(20, 3.0, 3);
  QuerySession s(inst, 4);
  const Vec v = sample_uniform_sphere(20, 5);
  const Vec a = s.query(v);
  const Vec b = s.query(v);
  EXPECT_TRUE(a == b);
  EXPECT_EQ(s.queries_made(), 2);
  EXPECT_EQ(s.degenerate_count(), 1);
  const ProjectedStep p = s.projected_view(1);
  EXPECT_TRUE(p.degenerate);
  EXPECT_EQ(p.response.norm(), 0.0);
  EXPECT_EQ(s.transcript().basis().cols(), 1);
  EXPECT_THROW(s.projected_view(2), std::out_of_range);
}

TEST(QuerySession, ProjectedResponsesAreOrthogonalToThePast) {
  const SpikedInstance inst = make_spiked(50, 2.5, 4);
  QuerySession s(inst, 6);
  for (int i = 0; i < 6; ++i) s.query(sample_uniform_sphere(50, 200 + i));
  const Mat q = s.transcript().basis();
  EXPECT_LE((q.transpose() * q - Mat::Identity(6, 6)).cwiseAbs().maxCoeff(), 1e-12);
  for (std::size_t i = 0; i < 6; ++i) {
    const ProjectedStep p = s.projected_view(i);
    // Orthogonal to earlier directions only; the current direction may appear.
    for (std::size_t j = 0; j < i; ++j) EXPECT_NEAR(q.col(static_cast<Eigen::Index>(j)).dot(p.response), 0.0, 1e-10);
    Vec expect = inst.matrix.apply(p.direction);
    const Mat prior = q.leftCols(static_cast<Eigen::Index>(i));
    expect -= prior * (prior.transpose() * expect);
    EXPECT_LE((expect - p.response).norm(), 1e-10);
  }
}

TEST(Transcript, RawResponsesRebuildFromProjectedOnes) {
  const SpikedInstance inst = make_spiked(40, 3.0, 6);
  QuerySession s(inst, 8);
  for (int i = 0; i < 8; ++i) {
    Vec v = sample_uniform_sphere(40, 300 + i);
    if (i == 5) v = s.transcript().step(2).query;  // repeat
    s.query(v);
  }
  for (std::size_t i = 0; i < 8; ++i)
    EXPECT_LE((s.transcript().reconstruct_raw(i) - s.transcript().step(i).raw).norm(), 1e-10) << i;
}

TEST(QuerySession, FinalizeRules) {
  const SpikedInstance inst = make_spiked(10, 1.0, 7);
  QuerySession s(inst, 2);
  EXPECT_THROW(s.sealed(), std::logic_error);
  EXPECT_THROW(s.finalize(Vec::Ones(10)), std::invalid_argument);
  s.finalize(unit(10, 1));
  EXPECT_TRUE(s.finalized());
  EXPECT_THROW(s.finalize(unit(10, 1)), std::logic_error);
  EXPECT_THROW(s.query(unit(10, 0)), std::logic_error);
  EXPECT_EQ(s.sealed().size(), 0u);
}

TEST(Score, Examples) {
  SpikedInstance inst = make_spiked(4, 2.0, 8);
  QuerySession s(inst, 2);
  s.query(inst.theta);
  s.finalize(inst.theta);
  const Metrics m = score(s.sealed(), inst);
  EXPECT_NEAR(m.spike_overlap, 1.0, 1e-12);
  EXPECT_NEAR(m.step_overlaps.at(0), 4.0, 1e-12);
  EXPECT_NEAR(m.rayleigh, inst.theta.dot(inst.matrix.apply(inst.theta)), 1e-12);
  EXPECT_NEAR(m.op_norm, spectrum(inst.matrix).op_norm, 1e-10);

  QuerySession un(inst, 1);
  EXPECT_THROW(score(un.transcript(), inst), std::logic_error);

  QuerySession s2(inst, 1);
  s2.finalize(inst.theta);
  EXPECT_DOUBLE_EQ(score(s2.sealed(), inst, 10.0).rayleigh_ratio, m.rayleigh / 10.0);
}

TEST(Score, PowerReachesRatioAtD2000) {
  int good = 0;
  const int trials = 100;
  for (int t = 0; t < trials; ++t) {
    const SpikedInstance inst = make_spiked(2000, 4.0, derive_seed(31, static_cast<std::uint64_t>(t)));
    QuerySession s(inst, 10);
    AlgorithmConfig cfg;
    cfg.budget = 10;
    cfg.seed = static_cast<std::uint64_t>(t);
    run_power(s, cfg);
    if (score(s.sealed(), inst, extreme_eigenvalues(inst.matrix, 1).lambda_max).rayleigh_ratio >= 0.9) ++good;
  }
  EXPECT_GE(good, 95);
}

TEST(TranscriptCsv, HashesAndColumns) {
  EXPECT_EQ(vector_hash(Eigen::Vector2d(1.0, 0.0)), "2f125cea1c5d04b8");
  EXPECT_EQ(vector_hash(Eigen::Vector3d(0.6, 0.8, 0.0)), "abee709d8225e990");

  const SymmetricMatrix m(Mat(Eigen::Vector2d(3, 1).asDiagonal()));
  QuerySession s(m, 2);
  s.query(Eigen::Vector2d(1.0, 0.0));
  s.query(Eigen::Vector2d(1.0, 0.0));
  const Vec theta = Eigen::Vector2d(1.0, 0.0);
  EXPECT_EQ(transcript_csv(s.transcript(), &theta),
            "step,query_hash,overlap,projected_norm,degenerate\n"
            "1,2f125cea1c5d04b8,2,3,0\n"
            "2,2f125cea1c5d04b8,2,0,1\n");
  EXPECT_EQ(transcript_csv(s.transcript()),
            "step,query_hash,overlap,projected_norm,degenerate\n"
            "1,2f125cea1c5d04b8,,3,0\n"
            "2,2f125cea1c5d04b8,,0,1\n");
}
