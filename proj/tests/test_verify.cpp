#include <gtest/gtest.h>

#include "pcaq/verify.hpp"

using namespace pcaq;

TEST(McRow, OneSidedRules) {
  EXPECT_TRUE(McRow::le("x", 1.05, 1.0, 0.02).pass);
  EXPECT_FALSE(McRow::le("x", 1.07, 1.0, 0.02).pass);
  EXPECT_TRUE(McRow::ge("x", 0.95, 1.0, 0.02).pass);
  EXPECT_FALSE(McRow::ge("x", 0.93, 1.0, 0.02).pass);
  EXPECT_TRUE(McRow::info("x", 3.0).pass);
}

TEST(Verify, RegistryNamesAreUnique) {
  const auto names = check_names();
  EXPECT_GE(names.size(), 15u);
  for (std::size_t i = 0; i < names.size(); ++i)
    for (std::size_t j = i + 1; j < names.size(); ++j) EXPECT_NE(names[i], names[j]);
  EXPECT_THROW(run_check("no-such-check", true, {}), std::invalid_argument);
}

TEST(Verify, ReproducibleAndIndependentOfJobs) {
  VerifyOptions a;
  a.seed = 7;
  a.n = 20000;
  VerifyOptions b = a;
  b.jobs = 3;
  for (const char* name : {"sphere-tail", "lipschitz"}) {
    const std::string ca = reports_csv({run_check(name, true, a)});
    EXPECT_EQ(ca, reports_csv({run_check(name, true, a)})) << name;
    EXPECT_EQ(ca, reports_csv({run_check(name, true, b)})) << name;
  }
  VerifyOptions c = a;
  c.seed = 8;
  EXPECT_NE(reports_csv({run_check("sphere-tail", true, a)}), reports_csv({run_check("sphere-tail", true, c)}));
}

TEST(Verify, DeterministicChecksPass) {
  for (const char* name : {"divergence-laws", "schedules", "inner-product-grid"}) {
    const McReport r = run_check(name, true, {});
    EXPECT_TRUE(r.pass()) << r.summary();
    EXPECT_FALSE(r.rows.empty());
  }
}

TEST(Verify, CsvShape) {
  VerifyOptions o;
  o.n = 2000;
  const std::string csv = reports_csv({run_check("sphere-mgf", true, o)});
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "check,label,params,n,seed,empirical,bound,stderr,relation,pass,note");
}
