#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"

using namespace pcaq::cli;

namespace {

using Row = std::vector<std::string>;

Row split_csv(const std::string& line) {
  Row out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

// Header comment, column names, data rows.
struct Table {
  std::string comment;
  Row columns;
  std::vector<Row> rows;
};

Table parse(const std::string& text) {
  Table t;
  std::stringstream ss(text);
  std::string line;
  std::getline(ss, t.comment);
  std::getline(ss, line);
  t.columns = split_csv(line);
  while (std::getline(ss, line))
    if (!line.empty()) t.rows.push_back(split_csv(line));
  return t;
}

std::string run_bounds(const BoundsConfig& c) {
  std::ostringstream out, log;
  EXPECT_EQ(cmd_bounds(c, out, log), kExitOk);
  return out.str();
}

int run_binary(const std::string& args) {
  const std::string cmd = std::string(PCAQ_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(CliSimulate, ShapeAndDeterminism) {
  SimulateConfig c;
  c.d = 64;
  c.T = 4;
  c.trials = 5;
  std::ostringstream a, b, log;
  ASSERT_EQ(cmd_simulate(c, a, log), kExitOk);
  c.jobs = 2;
  ASSERT_EQ(cmd_simulate(c, b, log), kExitOk);
  EXPECT_EQ(a.str(), b.str());
  const Table t = parse(a.str());
  EXPECT_EQ(t.comment.rfind("# pcaq simulate", 0), 0u);
  const Row expect = {"trial", "T", "queries_used", "rayleigh_ratio", "spike_overlap",
                      "overlap_1", "overlap_2", "overlap_3", "overlap_4"};
  EXPECT_EQ(t.columns, expect);
  ASSERT_EQ(t.rows.size(), 6u);
  EXPECT_EQ(t.rows.back().front(), "median");
  for (const Row& r : t.rows) EXPECT_EQ(r.size(), expect.size());
}

TEST(CliSimulate, RejectsBadConfig) {
  SimulateConfig c;
  c.alg = "qr";
  std::ostringstream out, log;
  EXPECT_THROW(cmd_simulate(c, out, log), UsageError);
  c.alg = "power";
  c.T = 0;
  EXPECT_THROW(cmd_simulate(c, out, log), UsageError);
}

TEST(CliBounds, DetectionTvColumnIsMonotone) {
  BoundsConfig c;
  c.kind = "detection-tv";
  c.d = 1e8;
  c.lambda = 8.0;
  c.t_min = 1;
  c.t_max = 30;
  const Table t = parse(run_bounds(c));
  const Row cols = {"kind", "T", "value", "raw", "vacuous", "constants", "note"};
  EXPECT_EQ(t.columns, cols);
  ASSERT_EQ(t.rows.size(), 30u);
  for (std::size_t i = 1; i < t.rows.size(); ++i) EXPECT_GE(std::stod(t.rows[i][3]), std::stod(t.rows[i - 1][3]));
}

TEST(CliBounds, SchedulesSideBySide) {
  BoundsConfig c;
  c.kind = "all";
  c.d = 1e6;
  c.lambda = 2.0;
  c.t_max = 4;
  const Table t = parse(run_bounds(c));
  bool kl = false, chi_exact = false, chi_closed = false;
  for (const Row& r : t.rows) {
    kl |= r[0] == "kl";
    chi_exact |= r[0] == "chi2-exact";
    chi_closed |= r[0] == "chi2-closed";
  }
  EXPECT_TRUE(kl);
  EXPECT_TRUE(chi_exact);
  EXPECT_TRUE(chi_closed);
}

TEST(CliBounds, MinQueriesRow) {
  BoundsConfig c;
  c.kind = "main";
  c.d = 1e8;
  c.gamma = 0.05;
  c.threshold = 0.5;
  const Table t = parse(run_bounds(c));
  ASSERT_FALSE(t.rows.empty());
  EXPECT_EQ(t.rows.back()[0], "min_queries:main");
  EXPECT_GE(std::stoi(t.rows.back()[1]), 1);
}

TEST(CliBounds, RegimeViolationBecomesRow) {
  BoundsConfig c;
  c.kind = "detection-tv";
  c.d = 1e6;
  c.lambda = 1.5;
  c.t_max = 1;
  const Table t = parse(run_bounds(c));
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0][2], "nan");
  EXPECT_FALSE(t.rows[0][6].empty());
}

TEST(CliBounds, ByteIdenticalReruns) {
  BoundsConfig c;
  c.lambda = 4.0;
  EXPECT_EQ(run_bounds(c), run_bounds(c));
}

TEST(CliScaling, Shape) {
  ScalingConfig c;
  c.d_grid = {128, 256};
  c.trials = 3;
  c.max_T = 30;
  std::ostringstream out, log;
  ASSERT_EQ(cmd_scaling(c, out, log), kExitOk);
  const Table t = parse(out.str());
  const Row cols = {"d", "gamma", "empirical_median", "theoretical_min_queries", "theoretical_T_continuous", "trials"};
  EXPECT_EQ(t.columns, cols);
  EXPECT_EQ(t.rows.size(), 2u);
}

TEST(CliBinary, ExitCodes) {
  EXPECT_EQ(run_binary("bounds --kind main --gamma 0.1 --T 1"), 0);
  EXPECT_EQ(run_binary("bounds --kind nonsense"), 2);
  EXPECT_EQ(run_binary("simulate --d -4"), 2);
  EXPECT_EQ(run_binary("frobnicate"), 2);
  EXPECT_EQ(run_binary("verify --check no-such-check"), 2);
  EXPECT_EQ(run_binary("verify --check divergence-laws"), 0);
  EXPECT_EQ(run_binary("verify --list"), 0);
}

TEST(CliBinary, WritesToOutputDir) {
  const auto dir = std::filesystem::temp_directory_path() / "pcaq_cli_test";
  std::filesystem::remove_all(dir);
  const std::string env = "PCAQ_OUTPUT_DIR=" + dir.string() + " ";
  const std::string cmd = env + PCAQ_CLI_PATH + " bounds --kind main --gamma 0.1 --T 2 >/dev/null 2>&1";
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  std::ifstream f(dir / "bounds.csv");
  ASSERT_TRUE(f.good());
  std::string first;
  std::getline(f, first);
  EXPECT_EQ(first.rfind("# pcaq bounds --kind main", 0), 0u);
  std::filesystem::remove_all(dir);
}
