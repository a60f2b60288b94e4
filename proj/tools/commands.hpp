#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "pcaq/algorithms.hpp"

namespace pcaq::cli {

// Exit codes shared by every subcommand.
constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

// Bad flag values. Reported with exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SimulateConfig {
  std::string alg = "power";
  int d = 256;
  double lambda = 4.0;
  int T = 10;
  int trials = 10;
  std::uint64_t seed = 1;
  int jobs = 1;
};

struct BoundsConfig {
  std::string kind = "all";  // main | estimation | detection-tv | detection-error | kl-schedule | chi-schedule | all
  double d = 1e6;
  std::optional<double> lambda;
  std::optional<double> gamma;
  double eps = 0.1;
  double eta = 0.5;
  double delta = 0.05;   // chi-square schedule
  double delta0 = 0.1;   // reduction events / detection error
  int t_min = 0;
  int t_max = 10;
  std::optional<double> threshold;
  std::optional<double> c1_main, c1_estimation, c1_detection;
  double kd = 2.0;
};

struct VerifyConfig {
  std::string check = "all";
  bool quick = false;
  std::optional<int> d;
  std::optional<int> n;
  std::uint64_t seed = 20240601;
  int jobs = 1;
};

struct ScalingConfig {
  std::string alg = "power";
  std::vector<int> d_grid = {256, 1024, 4096};
  double lambda = 8.0;
  double target = 0.9;
  int trials = 21;
  int max_T = 60;
  double delta0 = 0.1;
  double kd = 2.0;
  std::optional<double> c1_main;
  std::uint64_t seed = 1;
  int jobs = 1;
};

// Each command validates its config (throwing UsageError), writes CSV to
// `out` starting with a single "# ..." line that echoes the configuration,
// and returns an exit code. `log` receives human-readable progress.
int cmd_simulate(const SimulateConfig& cfg, std::ostream& out, std::ostream& log);
int cmd_bounds(const BoundsConfig& cfg, std::ostream& out, std::ostream& log);
int cmd_verify(const VerifyConfig& cfg, std::ostream& out, std::ostream& log);
int cmd_scaling(const ScalingConfig& cfg, std::ostream& out, std::ostream& log);

// Header lines, exposed for tests.
std::string header(const SimulateConfig& cfg);
std::string header(const BoundsConfig& cfg);
std::string header(const VerifyConfig& cfg);
std::string header(const ScalingConfig& cfg);

}  // namespace pcaq::cli
