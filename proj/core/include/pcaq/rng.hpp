#pragma once

#include <cstdint>
#include <boost/random/mersenne_twister.hpp>

#include "pcaq/common.hpp"

namespace pcaq {

// splitmix64 finalizer; used to turn user seeds into well-mixed engine seeds
// and to derive independent child streams.
std::uint64_t splitmix64(std::uint64_t x);

// Child seed for stream `stream` of parent seed `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// Per-trial seed: seed XOR trial index. The engine seeding step mixes the
// result, so neighbouring trials get unrelated streams.
inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) { return seed ^ trial; }

// 64-bit Mersenne twister (boost's, same stream as std::mt19937_64) seeded
// through splitmix64, with a ziggurat normal sampler. Not thread safe; give
// every trial its own instance.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next_u64() { return engine_(); }
  double uniform();  // [0,1)
  double normal();   // N(0,1)
  void fill_normal(double* out, std::size_t n);
  Vec normal_vector(Eigen::Index n);

  // Seed for a child stream; does not advance this generator.
  std::uint64_t child_seed(std::uint64_t stream) const { return derive_seed(seed_, stream); }

 private:
  std::uint64_t seed_;
  boost::random::mt19937_64 engine_;
};

}  // namespace pcaq
