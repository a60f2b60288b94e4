#include "pcaq/rng.hpp"

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <cmath>

namespace pcaq {

void require_unit(const Vec& v, const char* what, double tol) {
  if (!v.allFinite()) throw std::invalid_argument(std::string(what) + ": non-finite entries");
  const double n = v.norm();
  if (std::abs(n - 1.0) > tol)
    throw std::invalid_argument(std::string(what) + ": expected a unit vector, got norm " +
                                std::to_string(n));
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

double Rng::uniform() {
  // 53 random mantissa bits.
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  // boost's normal_distribution is a ziggurat sampler and carries no state
  // between calls, so a temporary per call is fine.
  boost::random::normal_distribution<double> dist;
  return dist(engine_);
}

void Rng::fill_normal(double* out, std::size_t n) {
  boost::random::normal_distribution<double> dist;
  for (std::size_t i = 0; i < n; ++i) out[i] = dist(engine_);
}

Vec Rng::normal_vector(Eigen::Index n) {
  Vec v(n);
  fill_normal(v.data(), static_cast<std::size_t>(n));
  return v;
}

}  // namespace pcaq
