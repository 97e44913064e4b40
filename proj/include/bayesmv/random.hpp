#pragma once

#include <cstdint>
#include <random>

namespace bayesmv {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Independent Gaussian stream for one simulated path.
///
/// The engine seed is a pure function of (seed, path_index), so a path's draws
/// do not depend on how paths are scheduled across threads.
class PathStream {
 public:
  PathStream(std::uint64_t seed, std::uint64_t path_index);

  double normal() { return normal_(engine_); }
  double normal(double mean, double stddev) {
    return mean + stddev * normal_(engine_);
  }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace bayesmv
