#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace rnls {

// splitmix64 finalizer (public-domain constants).
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Counter-based stream splitting: stream i of a master seed is
//   splitmix64(splitmix64(master) + (i + 1) * 0x9E3779B97F4A7C15).
// Independent trajectories, runs and bootstrap resamples all draw their
// seeds through this one rule.
inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(splitmix64(master) + (stream + 1) * 0x9E3779B97F4A7C15ULL);
}

// mt19937_64 + Box-Muller. The sequence is fully pinned by the standard's
// engine definition, so identical seeds give identical noise on any platform.
class GaussianRng {
 public:
  explicit GaussianRng(std::uint64_t seed) : eng_(seed) {}

  double uniform() {  // [0, 1)
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace rnls
