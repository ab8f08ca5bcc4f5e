#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace flatten {

// Finalizer with full avalanche (SplitMix64's mixing function).
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic seed for one (run, purpose, arm) stream of a master seed.
// Every source of randomness in an experiment draws from its own stream so
// that results do not depend on scheduling or degree of parallelism.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t run,
                                 std::uint64_t purpose, std::uint64_t arm = 0) {
  std::uint64_t s = mix64(master + 0x9e3779b97f4a7c15ULL);
  s = mix64(s ^ (run + 0x9e3779b97f4a7c15ULL));
  s = mix64(s ^ (purpose + 0xbf58476d1ce4e5b9ULL));
  s = mix64(s ^ (arm + 0x94d049bb133111ebULL));
  return s;
}

// Stream purposes used by the experiment harness.
enum class StreamPurpose : std::uint64_t {
  network = 1,
  init = 2,
  simulation = 3,
  delay = 4,
  noise = 5,
};

// mt19937_64 engine (bit-exact per the standard) with hand-rolled variate
// transforms, so draws are identical across platforms and library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t bits() { return eng_(); }

  // Uniform on (0, 1]; zero excluded so logs stay finite.
  double u01() { return static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53; }

  // Uniform on [0, 1).
  double u01_left() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double exponential(double rate) { return -std::log(u01()) / rate; }

  // Box-Muller; consumes exactly two draws per call.
  double normal(double mean, double sd) {
    const double r = std::sqrt(-2.0 * std::log(u01()));
    const double theta = 6.283185307179586476925287 * u01_left();
    return mean + sd * r * std::cos(theta);
  }

  // Unbiased uniform integer in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
      const std::uint64_t r = eng_();
      if (r >= threshold) return r % n;
    }
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace flatten
