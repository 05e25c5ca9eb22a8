#pragma once

// SplitMix64 (Steele, Lea, Flood 2014) with per-stream seeding, plus a
// Box-Muller normal sampler. Both are specified here bit-for-bit so seeded
// runs reproduce across standard libraries, which std::normal_distribution
// does not guarantee.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "rxlink/constants.hpp"

namespace rxlink::numerics {

inline constexpr std::uint64_t kDefaultSeed = 0xC0FFEE;

inline constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  /// Independent stream `stream` of generator `seed`.
  static constexpr SplitMix64 stream(std::uint64_t seed, std::uint64_t stream) {
    return SplitMix64(splitmix64_mix(seed ^ splitmix64_mix(stream + 0x9E3779B97F4A7C15ULL)));
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  constexpr result_type operator()() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return splitmix64_mix(state_);
  }

  /// Uniform on (0, 1), 53-bit resolution, never 0.
  double uniform_open() {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

/// Standard normal deviates via Box-Muller, consuming two uniforms per pair.
class NormalSampler {
 public:
  explicit NormalSampler(SplitMix64 gen) : gen_(gen) {}

  double operator()() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = gen_.uniform_open();
    const double u2 = gen_.uniform_open();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * constants::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  SplitMix64 gen_;
  double spare_ = 0;
  bool has_spare_ = false;
};

/// Seed from RXLINK_SEED when set, otherwise `fallback`. Accepts decimal,
/// 0x-hex or 0-octal; anything else throws std::invalid_argument.
inline std::uint64_t seed_from_environment(std::uint64_t fallback = kDefaultSeed) {
  const char* env = std::getenv("RXLINK_SEED");
  if (env == nullptr || *env == '\0') return fallback;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 0);
  if (end == env || *end != '\0' || *env == '-')
    throw std::invalid_argument(std::string("RXLINK_SEED is not an unsigned integer: ") + env);
  return static_cast<std::uint64_t>(v);
}

}  // namespace rxlink::numerics
