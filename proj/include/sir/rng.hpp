#ifndef SIR_RNG_HPP
#define SIR_RNG_HPP

#include <cmath>
#include <cstdint>

namespace sir {

// Counter-based random numbers built on splitmix64. Every draw is addressed
// by (seed, counter), so generation is order-free: parallel fills produce the
// same values regardless of scheduling, and re-runs are bit-identical on any
// platform (no std::*_distribution, whose output is implementation-defined).
//
// Algorithm name used in config echoes: "splitmix64-boxmuller".

inline constexpr const char* kRngAlgorithm = "splitmix64-boxmuller";

inline constexpr std::uint64_t kSplitmixGamma = 0x9E3779B97F4A7C15ull;

inline std::uint64_t splitmix64_finalize(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

// Output `counter` of the splitmix64 stream seeded at `seed`.
inline std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t counter) {
  return splitmix64_finalize(seed + (counter + 1) * kSplitmixGamma);
}

// Substream/replicate seed derivation: finalize(seed XOR index).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64_finalize(seed ^ index);
}

// Uniform in [0, 1), 53-bit mantissa.
inline double uniform_at(std::uint64_t seed, std::uint64_t counter) {
  return static_cast<double>(splitmix64_at(seed, counter) >> 11) * 0x1.0p-53;
}

// Uniform in (0, 1]; safe as a log() argument.
inline double uniform_open_at(std::uint64_t seed, std::uint64_t counter) {
  return static_cast<double>((splitmix64_at(seed, counter) >> 11) + 1) * 0x1.0p-53;
}

// Standard normal via Box-Muller (cosine branch), two uniforms per draw.
inline double normal_at(std::uint64_t seed, std::uint64_t counter) {
  const double u1 = uniform_open_at(seed, 2 * counter);
  const double u2 = uniform_at(seed, 2 * counter + 1);
  constexpr double two_pi = 6.283185307179586476925286766559;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

// Sequential convenience wrapper over the same stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64() { return splitmix64_at(seed_, counter_++); }
  double uniform() { return uniform_at(seed_, counter_++); }
  double normal() { return normal_at(seed_, counter_++); }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace sir

#endif  // SIR_RNG_HPP
