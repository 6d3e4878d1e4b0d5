#pragma once

#include <cstdint>

namespace awlab {

/// SplitMix64 finalizer. Used as a keyed hash for counter-based draws.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Hash of (seed, a, b); the result depends only on the arguments, never on
/// call order, which is what makes per-edge and per-trial draws reproducible.
constexpr std::uint64_t keyed_hash(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) noexcept {
  return mix64(mix64(mix64(seed) ^ a) ^ b);
}

/// Maps 64 random bits to [0, 1) with 53-bit resolution.
constexpr double to_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Independent random substream number `stream` of a seeded experiment:
/// SplitMix64 started from a hash of (seed, stream). Seeding is free and the
/// output depends only on (seed, stream), so per-trial streams are identical
/// across platforms and thread schedules.
class Stream {
 public:
  using result_type = std::uint64_t;

  Stream(std::uint64_t seed, std::uint64_t stream) : state_(keyed_hash(seed, stream, 0x5eedULL)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }
  result_type operator()() noexcept { return bits(); }

  std::uint64_t bits() noexcept {
    // mix64 adds the golden-ratio increment before finalizing
    const std::uint64_t out = mix64(state_);
    state_ += 0x9e3779b97f4a7c15ULL;
    return out;
  }
  double uniform() noexcept { return to_unit(bits()); }
  /// Uniform on (0, 1].
  double uniform_open0() noexcept { return 1.0 - uniform(); }
  std::uint64_t below(std::uint64_t n) noexcept { return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)); }

 private:
  std::uint64_t state_;
};

}  // namespace awlab
