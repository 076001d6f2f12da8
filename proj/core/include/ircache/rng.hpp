#pragma once

#include <cstdint>
#include <optional>

namespace ircache {

/// Counter-based SplitMix64 generator.
///
/// Draw i of a stream with key K is mix64(K + (i + 1) * 0x9E3779B97F4A7C15),
/// where mix64 is the SplitMix64 finalizer. The key is derived from the seed,
/// and substream(tag) derives an independent key from (key, tag), so each
/// experimental round can own a stream keyed by (seed, round) without
/// consuming draws from its parent. Integer output is bit-identical on every
/// platform; normal() goes through libm.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept;

  std::uint64_t next_u64() noexcept;
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform integer in [0, bound); bound must be positive.
  std::uint64_t uniform_below(std::uint64_t bound) noexcept;
  /// Standard normal via Box-Muller.
  double normal() noexcept;

  /// Independent stream for `tag`. Does not advance this generator.
  Rng substream(std::uint64_t tag) const noexcept;

  std::uint64_t key() const noexcept { return key_; }

  static std::uint64_t mix64(std::uint64_t z) noexcept;

 private:
  struct FromKey {};
  Rng(FromKey, std::uint64_t key) noexcept : key_(key) {}

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::optional<double> spare_normal_;
};

}  // namespace ircache
