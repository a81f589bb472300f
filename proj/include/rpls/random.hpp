#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace rpls {

/// Counter-based SplitMix64 stream.
///
/// The i-th output (i = 1, 2, ...) of stream `s` under seed `seed` is
///   mix(key + i * 0x9E3779B97F4A7C15),  key = mix(seed + mix(s)),
/// where mix is the SplitMix64 finalizer. Every draw is a pure function of
/// (seed, stream, counter), so any language can reproduce it bit for bit.
class CounterRng {
public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal via the cosine branch of Box-Muller (two draws each).
  double normal();
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  /// In-place Fisher-Yates shuffle, last index first.
  void shuffle(std::span<std::size_t> values);

  std::uint64_t counter() const noexcept { return counter_; }

  static std::uint64_t mix(std::uint64_t z) noexcept;

private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// The first `count` entries of a seeded shuffle of 0..n-1.
std::vector<std::size_t> sample_without_replacement(CounterRng &rng,
                                                    std::size_t n,
                                                    std::size_t count);

} // namespace rpls
