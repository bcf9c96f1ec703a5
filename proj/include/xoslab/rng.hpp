#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace xoslab {

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers:
/// as easy as 1, 2, 3"). Exposed for known-answer testing.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// SplitMix64 finalizer, used to derive child stream ids.
std::uint64_t splitmix64(std::uint64_t x);

/// Counter-based random stream.
///
/// The 64-bit seed is the Philox key; the 128-bit counter is
/// (block index, stream id). Two streams with the same seed and different
/// stream ids never share a counter value, so they are independent for all
/// practical purposes, and a stream can be recreated at any time from
/// (seed, stream id) alone.
///
/// Satisfies std::uniform_random_bit_generator, but callers in this project
/// use uniform_below()/uniform01() so results do not depend on the standard
/// library's distribution implementations.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform integer in [0, bound); bound must be positive. Exact (rejection).
  std::uint64_t uniform_below(std::uint64_t bound);

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01();

  /// Deterministically derived independent stream, e.g. one per trial.
  RngStream substream(std::uint64_t index) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  unsigned buffered_ = 0;
};

}  // namespace xoslab
