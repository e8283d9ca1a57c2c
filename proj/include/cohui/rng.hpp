#pragma once

#include <cstdint>
#include <limits>

namespace cohui {

/// Stream tags keep draws for different purposes in the same shot independent.
enum class Stream : std::uint64_t {
  kClicks = 0,
  kPriors = 1,
  kHaar = 2,
  kOutcome = 3,
  kParams = 4,
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/**
 * Counter-based generator: the i-th draw of stream (seed, tag, index) is a
 * pure function of those four integers, so shots can be evaluated in any
 * order or in parallel and still reproduce bit for bit.
 *
 * Satisfies UniformRandomBitGenerator.
 */
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, Stream tag, std::uint64_t index)
      : key_(mix64(seed ^ mix64(index ^ mix64(static_cast<std::uint64_t>(tag) + 0x632BE59BD9B4E019ULL)))) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix64(key_ + 0x9E3779B97F4A7C15ULL * ++counter_); }

  /// Uniform on the open interval (0, 1) with 53-bit resolution.
  double uniform_open();

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace cohui
