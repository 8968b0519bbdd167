#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace docforge {

/// SplitMix64 (Steele, Lea, Flood 2014). Used for seeding and for deriving
/// per-sample seeds; every constant is fixed so streams are platform-stable.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// First SplitMix64 output for `master ^ index`: the seed of sample `index`.
std::uint64_t derive_sample_seed(std::uint64_t master_seed, std::uint64_t index) noexcept;

/// Independent sub-stream of a seed (content sampling, augmentation, ...).
std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// xoshiro256** 1.0 (Blackman, Vigna), state filled by four SplitMix64 draws.
///
/// Every sampling routine in the project draws from this generator through
/// the helpers below; none of them touch <random> distributions, whose
/// outputs differ between standard library implementations.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) noexcept;

  std::uint64_t next() noexcept;
  std::uint64_t operator()() noexcept { return next(); }
  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  /// Uniform integer in [0, bound) by rejection of the biased low range.
  /// bound must be > 0.
  std::uint64_t below(std::uint64_t bound) noexcept;

  /// Uniform integer in [lo, hi] (inclusive).
  std::int64_t between(std::int64_t lo, std::int64_t hi) noexcept;

  /// 53-bit uniform double in [0, 1).
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  bool bernoulli(double p) noexcept { return uniform() < p; }

  /// Standard normal via Box-Muller (one value per call, no caching).
  double normal() noexcept;

  /// Index drawn proportionally to non-negative weights (sum must be > 0).
  std::size_t weighted_index(std::span<const double> weights) noexcept;

  template <typename T>
  void shuffle(std::vector<T>& items) noexcept {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t s_[4];
};

}  // namespace docforge
