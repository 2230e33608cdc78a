#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace cartop {

/// Seeded 64-bit random stream with a fixed, platform-independent output.
///
/// Uses std::mt19937_64 (whose output sequence the standard pins down) and maps
/// the top 53 bits to [0, 1) directly instead of going through
/// std::uniform_real_distribution, whose algorithm is implementation-defined.
class RandomStream {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64/u53/splitmix64-batch";

  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream for shot batch `batch` of a run seeded with `seed`.
  static RandomStream derive(std::uint64_t seed, std::uint64_t batch);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Inverse-CDF sampler over a fixed probability list.
///
/// Draws index k with the smallest cumulative sum exceeding a uniform draw;
/// zero-probability entries are never returned.
class DiscreteSampler {
 public:
  explicit DiscreteSampler(std::span<const double> probabilities);

  std::size_t sample(RandomStream& rng) const;
  std::size_t size() const noexcept { return cumulative_.size(); }

 private:
  std::vector<double> cumulative_;
  std::size_t last_positive_ = 0;
};

}  // namespace cartop
