#include "cartop/random.hpp"

#include <algorithm>
#include <stdexcept>

namespace cartop {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomStream RandomStream::derive(std::uint64_t seed, std::uint64_t batch) {
  return RandomStream(splitmix64(splitmix64(seed) ^ splitmix64(batch + 0x632be59bd9b4e019ULL)));
}

DiscreteSampler::DiscreteSampler(std::span<const double> probabilities) {
  if (probabilities.empty()) throw std::invalid_argument("DiscreteSampler: empty distribution");
  cumulative_.reserve(probabilities.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < probabilities.size(); ++k) {
    const double p = probabilities[k];
    if (!(p >= 0.0)) throw std::invalid_argument("DiscreteSampler: negative probability");
    acc += p;
    cumulative_.push_back(acc);
    if (p > 0.0) last_positive_ = k;
  }
  if (!(acc > 0.0)) throw std::invalid_argument("DiscreteSampler: zero total probability");
}

std::size_t DiscreteSampler::sample(RandomStream& rng) const {
  const double u = rng.uniform();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  // Rounding can leave the final cumulative sum fractionally below 1.
  if (it == cumulative_.end()) return last_positive_;
  return static_cast<std::size_t>(it - cumulative_.begin());
}

}  // namespace cartop
