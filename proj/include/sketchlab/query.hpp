#pragma once

#include <utility>
#include <vector>

#include "sketchlab/keyset.hpp"
#include "sketchlab/rate_distribution.hpp"
#include "sketchlab/rng.hpp"

namespace sketchlab {

// Bern[q]^U: include each of 0..n-1 independently with probability q.
inline KeySet sample_bernoulli_subset(std::uint32_t n, double q, RngStream& rng) {
  std::vector<Key> out;
  if (q > 0.0) {
    out.reserve(static_cast<std::size_t>(q * n * 1.25) + 16);
    for (std::uint32_t i = 0; i < n; ++i) {
      if (rng.unit() < q) out.push_back(i);
    }
  }
  return KeySet(std::move(out));
}

// Query distribution: q ~ nu, then U ~ Bern[q]^U.
inline std::pair<double, KeySet> sample_query(const RateDistribution& dist,
                                              std::uint32_t n, RngStream& rng) {
  const double q = dist.sample(rng);
  return {q, sample_bernoulli_subset(n, q, rng)};
}

}  // namespace sketchlab
