#include "sketchlab/responders.hpp"

#include <cmath>

namespace sketchlab {

namespace {

Sketch narrow_words(const std::uint64_t* begin, std::size_t count) {
  Sketch s;
  s.words.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    s.words.push_back(static_cast<std::uint32_t>(begin[i]));
  }
  return s;
}

double boolean_occupancy_estimate(const BooleanLinearSketchMap& map, std::uint32_t bits) {
  const std::uint32_t n = map.ground_size();
  const int k = map.rank_bound();
  std::vector<double> row_density(k, 0.0);
  for (Key x = 0; x < n; ++x) {
    std::uint32_t c = map.column(x);
    for (int r = 0; r < k; ++r) {
      if (c & (1u << r)) row_density[r] += 1.0;
    }
  }
  const int occupied = __builtin_popcount(bits);
  if (occupied == 0) return 0.0;
  auto expected = [&](double m) {
    double e = 0.0;
    for (int r = 0; r < k; ++r) {
      e += 1.0 - std::pow(1.0 - row_density[r] / n, m);
    }
    return e;
  };
  if (expected(n) <= occupied) return n;
  double lo = 0.0, hi = n;
  for (int it = 0; it < 60; ++it) {
    double mid = 0.5 * (lo + hi);
    (expected(mid) < occupied ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double estimate_cardinality(const ComposableMap& map, const Sketch& s) {
  const double n = map.ground_size();
  if (auto* sample = dynamic_cast<const SampleSketchMap*>(&map)) {
    return static_cast<double>(s.words.size()) * n / sample->rank_bound();
  }
  if (auto* bk = dynamic_cast<const BottomKSketchMap*>(&map)) {
    const int k = bk->k();
    if (s.words.empty()) return 0.0;
    if (static_cast<int>(s.words.size()) < k) return static_cast<double>(s.words.size());
    // payload is in rank order; the last member carries the k-th smallest rank
    const double rank_k = static_cast<double>(bk->rank(s.words.back())) + 1.0;
    return (k - 1) * n / rank_k;
  }
  if (auto* kp = dynamic_cast<const KPartitionSketchMap*>(&map)) {
    const int k = kp->rank_bound();
    int occupied = 0;
    for (std::uint32_t w : s.words) occupied += (w != 0xffffffffu);
    if (occupied == 0) return 0.0;
    if (occupied == k) return n;  // linear counting saturates
    return k * std::log(static_cast<double>(k) / (k - occupied));
  }
  if (auto* bl = dynamic_cast<const BooleanLinearSketchMap*>(&map)) {
    return boolean_occupancy_estimate(*bl, s.words[0]);
  }
  throw std::invalid_argument("no standard estimator for family " + map.family());
}

int standard_threshold_respond(const ComposableMap& map, const Sketch& s, std::int64_t a,
                               std::int64_t b) {
  const double threshold = std::sqrt(static_cast<double>(a) * static_cast<double>(b));
  return estimate_cardinality(map, s) >= threshold ? 1 : 0;
}

int StandardThresholdResponder::respond(const Observation& obs) {
  Sketch s = narrow_words(obs.words.data(), obs.words.size());
  return standard_threshold_respond(*map_, s, a_, b_);
}

RobustWrapperResponder::RobustWrapperResponder(std::vector<const ComposableMap*> copies,
                                               WrapperStrategy strategy, std::int64_t a,
                                               std::int64_t b, RngStream rng)
    : copies_(std::move(copies)),
      strategy_(strategy),
      a_(a),
      b_(b),
      rng_(rng),
      selections_(copies_.size(), 0) {
  if (copies_.empty()) throw std::invalid_argument("wrapper needs at least one copy");
}

int RobustWrapperResponder::respond(const Observation& obs) {
  std::size_t pick;
  if (strategy_ == WrapperStrategy::kFreshCopyPerQuery) {
    if (next_fresh_ >= copies_.size()) {
      throw ResponderExhausted("fresh-copy wrapper used all copies");
    }
    pick = next_fresh_++;
  } else {
    pick = rng_.below(copies_.size());
  }
  ++selections_[pick];

  const std::uint64_t count = obs.words.at(0);
  if (count != copies_.size()) throw std::invalid_argument("copy count mismatch");
  std::size_t pos = 1;
  for (std::size_t j = 0; j < count; ++j) {
    const std::uint64_t len = obs.words.at(pos++);
    if (j == pick) {
      Sketch s = narrow_words(obs.words.data() + pos, len);
      return standard_threshold_respond(*copies_[pick], s, a_, b_);
    }
    pos += len;
  }
  throw std::logic_error("unreachable: copy index out of range");
}

OmniscientBayesResponder::OmniscientBayesResponder(const RateDistribution& dist,
                                                   std::uint32_t n, std::int64_t a,
                                                   std::int64_t b)
    : n_(n), a_(a), b_(b) {
  grid_q_.resize(kPosteriorKnots);
  grid_weight_.resize(kPosteriorKnots);
  const double lo = dist.qmin(), hi = dist.qmax();
  const double step = (hi - lo) / kPosteriorKnots;
  for (int i = 0; i < kPosteriorKnots; ++i) {
    const double q = lo + (i + 0.5) * step;
    grid_q_[i] = q;
    grid_weight_[i] = dist.density(q) * step;
  }
}

int OmniscientBayesResponder::respond(const Observation& obs) {
  return respond_given_count(static_cast<std::int64_t>(obs.words.at(0)),
                             static_cast<std::int64_t>(obs.words.at(1)),
                             static_cast<std::int64_t>(obs.words.at(2)));
}

int OmniscientBayesResponder::respond_given_count(std::int64_t w, std::int64_t pool_remaining,
                                                  std::int64_t mask_size) const {
  // posterior over q from the binomial likelihood of w out of pool_remaining,
  // then posterior-predictive tails for |U ∪ M| via a normal approximation
  const std::int64_t rest = static_cast<std::int64_t>(n_) - mask_size - pool_remaining;
  double p_low = 0.0, p_high = 0.0, total = 0.0;
  double max_loglik = -1e300;
  std::vector<double> loglik(grid_q_.size());
  for (std::size_t i = 0; i < grid_q_.size(); ++i) {
    const double q = grid_q_[i];
    double ll = 0.0;
    if (pool_remaining > 0) {
      ll = w * std::log(q) + (pool_remaining - w) * std::log1p(-q);
    }
    loglik[i] = ll;
    if (ll > max_loglik) max_loglik = ll;
  }
  for (std::size_t i = 0; i < grid_q_.size(); ++i) {
    const double q = grid_q_[i];
    const double weight = grid_weight_[i] * std::exp(loglik[i] - max_loglik);
    if (weight <= 0.0) continue;
    const double mu = mask_size + w + q * rest;
    const double sigma = std::sqrt(std::max(1.0, q * (1.0 - q) * rest));
    const double z_low = (static_cast<double>(a_) + 0.5 - mu) / sigma;
    const double z_high = (static_cast<double>(b_) - 0.5 - mu) / sigma;
    p_low += weight * 0.5 * std::erfc(-z_low / std::sqrt(2.0));
    p_high += weight * 0.5 * std::erfc(z_high / std::sqrt(2.0));
    total += weight;
  }
  if (total <= 0.0) return 0;
  return p_high >= p_low ? 1 : 0;
}

}  // namespace sketchlab
