#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include "sketchlab/maps.hpp"
#include "sketchlab/matrices.hpp"
#include "sketchlab/rate_distribution.hpp"
#include "sketchlab/sketch.hpp"

namespace sketchlab {

// What the query responder receives each round. The producing system defines
// the word layout; responders are paired with systems by the scenario.
struct Observation {
  std::vector<std::uint64_t> words;
};

class ResponderExhausted : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class QueryResponder {
 public:
  virtual ~QueryResponder() = default;
  virtual int respond(const Observation& obs) = 0;
  // Attack engine notifies on every mask growth; responders that model the
  // mask (all of ours that do are deliberately over-informed) use it.
  virtual void note_mask_size(std::size_t) {}
};

// Family-standard cardinality estimate from a sketch:
//   sample:          |W| * n / k
//   bottom-k:        (k-1) * n / (rank of the k-th member)
//   k-partition:     occupancy (coupon-collector) estimate k*ln(k/(k-b))
//   boolean-linear:  occupancy of set measurement bits inverted against
//                    per-row hit probabilities
double estimate_cardinality(const ComposableMap& map, const Sketch& s);

// Z = 1 iff the family estimate is at least sqrt(A*B).
int standard_threshold_respond(const ComposableMap& map, const Sketch& s,
                               std::int64_t a, std::int64_t b);

class ConstantResponder : public QueryResponder {
 public:
  explicit ConstantResponder(int bit) : bit_(bit) {}
  int respond(const Observation&) override { return bit_; }

 private:
  int bit_;
};

// Answers with the standard estimator of a single composable map; expects the
// observation to carry that map's sketch words.
class StandardThresholdResponder : public QueryResponder {
 public:
  StandardThresholdResponder(const ComposableMap* map, std::int64_t a, std::int64_t b)
      : map_(map), a_(a), b_(b) {}
  int respond(const Observation& obs) override;

 private:
  const ComposableMap* map_;
  std::int64_t a_, b_;
};

enum class WrapperStrategy { kFreshCopyPerQuery, kRandomCopyPerQuery };

// Robust wrapper over c independent copies; each response consults exactly
// one copy's sketch. Observation layout: [c, len_0, words..., len_1, ...].
class RobustWrapperResponder : public QueryResponder {
 public:
  RobustWrapperResponder(std::vector<const ComposableMap*> copies, WrapperStrategy strategy,
                         std::int64_t a, std::int64_t b, RngStream rng);
  int respond(const Observation& obs) override;

  std::size_t copies() const { return copies_.size(); }
  const std::vector<std::uint64_t>& selection_counts() const { return selections_; }

 private:
  std::vector<const ComposableMap*> copies_;
  WrapperStrategy strategy_;
  std::int64_t a_, b_;
  RngStream rng_;
  std::uint64_t next_fresh_ = 0;
  std::vector<std::uint64_t> selections_;
};

// White-box Bayes responder: receives the count statistic w = |U cap (L\M)|
// together with |L\M|, forms the posterior over the rate on a 2^10-knot grid,
// and answers the more likely side of the threshold problem for |U ∪ M|.
class OmniscientBayesResponder : public QueryResponder {
 public:
  OmniscientBayesResponder(const RateDistribution& dist, std::uint32_t n, std::int64_t a,
                           std::int64_t b);

  // observation: [w, pool_remaining, mask_size]
  int respond(const Observation& obs) override;
  int respond_given_count(std::int64_t w, std::int64_t pool_remaining,
                          std::int64_t mask_size) const;
  void note_mask_size(std::size_t m) override { mask_size_ = static_cast<std::int64_t>(m); }

  static constexpr int kPosteriorKnots = 1 << 10;

 protected:
  std::int64_t mask_size_ = 0;

 private:
  std::uint32_t n_;
  std::int64_t a_, b_;
  std::vector<double> grid_q_;
  std::vector<double> grid_weight_;
};

// Bayes decision restricted to a rotated-sketch statistic that carries no
// usable rate signal (a residual-dimension bit); equivalent to answering the
// prior-favored side given the current mask size.
class SpanStatisticBayesResponder : public OmniscientBayesResponder {
 public:
  using OmniscientBayesResponder::OmniscientBayesResponder;
  int respond(const Observation&) override {
    return respond_given_count(0, 0, mask_size_);
  }
};

using StatisticExtractor = std::function<Observation(const Observation&)>;

// Structural naturalness: the base responder can only see the extracted
// statistic, never the raw sketch words.
class NaturalResponder : public QueryResponder {
 public:
  NaturalResponder(std::unique_ptr<QueryResponder> base, StatisticExtractor extractor)
      : base_(std::move(base)), extractor_(std::move(extractor)) {}

  int respond(const Observation& obs) override { return base_->respond(extractor_(obs)); }
  void note_mask_size(std::size_t m) override { base_->note_mask_size(m); }

 private:
  std::unique_ptr<QueryResponder> base_;
  StatisticExtractor extractor_;
};

// Replays a recorded Z sequence; used for log-replay consistency checks.
class ReplayResponder : public QueryResponder {
 public:
  explicit ReplayResponder(std::vector<std::uint8_t> zs) : zs_(std::move(zs)) {}
  int respond(const Observation&) override {
    if (pos_ >= zs_.size()) throw ResponderExhausted("replay past end of log");
    return zs_[pos_++];
  }

 private:
  std::vector<std::uint8_t> zs_;
  std::size_t pos_ = 0;
};

}  // namespace sketchlab
