#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "sketchlab/aux_values.hpp"
#include "sketchlab/linear_maps.hpp"
#include "sketchlab/maps.hpp"
#include "sketchlab/query.hpp"
#include "sketchlab/responders.hpp"

namespace sketchlab {

// The system side of the interaction: computes the observation handed to the
// QR for the query V = mask ∪ u_minus_m, and a canonical grouping key for
// the adversarial-distribution certificate.
class AttackSystem {
 public:
  virtual ~AttackSystem() = default;
  virtual std::uint32_t ground_size() const = 0;
  virtual Observation observe(const KeySet& mask, const KeySet& u_minus_m, double q,
                              RngStream& rng) = 0;
  virtual std::vector<std::uint64_t> group_key(const KeySet& v, RngStream& rng) = 0;
};

// Single composable map; the observation is the sketch of V.
class ComposableSystem : public AttackSystem {
 public:
  explicit ComposableSystem(const ComposableMap* map) : map_(map) {}
  std::uint32_t ground_size() const override { return map_->ground_size(); }
  Observation observe(const KeySet& mask, const KeySet& u_minus_m, double, RngStream&) override;
  std::vector<std::uint64_t> group_key(const KeySet& v, RngStream&) override;

 private:
  const ComposableMap* map_;
};

// Super sketch of c independent copies; layout [c, len_0, words..., ...].
class MultiCopySystem : public AttackSystem {
 public:
  explicit MultiCopySystem(std::vector<const ComposableMap*> copies) : copies_(std::move(copies)) {}
  std::uint32_t ground_size() const override { return copies_.at(0)->ground_size(); }
  Observation observe(const KeySet& mask, const KeySet& u_minus_m, double, RngStream&) override;
  std::vector<std::uint64_t> group_key(const KeySet& v, RngStream&) override;

 private:
  std::vector<const ComposableMap*> copies_;
};

// Diagnostic white-box system: emits [|U cap (L\M)|, |L\M|, |M|] for the
// omniscient count responder.
class PoolCountSystem : public AttackSystem {
 public:
  PoolCountSystem(std::uint32_t n, KeySet pool) : n_(n), pool_(std::move(pool)) {}
  std::uint32_t ground_size() const override { return n_; }
  Observation observe(const KeySet& mask, const KeySet& u_minus_m, double, RngStream&) override;
  std::vector<std::uint64_t> group_key(const KeySet& v, RngStream&) override;

 private:
  std::uint32_t n_;
  KeySet pool_;
};

// Linear sketch over F_p with uniform auxiliary values; the observation is
// the exact measurement vector A*v.
class FpLinearSystem : public AttackSystem {
 public:
  explicit FpLinearSystem(const PrimeFieldMatrix* a);
  std::uint32_t ground_size() const override { return a_->n(); }
  Observation observe(const KeySet& mask, const KeySet& u_minus_m, double, RngStream& rng) override;
  std::vector<std::uint64_t> group_key(const KeySet& v, RngStream&) override;

 private:
  const PrimeFieldMatrix* a_;
  std::unique_ptr<ComposableMap> span_map_;
};

// Real-valued sketch with the subsampled small-magnitude scheme. The
// observation is the sketch-recoverable statistic [residual_dims, |M|]:
// the number of sketch dimensions not explained by the large keys' span.
class RealSmallSystem : public AttackSystem {
 public:
  RealSmallSystem(const RealMatrix* a, RealAuxParams params);
  std::uint32_t ground_size() const override { return a_->n(); }
  Observation observe(const KeySet& mask, const KeySet& u_minus_m, double q,
                      RngStream& rng) override;
  std::vector<std::uint64_t> group_key(const KeySet& v, RngStream&) override;

  double max_observed_log_ratio() const { return max_log_ratio_; }
  // Exact count of unit-valued support entries in the last query vector.
  std::uint64_t last_unit_count() const { return last_unit_count_; }

 private:
  const RealMatrix* a_;
  RealAuxParams params_;
  std::unique_ptr<ComposableMap> span_map_;
  std::vector<ColVec<RationalField>> cols_;
  double max_log_ratio_ = 0.0;
  std::uint64_t last_unit_count_ = 0;
};

struct AttackConfig {
  std::uint32_t n;
  ThresholdPair thresholds;      // accounting thresholds for |U ∪ M|
  RateDistribution rates;
  std::int64_t pool_bound;       // attacker's assumed |L| upper bound
  std::uint64_t rounds;
  double promotion_slack = 16.0;
  double min_separation = 0.02;

  AttackConfig(std::uint32_t n_, ThresholdPair t, RateDistribution r, std::int64_t pool_bound_,
               std::uint64_t rounds_);
};

struct RoundLogEntry {
  std::uint64_t t;
  double q;
  std::uint32_t set_size;   // |U ∪ M|
  std::uint32_t mask_size;  // |M| when the query was issued
  std::uint8_t z;
  std::uint8_t err;
};

struct AttackState {
  KeySet mask;
  std::vector<std::uint32_t> counters;
  std::uint64_t rounds = 0;
  std::uint64_t errors = 0;
  std::vector<RoundLogEntry> log;

  double error_fraction() const {
    return rounds ? static_cast<double>(errors) / rounds : 0.0;
  }
};

// Lower median (index floor((m-1)/2) of the sorted multiset) of the counters
// of keys outside the mask, then the slack test for key x.
bool promotion_check(const std::vector<std::uint32_t>& counters, const KeySet& mask,
                     std::uint64_t r, std::uint32_t n, Key x, double slack = 16.0);

AttackState run_attack(const AttackConfig& config, AttackSystem& system,
                       QueryResponder& responder, RngStream rng, bool keep_log = true);

// Non-adaptive control: same queries, no mask and no scoring.
AttackState run_baseline(const AttackConfig& config, AttackSystem& system,
                         QueryResponder& responder, RngStream rng, bool keep_log = true);

// Certified lower bound on the error rate of any estimator against the
// distribution (Q ∪ mask): draws are grouped by the system's canonical
// sketch key and the best fixed response per group errs min(#low, #high).
double certify_adversarial(AttackSystem& system, const KeySet& mask,
                           const RateDistribution& dist, const ThresholdPair& thresholds,
                           int trials, RngStream rng);

struct ScoreAdvantageEstimate {
  double p_bar_pool;  // mean score probability over L' = L \ M
  double p_bar_se;
  double p_star;      // transparent-key score probability
  double p_star_se;
  double eta;         // failure rate of the snapshot estimator
  double eta_se;
};

// Monte-Carlo estimates of the per-round score probabilities for pool vs
// transparent keys, against a fixed responder snapshot.
ScoreAdvantageEstimate score_advantage_probe(AttackSystem& system, QueryResponder& phi,
                                             const KeySet& mask, const KeySet& pool_truth,
                                             const RateDistribution& dist,
                                             const ThresholdPair& thresholds, int trials,
                                             RngStream rng);

}  // namespace sketchlab
