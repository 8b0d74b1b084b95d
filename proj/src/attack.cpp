#include "sketchlab/attack.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace sketchlab {

namespace {

void widen_into(const Sketch& s, std::vector<std::uint64_t>& out) {
  for (std::uint32_t w : s.words) out.push_back(w);
}

std::uint64_t fnv1a(const std::vector<std::uint64_t>& words) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint64_t w : words) {
    for (int b = 0; b < 8; ++b) {
      h ^= (w >> (8 * b)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

}  // namespace

Observation ComposableSystem::observe(const KeySet& mask, const KeySet& u_minus_m, double,
                                      RngStream&) {
  Observation obs;
  widen_into(map_->sketch(mask.set_union(u_minus_m)), obs.words);
  return obs;
}

std::vector<std::uint64_t> ComposableSystem::group_key(const KeySet& v, RngStream&) {
  std::vector<std::uint64_t> words;
  widen_into(map_->sketch(v), words);
  return words;
}

Observation MultiCopySystem::observe(const KeySet& mask, const KeySet& u_minus_m, double,
                                     RngStream&) {
  const KeySet v = mask.set_union(u_minus_m);
  Observation obs;
  obs.words.push_back(copies_.size());
  for (const ComposableMap* copy : copies_) {
    Sketch s = copy->sketch(v);
    obs.words.push_back(s.words.size());
    widen_into(s, obs.words);
  }
  return obs;
}

std::vector<std::uint64_t> MultiCopySystem::group_key(const KeySet& v, RngStream&) {
  std::vector<std::uint64_t> words;
  words.push_back(copies_.size());
  for (const ComposableMap* copy : copies_) {
    Sketch s = copy->sketch(v);
    words.push_back(s.words.size());
    widen_into(s, words);
  }
  return words;
}

Observation PoolCountSystem::observe(const KeySet& mask, const KeySet& u_minus_m, double,
                                     RngStream&) {
  const KeySet pool_rest = pool_.set_minus(mask);
  const KeySet w = u_minus_m.set_intersect(pool_rest);
  return Observation{{w.size(), pool_rest.size(), mask.size()}};
}

std::vector<std::uint64_t> PoolCountSystem::group_key(const KeySet& v, RngStream&) {
  return {v.set_intersect(pool_).size()};
}

FpLinearSystem::FpLinearSystem(const PrimeFieldMatrix* a)
    : a_(a), span_map_(make_span_map(*a)) {}

Observation FpLinearSystem::observe(const KeySet& mask, const KeySet& u_minus_m, double,
                                    RngStream& rng) {
  FpQueryVector v = aux_fp(mask, u_minus_m, a_->p(), rng);
  Observation obs;
  obs.words = sketch_vector(*a_, v);
  return obs;
}

std::vector<std::uint64_t> FpLinearSystem::group_key(const KeySet& v, RngStream&) {
  std::vector<std::uint64_t> words;
  widen_into(span_map_->sketch(v), words);
  return words;
}

RealSmallSystem::RealSmallSystem(const RealMatrix* a, RealAuxParams params)
    : a_(a), params_(std::move(params)), span_map_(make_span_map(*a)) {
  cols_.resize(a_->n());
  for (std::uint32_t i = 0; i < a_->n(); ++i) cols_[i] = a_->column(i);
}

Observation RealSmallSystem::observe(const KeySet& mask, const KeySet& u_minus_m, double q,
                                     RngStream& rng) {
  const KeySet u = u_minus_m;  // engine passes U \ M; the mask rejoins below
  auto [vec, h] = aux_real_small(mask, u, q, params_, rng);
  max_log_ratio_ = std::max(max_log_ratio_, log_magnitude_ratio(vec, params_.beta));

  std::vector<BigRational> sketch = sketch_vector(*a_, vec, params_.beta);

  const KeySet large = h.set_union(mask);
  last_unit_count_ = vec.support.size() - large.set_intersect(vec.support).size();

  // residual dimensions of the sketch beyond the span of the large keys'
  // columns: the only sketch component the small keys can reach
  RationalField f;
  SpanBuilder<RationalField> span(f, a_->k());
  for (Key x : large.members()) {
    span.add(cols_[x]);
    if (span.rank() == a_->k()) break;
  }
  std::uint64_t residual_dims = 0;
  if (span.rank() < a_->k()) {
    ColVec<RationalField> r = span.reduce(sketch);
    for (const auto& e : r) {
      if (e != 0) {
        residual_dims = 1;
        break;
      }
    }
  }
  return Observation{{residual_dims, mask.size()}};
}

std::vector<std::uint64_t> RealSmallSystem::group_key(const KeySet& v, RngStream&) {
  std::vector<std::uint64_t> words;
  widen_into(span_map_->sketch(v), words);
  return words;
}

AttackConfig::AttackConfig(std::uint32_t n_, ThresholdPair t, RateDistribution r,
                           std::int64_t pool_bound_, std::uint64_t rounds_)
    : n(n_), thresholds(t), rates(std::move(r)), pool_bound(pool_bound_), rounds(rounds_) {
  std::string diag;
  if (!validate_rate_breakpoints(thresholds, pool_bound, n, rates.qmin(), rates.q1(),
                                 rates.q2(), rates.qmax(), min_separation, &diag)) {
    throw std::invalid_argument("rate breakpoints invalid: " + diag);
  }
  if (rounds < 1) throw std::invalid_argument("need at least one round");
}

bool promotion_check(const std::vector<std::uint32_t>& counters, const KeySet& mask,
                     std::uint64_t r, std::uint32_t n, Key x, double slack) {
  if (mask.contains(x)) return false;
  std::vector<std::uint32_t> unmasked;
  unmasked.reserve(counters.size());
  for (Key i = 0; i < counters.size(); ++i) {
    if (!mask.contains(i)) unmasked.push_back(counters[i]);
  }
  if (unmasked.empty()) return false;
  const std::size_t idx = (unmasked.size() - 1) / 2;
  std::nth_element(unmasked.begin(), unmasked.begin() + idx, unmasked.end());
  const double median = unmasked[idx];
  const double threshold =
      median + slack * std::sqrt(static_cast<double>(r) *
                                 std::log(static_cast<double>(r) * static_cast<double>(n)));
  return counters[x] >= threshold;
}

namespace {

// Lower median over unmasked counters; exact recompute.
std::uint32_t lower_median_unmasked(const std::vector<std::uint32_t>& counters,
                                    const std::vector<std::uint8_t>& masked,
                                    std::vector<std::uint32_t>& scratch) {
  scratch.clear();
  for (std::size_t i = 0; i < counters.size(); ++i) {
    if (!masked[i]) scratch.push_back(counters[i]);
  }
  const std::size_t idx = (scratch.size() - 1) / 2;
  std::nth_element(scratch.begin(), scratch.begin() + idx, scratch.end());
  return scratch[idx];
}

AttackState run_loop(const AttackConfig& config, AttackSystem& system,
                     QueryResponder& responder, RngStream rng, bool keep_log, bool adaptive) {
  const std::uint32_t n = config.n;
  if (system.ground_size() != n) throw std::invalid_argument("system/config ground mismatch");

  AttackState state;
  state.counters.assign(n, 0);
  std::vector<std::uint8_t> masked(n, 0);
  std::vector<Key> u_buffer;
  u_buffer.reserve(n);
  std::vector<std::uint32_t> median_scratch;
  median_scratch.reserve(n);

  const double slack_term =
      config.promotion_slack * std::sqrt(static_cast<double>(config.rounds) *
                                         std::log(static_cast<double>(config.rounds) *
                                                  static_cast<double>(n)));
  // cached lower median: monotone while the mask is unchanged
  std::uint32_t cached_median = 0;
  bool median_valid = false;
  std::uint32_t max_unmasked_counter = 0;
  if (keep_log) state.log.reserve(config.rounds);

  for (std::uint64_t t = 1; t <= config.rounds; ++t) {
    const double q = config.rates.sample(rng);
    u_buffer.clear();
    for (std::uint32_t i = 0; i < n; ++i) {
      if (rng.unit() < q) u_buffer.push_back(i);
    }
    // U \ M
    std::vector<Key> u_minus_m;
    u_minus_m.reserve(u_buffer.size());
    for (Key x : u_buffer) {
      if (!masked[x]) u_minus_m.push_back(x);
    }
    const KeySet u_minus_m_set = KeySet(std::vector<Key>(u_minus_m));
    const std::uint32_t mask_size_at_query = static_cast<std::uint32_t>(state.mask.size());
    const std::uint32_t v_size = mask_size_at_query + static_cast<std::uint32_t>(u_minus_m.size());

    Observation obs = system.observe(state.mask, u_minus_m_set, q, rng);
    const int z = responder.respond(obs);

    if (adaptive && z == 1) {
      for (Key x : u_minus_m) {
        std::uint32_t c = ++state.counters[x];
        if (c > max_unmasked_counter) max_unmasked_counter = c;
      }
      // promotion pass over this round's scored keys
      if (!median_valid ||
          static_cast<double>(max_unmasked_counter) >=
              static_cast<double>(cached_median) + slack_term) {
        cached_median = lower_median_unmasked(state.counters, masked, median_scratch);
        median_valid = true;
        bool promoted = false;
        for (Key x : u_minus_m) {
          if (masked[x]) continue;
          if (static_cast<double>(state.counters[x]) >=
              static_cast<double>(cached_median) + slack_term) {
            masked[x] = 1;
            state.mask.insert(x);
            promoted = true;
            responder.note_mask_size(state.mask.size());
            // removing a high counter can move the lower median
            cached_median = lower_median_unmasked(state.counters, masked, median_scratch);
          }
        }
        if (promoted) {
          max_unmasked_counter = 0;
          for (std::uint32_t i = 0; i < n; ++i) {
            if (!masked[i] && state.counters[i] > max_unmasked_counter) {
              max_unmasked_counter = state.counters[i];
            }
          }
        }
      }
    }

    const bool err = (v_size <= config.thresholds.a_count && z == 1) ||
                     (v_size >= config.thresholds.b_count && z == 0);
    state.errors += err;
    if (keep_log) {
      state.log.push_back({t, q, v_size, mask_size_at_query, static_cast<std::uint8_t>(z),
                           static_cast<std::uint8_t>(err)});
    }
  }
  state.rounds = config.rounds;
  return state;
}

}  // namespace

AttackState run_attack(const AttackConfig& config, AttackSystem& system,
                       QueryResponder& responder, RngStream rng, bool keep_log) {
  return run_loop(config, system, responder, rng, keep_log, /*adaptive=*/true);
}

AttackState run_baseline(const AttackConfig& config, AttackSystem& system,
                         QueryResponder& responder, RngStream rng, bool keep_log) {
  return run_loop(config, system, responder, rng, keep_log, /*adaptive=*/false);
}

double certify_adversarial(AttackSystem& system, const KeySet& mask,
                           const RateDistribution& dist, const ThresholdPair& thresholds,
                           int trials, RngStream rng) {
  struct GroupStat {
    std::uint32_t low = 0;
    std::uint32_t high = 0;
  };
  std::unordered_map<std::uint64_t, GroupStat> groups;
  const std::uint32_t n = system.ground_size();
  for (int t = 0; t < trials; ++t) {
    const double q = dist.sample(rng);
    KeySet u = sample_bernoulli_subset(n, q, rng);
    KeySet v = u.set_union(mask);
    const std::uint64_t key = fnv1a(system.group_key(v, rng));
    GroupStat& g = groups[key];
    if (static_cast<std::int64_t>(v.size()) <= thresholds.a_count) ++g.low;
    if (static_cast<std::int64_t>(v.size()) >= thresholds.b_count) ++g.high;
  }
  std::uint64_t forced = 0;
  for (const auto& [key, g] : groups) forced += std::min(g.low, g.high);
  return static_cast<double>(forced) / trials;
}

ScoreAdvantageEstimate score_advantage_probe(AttackSystem& system, QueryResponder& phi,
                                             const KeySet& mask, const KeySet& pool_truth,
                                             const RateDistribution& dist,
                                             const ThresholdPair& thresholds, int trials,
                                             RngStream rng) {
  const std::uint32_t n = system.ground_size();
  const KeySet pool_rest = pool_truth.set_minus(mask);
  const double pool_size = static_cast<double>(pool_rest.size());
  const double transparent_size = static_cast<double>(n - pool_truth.size());

  double sum_pool = 0, sumsq_pool = 0;
  double sum_star = 0, sumsq_star = 0;
  double sum_eta = 0, sumsq_eta = 0;
  for (int t = 0; t < trials; ++t) {
    const double q = dist.sample(rng);
    KeySet u = sample_bernoulli_subset(n, q, rng);
    KeySet u_minus_m = u.set_minus(mask);
    Observation obs = system.observe(mask, u_minus_m, q, rng);
    const int z = phi.respond(obs);
    const std::uint64_t v_size = mask.size() + u_minus_m.size();

    const double frac_pool =
        pool_size > 0 ? z * u_minus_m.set_intersect(pool_rest).size() / pool_size : 0.0;
    const double frac_star = z * u.set_minus(pool_truth).size() / transparent_size;
    const double eta =
        (z == 1 && static_cast<std::int64_t>(v_size) < thresholds.a_count) ||
                (z == 0 && static_cast<std::int64_t>(v_size) > thresholds.b_count)
            ? 1.0
            : 0.0;
    sum_pool += frac_pool;
    sumsq_pool += frac_pool * frac_pool;
    sum_star += frac_star;
    sumsq_star += frac_star * frac_star;
    sum_eta += eta;
    sumsq_eta += eta * eta;
  }
  auto finish = [&](double sum, double sumsq) {
    const double mean = sum / trials;
    const double var = std::max(0.0, sumsq / trials - mean * mean);
    return std::pair<double, double>(mean, std::sqrt(var / trials));
  };
  ScoreAdvantageEstimate est{};
  std::tie(est.p_bar_pool, est.p_bar_se) = finish(sum_pool, sumsq_pool);
  std::tie(est.p_star, est.p_star_se) = finish(sum_star, sumsq_star);
  std::tie(est.eta, est.eta_se) = finish(sum_eta, sumsq_eta);
  return est;
}

}  // namespace sketchlab
