#include "sketchlab/peeling.hpp"

#include <cmath>
#include <stdexcept>

#include "sketchlab/query.hpp"

namespace sketchlab {

CorePeeling peel(const ComposableMap& map) {
  CorePeeling out;
  const Sketch empty_sketch = map.sketch(KeySet{});
  KeySet remaining = KeySet::full(map.ground_size());
  while (!remaining.empty()) {
    if (map.sketch(remaining) == empty_sketch) break;  // transparent suffix
    KeySet core = map.in_core(remaining);
    if (core.empty()) break;
    out.layer_sketches.push_back(map.sketch(core));
    remaining = remaining.set_minus(core);
    out.layers.push_back(std::move(core));
  }
  out.exhausted_ground_set = remaining.empty();
  return out;
}

int pool_prefix_length(int rank_bound, double qmin, double delta, bool monotone_hint) {
  if (qmin <= 0.0 || delta <= 0.0 || delta >= 1.0) {
    throw std::invalid_argument("need qmin > 0 and delta in (0,1)");
  }
  const double k = static_cast<double>(rank_bound);
  double ell = monotone_hint ? std::log(k / delta) / qmin
                             : (k + 4.0 * std::sqrt(k * std::log(1.0 / delta))) / qmin;
  return static_cast<int>(std::ceil(ell));
}

DeterminingPool pool_from_peeling(const CorePeeling& peeling, const ComposableMap& map,
                                  double qmin, double delta, bool monotone_hint) {
  if (peeling.layers.empty()) throw std::invalid_argument("peeling has no layers");
  int ell = pool_prefix_length(map.rank_bound(), qmin, delta, monotone_hint);
  ell = std::min<int>(ell, static_cast<int>(peeling.layers.size()));
  KeySet pool;
  for (int i = 0; i < ell; ++i) pool = pool.set_union(peeling.layers[i]);
  return DeterminingPool{std::move(pool), delta, ell};
}

std::vector<PoolCheckCell> verify_pool(const ComposableMap& map, const KeySet& pool,
                                       const std::vector<KeySet>& masks,
                                       const std::vector<double>& q_grid, int trials,
                                       RngStream rng) {
  const std::uint32_t n = map.ground_size();
  std::vector<PoolCheckCell> cells;
  std::uint64_t tag = 0;
  for (std::size_t mi = 0; mi < masks.size(); ++mi) {
    masks[mi].check_within(n);
    for (double q : q_grid) {
      RngStream cell_rng = rng.child(++tag);
      int failures = 0;
      for (int t = 0; t < trials; ++t) {
        KeySet u = sample_bernoulli_subset(n, q, cell_rng);
        Sketch via_pool = map.sketch(u.set_intersect(pool).set_union(masks[mi]));
        Sketch direct = map.sketch(u.set_union(masks[mi]));
        if (!(via_pool == direct)) ++failures;
      }
      cells.push_back({mi, q, static_cast<double>(failures) / trials});
    }
  }
  return cells;
}

double check_termination(const ComposableMap& map, const CorePeeling& peeling, int ell,
                         double q, int trials, RngStream rng) {
  if (ell < 1 || ell > static_cast<int>(peeling.layers.size())) {
    throw std::invalid_argument("ell must be within the peeling length");
  }
  int non_terminated = 0;
  for (int t = 0; t < trials; ++t) {
    RngStream trial_rng = rng.child(t + 1);
    KeySet q_prefix;  // Q_{<=i}
    bool terminated = false;
    for (int i = 0; i < ell && !terminated; ++i) {
      const KeySet& layer = peeling.layers[i];
      std::vector<Key> sampled;
      for (Key x : layer.members()) {
        if (trial_rng.unit() < q) sampled.push_back(x);
      }
      q_prefix = q_prefix.set_union(KeySet(std::move(sampled)));
      const Sketch lhs = map.sketch(q_prefix);
      if (i + 1 < static_cast<int>(peeling.layers.size())) {
        terminated = lhs == map.sketch(q_prefix.set_union(peeling.layers[i + 1]));
      } else {
        terminated = true;  // no next layer: remaining keys are transparent
      }
    }
    if (!terminated) ++non_terminated;
  }
  return static_cast<double>(non_terminated) / trials;
}

int rank_of(const ComposableMap& map, int samples, RngStream rng) {
  const std::uint32_t n = map.ground_size();
  int max_core = 0;
  auto probe = [&](const KeySet& u) {
    int c = static_cast<int>(map.in_core(u).size());
    if (c > max_core) max_core = c;
  };
  probe(KeySet::full(n));
  probe(KeySet{});
  for (int s = 0; s < samples; ++s) {
    double q = rng.unit();
    probe(sample_bernoulli_subset(n, q, rng));
  }
  if (max_core > map.rank_bound()) {
    throw std::logic_error("observed core exceeds the declared rank bound");
  }
  return max_core;
}

}  // namespace sketchlab
