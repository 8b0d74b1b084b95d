#pragma once

#include <cstdint>
#include <vector>

#include "sketchlab/rng.hpp"
#include "sketchlab/sketch.hpp"

namespace sketchlab {

// Layers A_1, A_2, ... peeled from the ground set; each layer is an in-core
// of the keys remaining above it.
struct CorePeeling {
  std::vector<KeySet> layers;
  std::vector<Sketch> layer_sketches;
  bool exhausted_ground_set = false;  // else stopped at a transparent suffix
};

struct DeterminingPool {
  KeySet pool;
  double delta = 0.0;
  int prefix_layers = 0;  // number of peeling layers unioned into the pool
};

CorePeeling peel(const ComposableMap& map);

// Prefix length: ceil(ln(k/delta)/qmin) for monotone maps, otherwise
// ceil((k + 4*sqrt(k*ln(1/delta)))/qmin), capped at the layer count.
int pool_prefix_length(int rank_bound, double qmin, double delta, bool monotone_hint);

DeterminingPool pool_from_peeling(const CorePeeling& peeling, const ComposableMap& map,
                                  double qmin, double delta, bool monotone_hint);

// Monte-Carlo failure rate of S((U cap L) cup M) != S(U cup M) per (mask, q).
struct PoolCheckCell {
  std::size_t mask_index;
  double q;
  double failure_rate;
};

std::vector<PoolCheckCell> verify_pool(const ComposableMap& map, const KeySet& pool,
                                       const std::vector<KeySet>& masks,
                                       const std::vector<double>& q_grid, int trials,
                                       RngStream rng);

// Fraction of layer-wise samples Q_i ~ Bern[q]^{A_i} for which no i <= ell
// satisfies S(Q_{<=i}) == S(Q_{<=i} cup A_{i+1}).
double check_termination(const ComposableMap& map, const CorePeeling& peeling, int ell,
                         double q, int trials, RngStream rng);

// Max observed in-core size over sampled subsets plus boundary cases; throws
// if it ever exceeds the declared rank bound.
int rank_of(const ComposableMap& map, int samples, RngStream rng);

}  // namespace sketchlab
