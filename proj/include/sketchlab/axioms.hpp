#pragma once

#include <string>
#include <vector>

#include "sketchlab/sketch.hpp"

namespace sketchlab {

struct AxiomCounterexample {
  std::string axiom;
  std::string detail;
};

struct AxiomReport {
  bool passed = true;
  std::vector<AxiomCounterexample> counterexamples;
  std::uint64_t checks = 0;

  void fail(std::string axiom, std::string detail) {
    passed = false;
    if (counterexamples.size() < 16) {
      counterexamples.push_back({std::move(axiom), std::move(detail)});
    }
  }
};

// Exhaustive small-n verification of the composable-map axioms:
// composability, idempotence, midpoint property, MaxSet containment order,
// core characterization, rank bound, in-core minimality, and (for monotone
// maps) equal core cardinality plus monotone core sizes.
AxiomReport brute_force_axioms(const ComposableMap& map, int n_max = 12);

}  // namespace sketchlab
