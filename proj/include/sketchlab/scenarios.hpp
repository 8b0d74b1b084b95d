#pragma once

#include <memory>
#include <optional>

#include "sketchlab/attack.hpp"
#include "sketchlab/config.hpp"

namespace sketchlab {

// One runnable trial: system + responder + validated attack parameters, with
// ownership of the sampled sketching maps / matrices.
struct Scenario {
  std::vector<std::shared_ptr<ComposableMap>> maps;
  std::shared_ptr<PrimeFieldMatrix> fp_matrix;
  std::shared_ptr<RealMatrix> real_matrix;
  std::optional<RealAuxParams> real_params;
  std::unique_ptr<AttackSystem> system;
  std::unique_ptr<QueryResponder> responder;
  std::optional<AttackConfig> attack;
  std::optional<KeySet> known_pool;  // diagnostic ground truth where constructible

  RngStream attack_rng;
};

// Deterministic per-trial assembly: maps, matrices and rng streams derive
// from (config.seed, trial).
Scenario build_scenario(const ExperimentConfig& cfg, int trial);

// Runs `trials` attack (or baseline) sessions and certifies each final mask.
RunRecord run_experiment(const ExperimentConfig& cfg, bool adaptive,
                         bool write_outputs, int certify_draws = 10000);

}  // namespace sketchlab
