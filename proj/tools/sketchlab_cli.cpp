// Experiment driver: attack / baseline / pool-verification / axiom suites
// over the library's sketch families and responders.

#include <cmath>
#include <cstdio>
#include <memory>

#include <CLI11.hpp>

#include "sketchlab/axioms.hpp"
#include "sketchlab/scenarios.hpp"

namespace sl = sketchlab;

namespace {

struct CommonOpts {
  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_dir;
  int trials = 0;
};

sl::ExperimentConfig load_config(const CommonOpts& opts) {
  sl::ExperimentConfig cfg;
  if (!opts.config_path.empty()) cfg = sl::ExperimentConfig::load(opts.config_path);
  if (opts.seed) cfg.seed = opts.seed;
  if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
  if (opts.trials) cfg.trials = opts.trials;
  return cfg;
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "experiment config (JSON)");
  cmd->add_option("--seed", opts.seed, "override config seed");
  cmd->add_option("--out", opts.out_dir, "override output directory");
  cmd->add_option("--trials", opts.trials, "override trial count");
}

int cmd_attack(const sl::ExperimentConfig& cfg) {
  sl::RunRecord record = sl::run_experiment(cfg, /*adaptive=*/true, /*write_outputs=*/true);
  std::printf("scenario %s: %d trials, median error fraction %.4f, median eta %.4f\n",
              cfg.scenario.c_str(), cfg.trials, record.median_error_fraction(),
              record.median_eta());
  for (const auto& t : record.trials) {
    std::printf("  trial %d: err %.4f mask %zu eta %.4f (%.1fs)\n", t.trial, t.error_fraction,
                t.mask_size, t.eta_hat, t.seconds);
  }
  return 0;
}

int cmd_baseline(const sl::ExperimentConfig& cfg) {
  if (cfg.derived_rounds() == 0) {
    std::printf("baseline: r = 0, nothing to do\n");
    return 0;
  }
  sl::RunRecord record = sl::run_experiment(cfg, /*adaptive=*/false, /*write_outputs=*/true);
  std::printf("baseline %s: median error fraction %.4f\n", cfg.scenario.c_str(),
              record.median_error_fraction());
  for (const auto& t : record.trials) {
    std::printf("  trial %d: err %.4f (%.1fs)\n", t.trial, t.error_fraction, t.seconds);
  }
  return 0;
}

int cmd_verify_pools(const sl::ExperimentConfig& cfg) {
  sl::Scenario sc = sl::build_scenario(cfg, 0);
  const double sigma = std::sqrt(cfg.delta * (1 - cfg.delta) / cfg.verify.trials);
  const double bound = cfg.delta + 3 * sigma;
  sl::RngStream rng = sl::RngHandle{cfg.seed, 77}.stream_for();

  std::vector<sl::KeySet> masks;
  masks.push_back(sl::KeySet{});
  if (sc.known_pool && !sc.known_pool->empty()) {
    std::vector<sl::Key> some;
    const auto& members = sc.known_pool->members();
    for (std::size_t i = 0; i < members.size(); i += 4) some.push_back(members[i]);
    masks.push_back(sl::KeySet(std::move(some)));
  }
  masks.push_back(sl::sample_bernoulli_subset(cfg.n, 16.0 / cfg.n, rng));

  const std::vector<double> q_grid = {cfg.rates.qmin, 0.5 * (cfg.rates.q1 + cfg.rates.q2),
                                      cfg.rates.qmax};

  std::vector<sl::PoolCheckCell> cells;
  if (cfg.system == "fp-linear") {
    sl::BasisPool pool =
        sl::basis_pool(*sc.fp_matrix, cfg.rates.qmin, cfg.delta, sl::BasisPoolKind::kBasis);
    cells = sl::verify_linear_pool(*sc.fp_matrix, pool, masks, q_grid, cfg.verify.trials, rng);
  } else if (cfg.system == "real-small") {
    sl::BasisPool pool =
        sl::basis_pool(*sc.real_matrix, cfg.rates.qmin, cfg.delta, sl::BasisPoolKind::kBasis);
    cells = sl::verify_linear_pool(*sc.real_matrix, pool, masks, q_grid, cfg.verify.trials, rng);
  } else {
    const sl::ComposableMap& map = *sc.maps.at(0);
    sl::CorePeeling peeling = sl::peel(map);
    sl::DeterminingPool pool =
        sl::pool_from_peeling(peeling, map, cfg.rates.qmin, cfg.delta, map.monotone());
    int ell = cfg.verify.ell_override ? cfg.verify.ell_override : pool.prefix_layers;
    if (cfg.verify.ell_override) {
      sl::KeySet truncated;
      for (int i = 0; i < ell && i < static_cast<int>(peeling.layers.size()); ++i) {
        truncated = truncated.set_union(peeling.layers[i]);
      }
      pool.pool = truncated;
    }
    cells = sl::verify_pool(map, pool.pool, masks, q_grid, cfg.verify.trials, rng);
    const double nonterm =
        sl::check_termination(map, peeling, std::min<int>(ell, peeling.layers.size()),
                              cfg.rates.qmin, cfg.verify.trials, rng.child(99));
    std::printf("termination: non-termination rate %.5f at ell=%d (bound %.5f)\n", nonterm,
                ell, bound);
  }

  int violations = 0;
  for (const auto& c : cells) {
    const bool ok = c.failure_rate <= bound;
    if (!ok) ++violations;
    std::printf("mask#%zu q=%.3f failure %.5f %s\n", c.mask_index, c.q, c.failure_rate,
                ok ? "ok" : "VIOLATION");
  }
  std::printf("pool verification: %d violation(s), bound %.5f\n", violations, bound);
  return violations ? 1 : 0;
}

int cmd_axioms(int n_max) {
  const std::uint32_t n = std::min(10, n_max);
  sl::RngHandle h{424242, 0};
  std::vector<std::pair<std::string, std::shared_ptr<sl::ComposableMap>>> maps;
  maps.emplace_back("sample",
                    std::make_shared<sl::SampleSketchMap>(sl::SampleSketchMap::random(n, 3, h)));
  maps.emplace_back("bottom-k", std::make_shared<sl::BottomKSketchMap>(
                                    sl::BottomKSketchMap::random(n, 3, h.with_stream(1))));
  maps.emplace_back("k-partition", std::make_shared<sl::KPartitionSketchMap>(
                                       sl::KPartitionSketchMap::random(n, 3, h.with_stream(2))));
  maps.emplace_back("boolean-linear",
                    std::make_shared<sl::BooleanLinearSketchMap>(
                        sl::BooleanLinearSketchMap::random(n, 4, 0.4, h.with_stream(3))));
  maps.emplace_back("block-cover", std::make_shared<sl::BlockCoverMap>(3, 3));
  auto fp = std::make_shared<sl::PrimeFieldMatrix>(
      sl::PrimeFieldMatrix::random(7, 3, n, h.with_stream(4)));
  maps.emplace_back("span", std::shared_ptr<sl::ComposableMap>(sl::make_span_map(*fp)));
  maps.emplace_back("greedy-basis",
                    std::shared_ptr<sl::ComposableMap>(sl::make_greedy_basis_map(*fp)));

  bool all_ok = true;
  for (const auto& [name, map] : maps) {
    sl::AxiomReport report = sl::brute_force_axioms(*map, n_max);
    std::printf("%-14s n=%u checks=%llu %s\n", name.c_str(), map->ground_size(),
                static_cast<unsigned long long>(report.checks),
                report.passed ? "pass" : "FAIL");
    for (const auto& cx : report.counterexamples) {
      std::printf("    %s: %s\n", cx.axiom.c_str(), cx.detail.c_str());
    }
    all_ok = all_ok && report.passed;
  }
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cardinality sketch attack simulator"};
  app.require_subcommand(1);

  CommonOpts attack_opts, verify_opts, baseline_opts;
  int axiom_nmax = 10;

  CLI::App* attack = app.add_subcommand("attack", "run the adaptive attack");
  add_common(attack, attack_opts);
  CLI::App* verify = app.add_subcommand("verify-pools", "verify determining pools");
  add_common(verify, verify_opts);
  CLI::App* baseline = app.add_subcommand("baseline", "non-adaptive control run");
  add_common(baseline, baseline_opts);
  CLI::App* axioms = app.add_subcommand("axioms", "exhaustive composable-map axioms");
  axioms->add_option("--n-max", axiom_nmax, "ground set size cap");

  CLI11_PARSE(app, argc, argv);

  try {
    if (attack->parsed()) return cmd_attack(load_config(attack_opts));
    if (verify->parsed()) return cmd_verify_pools(load_config(verify_opts));
    if (baseline->parsed()) return cmd_baseline(load_config(baseline_opts));
    if (axioms->parsed()) return cmd_axioms(axiom_nmax);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
