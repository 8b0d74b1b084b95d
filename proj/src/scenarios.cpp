#include "sketchlab/scenarios.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <thread>

namespace sketchlab {

namespace {

RngHandle map_seed(const ExperimentConfig& cfg, int trial, int which = 0) {
  return RngHandle{cfg.seed, 1000u + static_cast<std::uint64_t>(trial) * 64 + which};
}

KeySet union_pool(const std::vector<std::shared_ptr<ComposableMap>>& maps, double qmin,
                  double delta) {
  KeySet pool;
  for (const auto& m : maps) {
    CorePeeling peeling = peel(*m);
    DeterminingPool p = pool_from_peeling(peeling, *m, qmin, delta, m->monotone());
    pool = pool.set_union(p.pool);
  }
  return pool;
}

}  // namespace

Scenario build_scenario(const ExperimentConfig& cfg, int trial) {
  Scenario s;
  s.attack_rng = RngHandle{cfg.seed, 2000u + static_cast<std::uint64_t>(trial)}.stream_for();
  RngStream responder_rng =
      RngHandle{cfg.seed, 3000u + static_cast<std::uint64_t>(trial)}.stream_for();

  const std::int64_t base_a = cfg.threshold_a();
  const std::int64_t base_b = cfg.threshold_b();
  std::int64_t acct_a = base_a, acct_b = base_b;

  if (cfg.system == "bottomk-wrapper") {
    for (int c = 0; c < cfg.copies; ++c) {
      s.maps.push_back(std::make_shared<BottomKSketchMap>(
          BottomKSketchMap::random(cfg.n, cfg.k, map_seed(cfg, trial, c))));
    }
    std::vector<const ComposableMap*> raw;
    for (const auto& m : s.maps) raw.push_back(m.get());
    s.system = std::make_unique<MultiCopySystem>(raw);
    s.known_pool = union_pool(s.maps, cfg.rates.qmin, cfg.delta);
  } else if (cfg.system == "sample" || cfg.system == "bottom-k" ||
             cfg.system == "k-partition" || cfg.system == "boolean-linear") {
    std::shared_ptr<ComposableMap> map;
    if (cfg.system == "sample") {
      map = std::make_shared<SampleSketchMap>(
          SampleSketchMap::random(cfg.n, cfg.k, map_seed(cfg, trial)));
    } else if (cfg.system == "bottom-k") {
      map = std::make_shared<BottomKSketchMap>(
          BottomKSketchMap::random(cfg.n, cfg.k, map_seed(cfg, trial)));
    } else if (cfg.system == "k-partition") {
      map = std::make_shared<KPartitionSketchMap>(
          KPartitionSketchMap::random(cfg.n, cfg.k, map_seed(cfg, trial)));
    } else {
      map = std::make_shared<BooleanLinearSketchMap>(BooleanLinearSketchMap::random(
          cfg.n, cfg.k, cfg.bool_density, map_seed(cfg, trial)));
    }
    s.maps.push_back(map);
    s.system = std::make_unique<ComposableSystem>(map.get());
    s.known_pool = union_pool(s.maps, cfg.rates.qmin, cfg.delta);
  } else if (cfg.system == "pool-count") {
    auto map = std::make_shared<BottomKSketchMap>(
        BottomKSketchMap::random(cfg.n, cfg.k, map_seed(cfg, trial)));
    s.maps.push_back(map);
    CorePeeling peeling = peel(*map);
    DeterminingPool pool = pool_from_peeling(peeling, *map, cfg.rates.qmin, cfg.delta, true);
    s.known_pool = pool.pool;
    s.system = std::make_unique<PoolCountSystem>(cfg.n, pool.pool);
  } else if (cfg.system == "fp-linear") {
    s.fp_matrix = std::make_shared<PrimeFieldMatrix>(
        PrimeFieldMatrix::random(cfg.fp.p, cfg.k, cfg.n, map_seed(cfg, trial)));
    s.system = std::make_unique<FpLinearSystem>(s.fp_matrix.get());
    BasisPool pool = basis_pool(*s.fp_matrix, cfg.rates.qmin, cfg.delta, BasisPoolKind::kBasis);
    s.known_pool = pool.pool;
    // accounting thresholds widen so that honest l0 answers stay correct
    auto [a2, b2] = shifted_thresholds_fp(base_a, base_b, cfg.fp.p, cfg.n, cfg.fp.c_shift);
    acct_a = a2;
    acct_b = b2;
  } else if (cfg.system == "real-small") {
    s.real_matrix = std::make_shared<RealMatrix>(
        RealMatrix::random_integer(cfg.k, cfg.n, 5, map_seed(cfg, trial)));
    double gamma = cfg.real.gamma;
    if (gamma <= 0.0) {
      RngStream g = map_seed(cfg, trial, 7).stream_for();
      gamma = std::ceil(static_cast<double>(BigFloat(gamma0_estimate(*s.real_matrix, 8, g)))) + 1.0;
    }
    s.real_params = RealAuxParams::small_magnitude(cfg.real.c_const, gamma, cfg.n, cfg.k,
                                                   cfg.delta, cfg.rates.qmin);
    s.system = std::make_unique<RealSmallSystem>(s.real_matrix.get(), *s.real_params);
    BasisPool pool = basis_pool(*s.real_matrix, cfg.rates.qmin, cfg.delta, BasisPoolKind::kBasis);
    s.known_pool = pool.pool;
  } else {
    throw std::invalid_argument("unknown system kind: " + cfg.system);
  }

  const ThresholdPair acct(acct_a, acct_b, cfg.n);
  RateDistribution rates(cfg.rates.qmin, cfg.rates.q1, cfg.rates.q2, cfg.rates.qmax,
                         cfg.rates.min_separation);

  if (cfg.responder == "standard") {
    s.responder = std::make_unique<StandardThresholdResponder>(s.maps.at(0).get(), base_a, base_b);
  } else if (cfg.responder == "random-copy-wrapper" || cfg.responder == "fresh-copy-wrapper") {
    std::vector<const ComposableMap*> raw;
    for (const auto& m : s.maps) raw.push_back(m.get());
    s.responder = std::make_unique<RobustWrapperResponder>(
        raw,
        cfg.responder == "random-copy-wrapper" ? WrapperStrategy::kRandomCopyPerQuery
                                               : WrapperStrategy::kFreshCopyPerQuery,
        base_a, base_b, responder_rng);
  } else if (cfg.responder == "omniscient-count") {
    s.responder = std::make_unique<OmniscientBayesResponder>(rates, cfg.n, acct_a, acct_b);
  } else if (cfg.responder == "span-statistic") {
    auto core = std::make_unique<SpanStatisticBayesResponder>(rates, cfg.n, acct_a, acct_b);
    s.responder = std::make_unique<NaturalResponder>(
        std::move(core), [](const Observation& o) { return o; });
  } else if (cfg.responder == "constant-0") {
    s.responder = std::make_unique<ConstantResponder>(0);
  } else if (cfg.responder == "constant-1") {
    s.responder = std::make_unique<ConstantResponder>(1);
  } else {
    throw std::invalid_argument("unknown responder kind: " + cfg.responder);
  }

  s.attack.emplace(cfg.n, acct, rates, cfg.pool_bound, cfg.derived_rounds());
  s.attack->promotion_slack = cfg.promotion_slack;
  s.attack->min_separation = cfg.rates.min_separation;
  return s;
}

RunRecord run_experiment(const ExperimentConfig& cfg, bool adaptive, bool write_outputs,
                         int certify_draws) {
  RunRecord record;
  record.config_hash = cfg.hash();
  record.trials.resize(cfg.trials);

  if (write_outputs) std::filesystem::create_directories(cfg.out_dir);

  const unsigned workers = std::min<unsigned>(
      std::max(1u, std::thread::hardware_concurrency()), static_cast<unsigned>(cfg.trials));
  std::vector<std::thread> threads;
  for (unsigned w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      for (int trial = static_cast<int>(w); trial < cfg.trials; trial += workers) {
        const auto start = std::chrono::steady_clock::now();
        Scenario sc = build_scenario(cfg, trial);
        AttackState st = adaptive ? run_attack(*sc.attack, *sc.system, *sc.responder,
                                               sc.attack_rng, write_outputs)
                                  : run_baseline(*sc.attack, *sc.system, *sc.responder,
                                                 sc.attack_rng, write_outputs);
        RngStream cert_rng =
            RngHandle{cfg.seed, 4000u + static_cast<std::uint64_t>(trial)}.stream_for();
        const double eta = certify_adversarial(*sc.system, st.mask, sc.attack->rates,
                                               sc.attack->thresholds, certify_draws, cert_rng);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        TrialSummary& ts = record.trials[trial];
        ts.trial = trial;
        ts.rounds = st.rounds;
        ts.errors = st.errors;
        ts.error_fraction = st.error_fraction();
        ts.mask_size = st.mask.size();
        ts.eta_hat = eta;
        ts.seconds = secs;
        if (write_outputs) {
          const std::string base = cfg.out_dir + "/" + cfg.scenario + "-trial" +
                                   std::to_string(trial);
          write_round_csv(base + ".csv", st.log);
        }
      }
    });
  }
  for (auto& t : threads) t.join();

  if (write_outputs) {
    std::ofstream out(cfg.out_dir + "/" + cfg.scenario + "-record.json");
    out << record.to_json(cfg) << "\n";
  }
  return record;
}

}  // namespace sketchlab
