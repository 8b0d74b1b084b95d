#include <doctest.h>

#include <cmath>

#include "sketchlab/attack.hpp"
#include "sketchlab/responders.hpp"

using namespace sketchlab;

namespace {
Observation widen(const Sketch& s) {
  Observation o;
  for (auto w : s.words) o.words.push_back(w);
  return o;
}
}  // namespace

TEST_CASE("sample-map estimator scales the intersection") {
  SampleSketchMap map(1000, KeySet{1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  CHECK(estimate_cardinality(map, map.sketch(KeySet{})) == 0.0);
  CHECK(standard_threshold_respond(map, map.sketch(KeySet{}), 300, 500) == 0);
  // |W| = 4 of k = 10 -> estimate 400; threshold sqrt(300*500) ~ 387
  Sketch s = map.sketch(KeySet{1, 2, 3, 4});
  CHECK(estimate_cardinality(map, s) == doctest::Approx(400.0));
  CHECK(standard_threshold_respond(map, s, 300, 500) == 1);
}

TEST_CASE("bottom-k estimator is close to unbiased at desk scale") {
  RngHandle h{301, 0};
  const std::uint32_t n = 2048;
  BottomKSketchMap map = BottomKSketchMap::random(n, 8, h);
  RngStream rng(302, 0);
  const double true_size = 0.4 * n;
  double sum = 0;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    KeySet u = sample_bernoulli_subset(n, 0.4, rng);
    sum += estimate_cardinality(map, map.sketch(u));
  }
  CHECK(std::abs(sum / draws - true_size) / true_size < 0.10);
}

TEST_CASE("degenerate sketches estimate zero") {
  RngHandle h{303, 0};
  BottomKSketchMap bk = BottomKSketchMap::random(64, 4, h);
  CHECK(estimate_cardinality(bk, bk.sketch(KeySet{})) == 0.0);
  KPartitionSketchMap kp = KPartitionSketchMap::random(64, 4, h.with_stream(1));
  CHECK(estimate_cardinality(kp, kp.sketch(KeySet{})) == 0.0);
  BooleanLinearSketchMap bl = BooleanLinearSketchMap::random(64, 8, 0.2, h.with_stream(2));
  CHECK(estimate_cardinality(bl, bl.sketch(KeySet{})) == 0.0);
}

TEST_CASE("wrapper with one copy matches the standard responder") {
  RngHandle h{304, 0};
  auto map = std::make_shared<BottomKSketchMap>(BottomKSketchMap::random(256, 4, h));
  MultiCopySystem system({map.get()});
  RobustWrapperResponder wrapper({map.get()}, WrapperStrategy::kRandomCopyPerQuery, 77, 128,
                                 RngStream(1, 1));
  StandardThresholdResponder standard(map.get(), 77, 128);
  RngStream rng(305, 0);
  for (int i = 0; i < 500; ++i) {
    KeySet u = sample_bernoulli_subset(256, 0.3, rng);
    Observation super = system.observe(KeySet{}, u, 0.3, rng);
    CHECK(wrapper.respond(super) == standard.respond(widen(map->sketch(u))));
  }
}

TEST_CASE("fresh-copy wrapper answers exactly c queries then signals exhaustion") {
  RngHandle h{306, 0};
  std::vector<std::shared_ptr<ComposableMap>> maps;
  std::vector<const ComposableMap*> raw;
  for (int c = 0; c < 3; ++c) {
    maps.push_back(std::make_shared<BottomKSketchMap>(
        BottomKSketchMap::random(128, 4, h.with_stream(c))));
    raw.push_back(maps.back().get());
  }
  MultiCopySystem system(raw);
  RobustWrapperResponder wrapper(raw, WrapperStrategy::kFreshCopyPerQuery, 30, 60,
                                 RngStream(2, 2));
  RngStream rng(307, 0);
  KeySet u = sample_bernoulli_subset(128, 0.3, rng);
  Observation obs = system.observe(KeySet{}, u, 0.3, rng);
  for (int i = 0; i < 3; ++i) CHECK_NOTHROW(wrapper.respond(obs));
  CHECK_THROWS_AS(wrapper.respond(obs), ResponderExhausted);
}

TEST_CASE("random-copy selection frequencies are uniform (chi-square)") {
  RngHandle h{308, 0};
  std::vector<std::shared_ptr<ComposableMap>> maps;
  std::vector<const ComposableMap*> raw;
  const int c = 8;
  for (int i = 0; i < c; ++i) {
    maps.push_back(std::make_shared<BottomKSketchMap>(
        BottomKSketchMap::random(64, 4, h.with_stream(i))));
    raw.push_back(maps.back().get());
  }
  MultiCopySystem system(raw);
  RobustWrapperResponder wrapper(raw, WrapperStrategy::kRandomCopyPerQuery, 15, 40,
                                 RngStream(3, 3));
  RngStream rng(309, 0);
  const int rounds = 10000;
  KeySet u = sample_bernoulli_subset(64, 0.4, rng);
  Observation obs = system.observe(KeySet{}, u, 0.4, rng);
  for (int i = 0; i < rounds; ++i) wrapper.respond(obs);
  double chi2 = 0;
  for (auto count : wrapper.selection_counts()) {
    const double expect = static_cast<double>(rounds) / c;
    chi2 += (count - expect) * (count - expect) / expect;
  }
  CHECK(chi2 < 24.32);  // alpha = 0.001, df = 7
}

TEST_CASE("omniscient responder answers extremes correctly") {
  RateDistribution d(0.10, 0.20, 0.55, 0.70);
  OmniscientBayesResponder r(d, 2048, 614, 1024);
  // |W| = 0 of a large remaining pool: strong evidence for small q
  CHECK(r.respond_given_count(0, 500, 0) == 0);
  // all pool keys present: strong evidence for large q
  CHECK(r.respond_given_count(500, 500, 0) == 1);
}

TEST_CASE("omniscient responder beats any fixed-count threshold responder") {
  // calibration: on non-adaptive queries its error is no worse than the best
  // constant |W|-threshold rule, estimated on the same draws
  RateDistribution d(0.10, 0.20, 0.55, 0.70);
  const std::uint32_t n = 2048;
  RngHandle h{310, 0};
  BottomKSketchMap map = BottomKSketchMap::random(n, 8, h);
  CorePeeling peeling = peel(map);
  DeterminingPool pool = pool_from_peeling(peeling, map, 0.1, 0.01, true);
  PoolCountSystem system(n, pool.pool);
  OmniscientBayesResponder bayes(d, n, 614, 1024);

  RngStream rng(311, 0);
  const int draws = 20000;
  const std::int64_t pool_size = static_cast<std::int64_t>(pool.pool.size());
  int bayes_errors = 0;
  std::vector<int> w_values, low_flags, high_flags;
  for (int i = 0; i < draws; ++i) {
    const double q = d.sample(rng);
    KeySet u = sample_bernoulli_subset(n, q, rng);
    Observation obs = system.observe(KeySet{}, u, q, rng);
    const int z = bayes.respond(obs);
    const bool low = u.size() <= 614, high = u.size() >= 1024;
    bayes_errors += (low && z == 1) || (high && z == 0);
    w_values.push_back(static_cast<int>(obs.words[0]));
    low_flags.push_back(low);
    high_flags.push_back(high);
  }
  int best_fixed = draws;
  for (std::int64_t thr = 0; thr <= pool_size; thr += std::max<std::int64_t>(1, pool_size / 128)) {
    int errors = 0;
    for (int i = 0; i < draws; ++i) {
      const int z = w_values[i] >= thr;
      errors += (low_flags[i] && z == 1) || (high_flags[i] && z == 0);
    }
    best_fixed = std::min(best_fixed, errors);
  }
  CHECK(bayes_errors <= best_fixed + 3 * static_cast<int>(std::sqrt(best_fixed) + 1));
}

TEST_CASE("natural wrapper restricts the base to the extracted statistic") {
  RateDistribution d(0.10, 0.20, 0.55, 0.70);
  auto base = std::make_unique<OmniscientBayesResponder>(d, 1024, 300, 512);
  // extractor that forwards only the count (identity here)
  NaturalResponder natural(std::move(base), [](const Observation& o) { return o; });
  Observation obs{{40, 200, 0}};
  OmniscientBayesResponder direct(d, 1024, 300, 512);
  CHECK(natural.respond(obs) == direct.respond(obs));

  // two observations with equal statistic produce identical responses
  auto base2 = std::make_unique<OmniscientBayesResponder>(d, 1024, 300, 512);
  NaturalResponder only_count(std::move(base2), [](const Observation& o) {
    return Observation{{o.words[0], o.words[1], o.words[2]}};
  });
  Observation a{{40, 200, 0}};
  Observation b{{40, 200, 0}};
  CHECK(only_count.respond(a) == only_count.respond(b));
}

TEST_CASE("constant responders ignore the observation") {
  ConstantResponder zero(0), one(1);
  Observation obs{{1, 2, 3}};
  CHECK(zero.respond(obs) == 0);
  CHECK(one.respond(obs) == 1);
}
