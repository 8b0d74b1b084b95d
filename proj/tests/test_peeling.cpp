#include <doctest.h>

#include <cmath>

#include "sketchlab/maps.hpp"
#include "sketchlab/peeling.hpp"

using namespace sketchlab;

TEST_CASE("sample map peels to the single layer R") {
  SampleSketchMap map(64, KeySet{3, 9, 40});
  CorePeeling p = peel(map);
  REQUIRE(p.layers.size() == 1);
  CHECK(p.layers[0] == KeySet{3, 9, 40});
  CHECK_FALSE(p.exhausted_ground_set);  // remaining keys are transparent
  // single-layer peeling: the pool is R regardless of the requested length
  DeterminingPool pool = pool_from_peeling(p, map, 0.1, 0.01, true);
  CHECK(pool.pool == KeySet{3, 9, 40});
  CHECK(pool.prefix_layers == 1);
}

TEST_CASE("bottom-k identity priorities peel into consecutive blocks") {
  const int k = 4;
  BottomKSketchMap map = BottomKSketchMap::identity_priorities(32, k);
  CorePeeling p = peel(map);
  REQUIRE(p.layers.size() == 8);
  for (int i = 0; i < 8; ++i) {
    std::vector<Key> expect;
    for (int j = 0; j < k; ++j) expect.push_back(i * k + j);
    CHECK(p.layers[i] == KeySet(expect));
  }
  CHECK(p.exhausted_ground_set);
}

TEST_CASE("k-partition peeling removes one representative per bucket per layer") {
  RngHandle h{123, 0};
  KPartitionSketchMap map = KPartitionSketchMap::random(60, 5, h);
  CorePeeling p = peel(map);
  // oracle: after t layers, the union must be the t lowest-rank keys per bucket
  for (std::size_t t : {std::size_t{1}, std::size_t{3}, p.layers.size()}) {
    KeySet prefix;
    for (std::size_t i = 0; i < t && i < p.layers.size(); ++i) {
      prefix = prefix.set_union(p.layers[i]);
    }
    for (int b = 0; b < 5; ++b) {
      // collect keys of bucket b sorted by rank
      std::vector<std::pair<std::uint32_t, Key>> bucket;
      for (Key x = 0; x < 60; ++x) {
        if (map.bucket(x) == static_cast<std::uint32_t>(b)) bucket.push_back({map.rank(x), x});
      }
      std::sort(bucket.begin(), bucket.end());
      for (std::size_t i = 0; i < bucket.size(); ++i) {
        CHECK(prefix.contains(bucket[i].second) == (i < t));
      }
    }
  }
}

TEST_CASE("peeling layers are disjoint and sketch-equal to their suffix") {
  RngHandle h{124, 0};
  BottomKSketchMap map = BottomKSketchMap::random(48, 4, h);
  CorePeeling p = peel(map);
  KeySet seen;
  KeySet suffix = KeySet::full(48);
  for (std::size_t i = 0; i < p.layers.size(); ++i) {
    CHECK(p.layers[i].set_intersect(seen).empty());
    CHECK(map.sketch(p.layers[i]) == map.sketch(suffix));
    seen = seen.set_union(p.layers[i]);
    suffix = suffix.set_minus(p.layers[i]);
  }
}

TEST_CASE("pool prefix lengths follow the stated formulas") {
  // monotone: ceil(ln(k/delta)/qmin)
  CHECK(pool_prefix_length(8, 0.1, 0.01, true) == 67);
  // general: ceil((k + 4 sqrt(k ln(1/delta)))/qmin)
  const double expect = std::ceil((8 + 4 * std::sqrt(8 * std::log(100.0))) / 0.1);
  CHECK(pool_prefix_length(8, 0.1, 0.01, false) == static_cast<int>(expect));
}

TEST_CASE("bottom-k pool bounds its size by ell * k") {
  RngHandle h{125, 0};
  const int k = 8;
  BottomKSketchMap map = BottomKSketchMap::random(2048, k, h);
  CorePeeling p = peel(map);
  DeterminingPool pool = pool_from_peeling(p, map, 0.1, 0.01, true);
  CHECK(pool.prefix_layers == 67);
  CHECK(pool.pool.size() <= 67u * k);
  CHECK(pool.pool.size() == 536);  // identity-size blocks of k
}

TEST_CASE("full ground set is a perfect pool; empty pool fails badly") {
  RngHandle h{126, 0};
  BottomKSketchMap map = BottomKSketchMap::random(256, 4, h);
  RngStream rng(1, 1);
  std::vector<KeySet> masks = {KeySet{}, KeySet{1, 5, 250}};
  std::vector<double> qs = {0.1, 0.4};

  auto cells = verify_pool(map, KeySet::full(256), masks, qs, 400, rng);
  for (const auto& c : cells) CHECK(c.failure_rate == 0.0);

  auto empty_cells = verify_pool(map, KeySet{}, {KeySet{}}, {0.3}, 400, rng.child(1));
  CHECK(empty_cells[0].failure_rate > 0.99);
}

TEST_CASE("constructed bottom-k pool passes the Monte-Carlo failure bound") {
  RngHandle h{127, 0};
  const double delta = 0.01;
  BottomKSketchMap map = BottomKSketchMap::random(512, 8, h);
  CorePeeling p = peel(map);
  DeterminingPool pool = pool_from_peeling(p, map, 0.1, delta, true);
  RngStream rng(2, 2);
  const int trials = 10000;
  const double sigma = std::sqrt(delta * (1 - delta) / trials);
  std::vector<KeySet> masks = {KeySet{}, KeySet{0, 100, 200, 300}};
  auto cells = verify_pool(map, pool.pool, masks, {0.1, 0.35, 0.7}, trials, rng);
  for (const auto& c : cells) CHECK(c.failure_rate <= delta + 3 * sigma);
}

TEST_CASE("termination at q = 1 happens at the first layer") {
  RngHandle h{128, 0};
  BottomKSketchMap map = BottomKSketchMap::random(64, 4, h);
  CorePeeling p = peel(map);
  RngStream rng(3, 3);
  CHECK(check_termination(map, p, 2, 1.0, 200, rng) == 0.0);
}

TEST_CASE("monotone bottom-k terminates within the prescribed ell") {
  RngHandle h{129, 0};
  const double delta = 0.01;
  BottomKSketchMap map = BottomKSketchMap::random(512, 8, h);
  CorePeeling p = peel(map);
  const int ell = std::min<int>(pool_prefix_length(8, 0.1, delta, true),
                                static_cast<int>(p.layers.size()));
  RngStream rng(4, 4);
  const int trials = 10000;
  const double sigma = std::sqrt(delta * (1 - delta) / trials);
  CHECK(check_termination(map, p, ell, 0.1, trials, rng) <= delta + 3 * sigma);
}

TEST_CASE("block-cover fixture refuses to terminate early at q <= 1/2") {
  // blocks of width log2(10 k / delta): survival of any full block is ~delta/(10k)
  const double delta = 0.05;
  const int k_blocks = 8;
  const int width = static_cast<int>(std::ceil(std::log2(10 * k_blocks / delta)));
  BlockCoverMap map(k_blocks, width);
  CorePeeling p = peel(map);
  REQUIRE(static_cast<int>(p.layers.size()) == k_blocks);
  RngStream rng(5, 5);
  const double rate = check_termination(map, p, k_blocks - 1, 0.5, 2000, rng);
  CHECK(rate >= 1 - delta);
}

TEST_CASE("rank_of observes the declared bounds") {
  RngHandle h{130, 0};
  BottomKSketchMap bk = BottomKSketchMap::random(128, 6, h);
  RngStream rng(6, 6);
  CHECK(rank_of(bk, 200, rng) == 6);

  SampleSketchMap sm = SampleSketchMap::random(128, 5, h.with_stream(1));
  CHECK(rank_of(sm, 200, rng.child(1)) <= 5);
}
