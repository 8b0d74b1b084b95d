#include <doctest.h>

#include <cmath>

#include "sketchlab/linear_maps.hpp"
#include "sketchlab/query.hpp"

using namespace sketchlab;

TEST_CASE("span map of identity-plus-zero columns peels to the nonzero columns") {
  // 3 identity columns then 5 zero columns
  std::vector<std::uint64_t> entries(3 * 8, 0);
  for (int i = 0; i < 3; ++i) entries[i * 8 + i] = 1;
  PrimeFieldMatrix a(7, 3, 8, entries);
  BasisPool pool = basis_pool(a, 0.2, 0.05, BasisPoolKind::kBasis);
  CHECK(pool.pool == KeySet{0, 1, 2});
}

TEST_CASE("span sketches canonicalize: permuted generators give equal sketches") {
  RngHandle h{201, 0};
  PrimeFieldMatrix a = PrimeFieldMatrix::random(257, 4, 24, h);
  auto map = make_span_map(a);
  RngStream rng(202, 0);
  for (int i = 0; i < 200; ++i) {
    KeySet u = sample_bernoulli_subset(24, 0.4, rng);
    KeySet v = sample_bernoulli_subset(24, 0.3, rng);
    CHECK(map->compose(map->sketch(u), map->sketch(v)) == map->sketch(u.set_union(v)));
  }
}

TEST_CASE("greedy-basis map composes through index union rescans") {
  RngHandle h{203, 0};
  PrimeFieldMatrix a = PrimeFieldMatrix::random(13, 3, 16, h);
  auto map = make_greedy_basis_map(a);
  RngStream rng(204, 0);
  for (int i = 0; i < 300; ++i) {
    KeySet u = sample_bernoulli_subset(16, 0.5, rng);
    KeySet v = sample_bernoulli_subset(16, 0.35, rng);
    CHECK(map->compose(map->sketch(u), map->sketch(v)) == map->sketch(u.set_union(v)));
  }
}

TEST_CASE("fp basis pool passes the Monte-Carlo span-equality bound") {
  RngHandle h{205, 0};
  const double delta = 0.01;
  PrimeFieldMatrix a = PrimeFieldMatrix::random(257, 8, 2048, h);
  BasisPool pool = basis_pool(a, 0.1, delta, BasisPoolKind::kBasis);
  CHECK(pool.pool.size() <= static_cast<std::size_t>(pool.prefix_layers) * 8);

  RngStream rng(206, 0);
  const int trials = 10000;
  const double sigma = std::sqrt(delta * (1 - delta) / trials);
  std::vector<KeySet> masks = {KeySet{}, KeySet{5, 500, 1500}};
  auto cells = verify_linear_pool(a, pool, masks, {0.1, 0.4, 0.7}, trials, rng);
  for (const auto& c : cells) CHECK(c.failure_rate <= delta + 3 * sigma);
}

TEST_CASE("full pool never fails; empty pool fails against a full-rank matrix") {
  RngHandle h{207, 0};
  PrimeFieldMatrix a = PrimeFieldMatrix::random(257, 6, 128, h);
  BasisPool full{KeySet::full(128), BasisPoolKind::kBasis, 0.01, 0};
  RngStream rng(208, 0);
  auto cells = verify_linear_pool(a, full, {KeySet{}}, {0.3}, 500, rng);
  CHECK(cells[0].failure_rate == 0.0);

  BasisPool empty{KeySet{}, BasisPoolKind::kBasis, 0.01, 0};
  auto empty_cells = verify_linear_pool(a, empty, {KeySet{}}, {0.3}, 500, rng.child(1));
  CHECK(empty_cells[0].failure_rate > 0.99);
}

TEST_CASE("greedy-basis pool contains the first basis-peeling layer") {
  RngHandle h{209, 0};
  PrimeFieldMatrix a = PrimeFieldMatrix::random(257, 6, 256, h);
  BasisPool greedy = basis_pool(a, 0.15, 0.02, BasisPoolKind::kGreedyBasis);
  auto span_map = make_span_map(a);
  KeySet first_layer = span_map->in_core(KeySet::full(256));
  CHECK(first_layer.is_subset_of(greedy.pool));
}

TEST_CASE("greedy-basis pool passes its containment Monte-Carlo bound") {
  RngHandle h{210, 0};
  const double delta = 0.01;
  PrimeFieldMatrix a = PrimeFieldMatrix::random(257, 6, 512, h);
  BasisPool pool = basis_pool(a, 0.1, delta, BasisPoolKind::kGreedyBasis);
  RngStream rng(211, 0);
  const int trials = 10000;
  const double sigma = std::sqrt(delta * (1 - delta) / trials);
  auto cells = verify_linear_pool(a, pool, {KeySet{}, KeySet{3, 100}}, {0.1, 0.5}, trials, rng);
  for (const auto& c : cells) CHECK(c.failure_rate <= delta + 3 * sigma);
}

TEST_CASE("rational span pools work on small real matrices") {
  RngHandle h{212, 0};
  RealMatrix a = RealMatrix::random_integer(4, 96, 4, h);
  BasisPool pool = basis_pool(a, 0.2, 0.02, BasisPoolKind::kBasis);
  RngStream rng(213, 0);
  auto cells = verify_linear_pool(a, pool, {KeySet{}}, {0.2, 0.5}, 1500, rng);
  const double sigma = std::sqrt(0.02 * 0.98 / 1500);
  for (const auto& c : cells) CHECK(c.failure_rate <= 0.02 + 3 * sigma);
}
