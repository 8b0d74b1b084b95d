#include <doctest.h>

#include "sketchlab/maps.hpp"
#include "sketchlab/query.hpp"

using namespace sketchlab;

TEST_CASE("sample map sketches by intersection") {
  SampleSketchMap map(10, KeySet{2, 5});
  CHECK(map.sketch(KeySet{1, 2, 3}).words == std::vector<std::uint32_t>{2});
  CHECK(map.in_core(KeySet{1, 2, 3}) == KeySet{2});
  CHECK(map.sketch(KeySet{}).words.empty());
}

TEST_CASE("bottom-k with identity priorities keeps the k smallest keys") {
  BottomKSketchMap map = BottomKSketchMap::identity_priorities(16, 2);
  CHECK(map.in_core(KeySet{3, 7, 9}) == KeySet{3, 7});
  // below capacity the core is the whole set
  CHECK(map.in_core(KeySet{11}) == KeySet{11});
  // merge of {3,7} and {1,9} keeps {1,3}; oracle: brute-force min-2 of union
  Sketch merged = map.compose(map.sketch(KeySet{3, 7}), map.sketch(KeySet{1, 9}));
  CHECK(merged == map.sketch(KeySet{1, 3, 7, 9}));
  CHECK(KeySet(merged.words) == KeySet{1, 3});
}

TEST_CASE("boolean map with the zero matrix sketches everything to zero") {
  BooleanLinearSketchMap map(6, 3, std::vector<std::uint32_t>(6, 0u));
  CHECK(map.sketch(KeySet{0, 1, 2, 3}).words == std::vector<std::uint32_t>{0});
  CHECK(map.sketch(KeySet{}).words == std::vector<std::uint32_t>{0});
}

TEST_CASE("compose is idempotent and has the empty sketch as identity") {
  RngHandle h{77, 0};
  BottomKSketchMap bk = BottomKSketchMap::random(64, 4, h);
  KPartitionSketchMap kp = KPartitionSketchMap::random(64, 4, h.with_stream(1));
  BooleanLinearSketchMap bl = BooleanLinearSketchMap::random(64, 8, 0.3, h.with_stream(2));
  SampleSketchMap sm = SampleSketchMap::random(64, 6, h.with_stream(3));
  RngStream rng(5, 5);
  for (const ComposableMap* map :
       {static_cast<const ComposableMap*>(&bk), static_cast<const ComposableMap*>(&kp),
        static_cast<const ComposableMap*>(&bl), static_cast<const ComposableMap*>(&sm)}) {
    const Sketch empty = map->sketch(KeySet{});
    for (int i = 0; i < 1000; ++i) {
      KeySet u = sample_bernoulli_subset(64, rng.unit(), rng);
      Sketch s = map->sketch(u);
      CHECK(map->compose(s, s) == s);
      CHECK(map->compose(empty, s) == s);
    }
  }
}

TEST_CASE("composability on random pairs matches the sketch of the union") {
  RngHandle h{78, 0};
  BottomKSketchMap bk = BottomKSketchMap::random(48, 5, h);
  KPartitionSketchMap kp = KPartitionSketchMap::random(48, 5, h.with_stream(1));
  RngStream rng(6, 6);
  for (int i = 0; i < 2000; ++i) {
    KeySet u = sample_bernoulli_subset(48, 0.3, rng);
    KeySet v = sample_bernoulli_subset(48, 0.2, rng);
    CHECK(bk.compose(bk.sketch(u), bk.sketch(v)) == bk.sketch(u.set_union(v)));
    CHECK(kp.compose(kp.sketch(u), kp.sketch(v)) == kp.sketch(u.set_union(v)));
  }
}

TEST_CASE("boolean in-core is minimal under the exhaustive removal oracle") {
  RngHandle h{79, 0};
  BooleanLinearSketchMap map = BooleanLinearSketchMap::random(6, 3, 0.5, h);
  RngStream rng(7, 7);
  for (int i = 0; i < 200; ++i) {
    KeySet u = sample_bernoulli_subset(6, 0.6, rng);
    KeySet core = map.in_core(u);
    const Sketch target = map.sketch(u);
    CHECK(map.sketch(core) == target);
    CHECK(core.is_subset_of(u));
    for (Key x : core.members()) {
      KeySet without = core.set_minus(KeySet{x});
      CHECK_FALSE(map.sketch(without) == target);
    }
  }
}

TEST_CASE("sketch rejects out-of-range keys") {
  SampleSketchMap map(10, KeySet{2, 5});
  CHECK_THROWS_AS((void)map.sketch(KeySet{11}), std::out_of_range);
}

TEST_CASE("block-cover map reports the first fully covered block") {
  BlockCoverMap map(3, 3);  // blocks {0,1,2},{3,4,5},{6,7,8}
  Sketch full_first = map.sketch(KeySet{0, 1, 2, 4});
  CHECK(full_first.words[0] == 1);  // first block complete; nothing else encoded
  CHECK(full_first.words.size() == 1);

  Sketch partials = map.sketch(KeySet{0, 2, 3, 4, 5, 7});
  CHECK(partials.words[0] == 2);              // second block complete
  CHECK(partials.words[1] == 0b101u);         // partial first block preserved
  CHECK(map.in_core(KeySet{0, 2, 3, 4, 5, 7}) == KeySet{0, 2, 3, 4, 5});
}

TEST_CASE("broken compose is detectably wrong") {
  auto base = std::make_shared<BottomKSketchMap>(BottomKSketchMap::identity_priorities(8, 2));
  BrokenComposeMap broken(base);
  Sketch a = broken.sketch(KeySet{5});
  Sketch b = broken.sketch(KeySet{1});
  CHECK_FALSE(broken.compose(a, b) == broken.sketch(KeySet{1, 5}));
}
