#include "sketchlab/maps.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace sketchlab {

KeySet ComposableMap::in_core(const KeySet& u) const {
  const Sketch target = sketch(u);
  std::vector<Key> current = u.members();
  // Greedy removal in ascending key order; each kept key is certified
  // necessary against the final set, so the result is minimal.
  for (std::size_t i = 0; i < current.size();) {
    std::vector<Key> without;
    without.reserve(current.size() - 1);
    for (std::size_t j = 0; j < current.size(); ++j) {
      if (j != i) without.push_back(current[j]);
    }
    if (sketch(KeySet(without)) == target) {
      current = std::move(without);
    } else {
      ++i;
    }
  }
  return KeySet(std::move(current));
}

// ---- SampleSketchMap ----

SampleSketchMap::SampleSketchMap(std::uint32_t n, KeySet sample)
    : n_(n), sample_(std::move(sample)) {
  sample_.check_within(n_);
}

SampleSketchMap SampleSketchMap::random(std::uint32_t n, int k, RngHandle rng) {
  RngStream s = rng.stream_for();
  std::vector<Key> all(n);
  std::iota(all.begin(), all.end(), 0u);
  for (std::uint32_t i = 0; i < static_cast<std::uint32_t>(k); ++i) {
    std::swap(all[i], all[i + s.below(n - i)]);
  }
  all.resize(k);
  return SampleSketchMap(n, KeySet(std::move(all)));
}

Sketch SampleSketchMap::sketch(const KeySet& u) const {
  u.check_within(n_);
  return Sketch{u.set_intersect(sample_).members()};
}

Sketch SampleSketchMap::compose(const Sketch& a, const Sketch& b) const {
  std::vector<Key> out;
  std::set_union(a.words.begin(), a.words.end(), b.words.begin(), b.words.end(),
                 std::back_inserter(out));
  return Sketch{std::move(out)};
}

KeySet SampleSketchMap::in_core(const KeySet& u) const {
  return u.set_intersect(sample_);
}

// ---- KPartitionSketchMap ----

namespace {
constexpr std::uint32_t kEmptySlot = 0xffffffffu;

std::vector<std::uint32_t> random_permutation(std::uint32_t n, RngStream& s) {
  std::vector<std::uint32_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0u);
  for (std::uint32_t i = n; i > 1; --i) {
    std::swap(perm[i - 1], perm[s.below(i)]);
  }
  return perm;
}
}  // namespace

KPartitionSketchMap::KPartitionSketchMap(std::vector<std::uint32_t> bucket_of,
                                         std::vector<std::uint32_t> rank_of, int k)
    : bucket_of_(std::move(bucket_of)), rank_of_(std::move(rank_of)), k_(k) {
  if (bucket_of_.size() != rank_of_.size()) {
    throw std::invalid_argument("bucket/rank size mismatch");
  }
}

KPartitionSketchMap KPartitionSketchMap::random(std::uint32_t n, int k, RngHandle rng) {
  RngStream s = rng.stream_for();
  std::vector<std::uint32_t> bucket(n);
  for (auto& b : bucket) b = static_cast<std::uint32_t>(s.below(k));
  std::vector<std::uint32_t> rank(n);
  auto perm = random_permutation(n, s);
  for (std::uint32_t i = 0; i < n; ++i) rank[perm[i]] = i;
  return KPartitionSketchMap(std::move(bucket), std::move(rank), k);
}

Sketch KPartitionSketchMap::sketch(const KeySet& u) const {
  u.check_within(ground_size());
  std::vector<std::uint32_t> slot(k_, kEmptySlot);
  for (Key x : u.members()) {
    std::uint32_t b = bucket_of_[x];
    if (slot[b] == kEmptySlot || rank_of_[x] < rank_of_[slot[b]]) slot[b] = x;
  }
  return Sketch{std::move(slot)};
}

Sketch KPartitionSketchMap::compose(const Sketch& a, const Sketch& b) const {
  std::vector<std::uint32_t> slot(k_);
  for (int i = 0; i < k_; ++i) {
    std::uint32_t xa = a.words[i], xb = b.words[i];
    if (xa == kEmptySlot) {
      slot[i] = xb;
    } else if (xb == kEmptySlot) {
      slot[i] = xa;
    } else {
      slot[i] = rank_of_[xa] <= rank_of_[xb] ? xa : xb;
    }
  }
  return Sketch{std::move(slot)};
}

KeySet KPartitionSketchMap::in_core(const KeySet& u) const {
  Sketch s = sketch(u);
  std::vector<Key> reps;
  for (std::uint32_t x : s.words) {
    if (x != kEmptySlot) reps.push_back(x);
  }
  return KeySet(std::move(reps));
}

// ---- BottomKSketchMap ----

BottomKSketchMap::BottomKSketchMap(std::vector<std::uint32_t> rank_of, int k)
    : rank_of_(std::move(rank_of)), k_(k) {
  by_rank_.resize(rank_of_.size());
  for (Key x = 0; x < rank_of_.size(); ++x) by_rank_[rank_of_[x]] = x;
}

BottomKSketchMap BottomKSketchMap::random(std::uint32_t n, int k, RngHandle rng) {
  RngStream s = rng.stream_for();
  std::vector<std::uint32_t> rank(n);
  auto perm = random_permutation(n, s);
  for (std::uint32_t i = 0; i < n; ++i) rank[perm[i]] = i;
  return BottomKSketchMap(std::move(rank), k);
}

BottomKSketchMap BottomKSketchMap::identity_priorities(std::uint32_t n, int k) {
  std::vector<std::uint32_t> rank(n);
  std::iota(rank.begin(), rank.end(), 0u);
  return BottomKSketchMap(std::move(rank), k);
}

Sketch BottomKSketchMap::sketch(const KeySet& u) const {
  u.check_within(ground_size());
  // Keep the k smallest ranks; canonical payload lists keys in rank order.
  std::vector<std::uint32_t> best;  // ranks
  best.reserve(u.size());
  for (Key x : u.members()) best.push_back(rank_of_[x]);
  if (best.size() > static_cast<std::size_t>(k_)) {
    std::nth_element(best.begin(), best.begin() + k_, best.end());
    best.resize(k_);
  }
  std::sort(best.begin(), best.end());
  std::vector<std::uint32_t> keys(best.size());
  for (std::size_t i = 0; i < best.size(); ++i) keys[i] = by_rank_[best[i]];
  return Sketch{std::move(keys)};
}

Sketch BottomKSketchMap::compose(const Sketch& a, const Sketch& b) const {
  std::vector<std::uint32_t> merged;
  merged.reserve(a.words.size() + b.words.size());
  std::size_t i = 0, j = 0;
  auto rk = [&](std::uint32_t key) { return rank_of_[key]; };
  while ((i < a.words.size() || j < b.words.size()) &&
         merged.size() < static_cast<std::size_t>(k_)) {
    if (j == b.words.size() || (i < a.words.size() && rk(a.words[i]) <= rk(b.words[j]))) {
      if (merged.empty() || merged.back() != a.words[i]) merged.push_back(a.words[i]);
      ++i;
    } else {
      if (merged.empty() || merged.back() != b.words[j]) merged.push_back(b.words[j]);
      ++j;
    }
  }
  return Sketch{std::move(merged)};
}

KeySet BottomKSketchMap::in_core(const KeySet& u) const {
  return KeySet(sketch(u).words);
}

// ---- BooleanLinearSketchMap ----

BooleanLinearSketchMap::BooleanLinearSketchMap(std::uint32_t n, int k,
                                               std::vector<std::uint32_t> column_bits)
    : n_(n), k_(k), cols_(std::move(column_bits)) {
  if (k_ < 1 || k_ > 32) throw std::invalid_argument("boolean map supports 1..32 rows");
  if (cols_.size() != n_) throw std::invalid_argument("column count mismatch");
}

BooleanLinearSketchMap BooleanLinearSketchMap::random(std::uint32_t n, int k,
                                                      double density, RngHandle rng) {
  RngStream s = rng.stream_for();
  std::vector<std::uint32_t> cols(n, 0u);
  for (auto& c : cols) {
    for (int row = 0; row < k; ++row) {
      if (s.unit() < density) c |= (1u << row);
    }
  }
  return BooleanLinearSketchMap(n, k, std::move(cols));
}

Sketch BooleanLinearSketchMap::sketch(const KeySet& u) const {
  u.check_within(n_);
  std::uint32_t acc = 0;
  for (Key x : u.members()) acc |= cols_[x];
  return Sketch{{acc}};
}

Sketch BooleanLinearSketchMap::compose(const Sketch& a, const Sketch& b) const {
  return Sketch{{a.words[0] | b.words[0]}};
}

KeySet BooleanLinearSketchMap::in_core(const KeySet& u) const {
  const std::uint32_t target = sketch(u).words[0];
  // Count contributors per covered row, then drop keys (ascending) whose
  // covered rows all have another contributor.
  int cover[32] = {0};
  for (Key x : u.members()) {
    std::uint32_t bits = cols_[x] & target;
    while (bits) {
      cover[__builtin_ctz(bits)]++;
      bits &= bits - 1;
    }
  }
  std::vector<Key> kept;
  for (Key x : u.members()) {
    std::uint32_t bits = cols_[x] & target;
    bool removable = true;
    for (std::uint32_t b = bits; b; b &= b - 1) {
      if (cover[__builtin_ctz(b)] <= 1) {
        removable = false;
        break;
      }
    }
    if (removable) {
      for (std::uint32_t b = bits; b; b &= b - 1) cover[__builtin_ctz(b)]--;
    } else {
      kept.push_back(x);
    }
  }
  return KeySet(std::move(kept));
}

// ---- BlockCoverMap ----

BlockCoverMap::BlockCoverMap(int num_blocks, int block_width)
    : blocks_(num_blocks), width_(block_width) {
  if (block_width < 1 || block_width > 32 || num_blocks < 1) {
    throw std::invalid_argument("block-cover needs 1..32 wide blocks");
  }
}

// Payload layout: [first_full_block (1-based, blocks_+1 if none),
//                  membership mask of each block before it].
Sketch BlockCoverMap::canonicalize(std::vector<std::uint32_t> masks) const {
  const std::uint32_t full = (width_ == 32) ? 0xffffffffu : ((1u << width_) - 1);
  std::uint32_t first_full = blocks_ + 1;
  for (int i = 0; i < blocks_; ++i) {
    if (masks[i] == full) {
      first_full = i + 1;
      break;
    }
  }
  std::vector<std::uint32_t> words;
  words.push_back(first_full);
  for (std::uint32_t i = 0; i + 1 < first_full; ++i) words.push_back(masks[i]);
  return Sketch{std::move(words)};
}

Sketch BlockCoverMap::sketch(const KeySet& u) const {
  u.check_within(ground_size());
  std::vector<std::uint32_t> masks(blocks_, 0u);
  for (Key x : u.members()) masks[x / width_] |= 1u << (x % width_);
  return canonicalize(std::move(masks));
}

Sketch BlockCoverMap::compose(const Sketch& a, const Sketch& b) const {
  std::vector<std::uint32_t> masks(blocks_, 0u);
  const std::uint32_t full = (width_ == 32) ? 0xffffffffu : ((1u << width_) - 1);
  auto apply = [&](const Sketch& s) {
    std::uint32_t ff = s.words[0];
    for (std::uint32_t i = 0; i + 1 < ff && i < static_cast<std::uint32_t>(blocks_); ++i) {
      masks[i] |= s.words[1 + i];
    }
    if (ff <= static_cast<std::uint32_t>(blocks_)) masks[ff - 1] = full;
  };
  apply(a);
  apply(b);
  return canonicalize(std::move(masks));
}

KeySet BlockCoverMap::in_core(const KeySet& u) const {
  Sketch s = sketch(u);
  const std::uint32_t first_full = s.words[0];
  std::vector<Key> keys;
  for (std::uint32_t i = 0; i + 1 < first_full; ++i) {
    for (int b = 0; b < width_; ++b) {
      if (s.words[1 + i] & (1u << b)) keys.push_back(i * width_ + b);
    }
  }
  if (first_full <= static_cast<std::uint32_t>(blocks_)) {
    for (int b = 0; b < width_; ++b) keys.push_back((first_full - 1) * width_ + b);
  }
  return KeySet(std::move(keys));
}

}  // namespace sketchlab
