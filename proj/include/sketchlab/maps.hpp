#pragma once

#include <memory>
#include <vector>

#include "sketchlab/rng.hpp"
#include "sketchlab/sketch.hpp"

namespace sketchlab {

// S(U) = U intersect R for a fixed sample R.
class SampleSketchMap : public ComposableMap {
 public:
  SampleSketchMap(std::uint32_t n, KeySet sample);
  static SampleSketchMap random(std::uint32_t n, int k, RngHandle rng);

  std::uint32_t ground_size() const override { return n_; }
  int rank_bound() const override { return static_cast<int>(sample_.size()); }
  bool monotone() const override { return true; }
  std::string family() const override { return "sample"; }

  Sketch sketch(const KeySet& u) const override;
  Sketch compose(const Sketch& a, const Sketch& b) const override;
  KeySet in_core(const KeySet& u) const override;

  const KeySet& sample_set() const { return sample_; }

 private:
  std::uint32_t n_;
  KeySet sample_;
};

// Keys partitioned into k buckets with a global priority order; the sketch
// keeps the lowest-rank member of each bucket.
class KPartitionSketchMap : public ComposableMap {
 public:
  KPartitionSketchMap(std::vector<std::uint32_t> bucket_of,
                      std::vector<std::uint32_t> rank_of, int k);
  static KPartitionSketchMap random(std::uint32_t n, int k, RngHandle rng);

  std::uint32_t ground_size() const override { return static_cast<std::uint32_t>(bucket_of_.size()); }
  int rank_bound() const override { return k_; }
  bool monotone() const override { return true; }
  std::string family() const override { return "k-partition"; }

  Sketch sketch(const KeySet& u) const override;
  Sketch compose(const Sketch& a, const Sketch& b) const override;
  KeySet in_core(const KeySet& u) const override;

  std::uint32_t bucket(Key x) const { return bucket_of_[x]; }
  std::uint32_t rank(Key x) const { return rank_of_[x]; }

 private:
  std::vector<std::uint32_t> bucket_of_;
  std::vector<std::uint32_t> rank_of_;
  int k_;
};

// Global priority permutation; the sketch is the k lowest-rank keys of U.
class BottomKSketchMap : public ComposableMap {
 public:
  BottomKSketchMap(std::vector<std::uint32_t> rank_of, int k);
  static BottomKSketchMap random(std::uint32_t n, int k, RngHandle rng);
  static BottomKSketchMap identity_priorities(std::uint32_t n, int k);

  std::uint32_t ground_size() const override { return static_cast<std::uint32_t>(rank_of_.size()); }
  int rank_bound() const override { return k_; }
  bool monotone() const override { return true; }
  std::string family() const override { return "bottom-k"; }

  Sketch sketch(const KeySet& u) const override;
  Sketch compose(const Sketch& a, const Sketch& b) const override;
  KeySet in_core(const KeySet& u) const override;

  std::uint32_t rank(Key x) const { return rank_of_[x]; }
  // Keys listed in increasing rank order (rank 0 first).
  const std::vector<Key>& keys_by_rank() const { return by_rank_; }
  int k() const { return k_; }

 private:
  std::vector<std::uint32_t> rank_of_;
  std::vector<Key> by_rank_;
  int k_;
};

// S(U) = OR of the boolean matrix columns indexed by U.
class BooleanLinearSketchMap : public ComposableMap {
 public:
  // column_bits[x] holds the k row-bits of column x (k <= 32).
  BooleanLinearSketchMap(std::uint32_t n, int k, std::vector<std::uint32_t> column_bits);
  static BooleanLinearSketchMap random(std::uint32_t n, int k, double density, RngHandle rng);

  std::uint32_t ground_size() const override { return n_; }
  int rank_bound() const override { return k_; }
  bool monotone() const override { return true; }
  std::string family() const override { return "boolean-linear"; }

  Sketch sketch(const KeySet& u) const override;
  Sketch compose(const Sketch& a, const Sketch& b) const override;
  KeySet in_core(const KeySet& u) const override;

  std::uint32_t column(Key x) const { return cols_[x]; }

 private:
  std::uint32_t n_;
  int k_;
  std::vector<std::uint32_t> cols_;
};

// Worst-case fixture for peeling-length lower bounds: the ground set is split
// into consecutive blocks of width W; the sketch reports the first fully
// present block and the exact partial intersections before it.
class BlockCoverMap : public ComposableMap {
 public:
  BlockCoverMap(int num_blocks, int block_width);

  std::uint32_t ground_size() const override { return static_cast<std::uint32_t>(blocks_ * width_); }
  int rank_bound() const override { return blocks_ * width_; }
  bool monotone() const override { return false; }
  std::string family() const override { return "block-cover"; }

  Sketch sketch(const KeySet& u) const override;
  Sketch compose(const Sketch& a, const Sketch& b) const override;
  KeySet in_core(const KeySet& u) const override;

  int num_blocks() const { return blocks_; }
  int block_width() const { return width_; }

 private:
  Sketch canonicalize(std::vector<std::uint32_t> masks) const;

  int blocks_;
  int width_;
};

// Mutation fixture: compose ignores its second argument.
class BrokenComposeMap : public ComposableMap {
 public:
  explicit BrokenComposeMap(std::shared_ptr<const ComposableMap> base) : base_(std::move(base)) {}

  std::uint32_t ground_size() const override { return base_->ground_size(); }
  int rank_bound() const override { return base_->rank_bound(); }
  bool monotone() const override { return base_->monotone(); }
  std::string family() const override { return "broken-compose"; }

  Sketch sketch(const KeySet& u) const override { return base_->sketch(u); }
  Sketch compose(const Sketch& a, const Sketch&) const override { return a; }
  KeySet in_core(const KeySet& u) const override { return base_->in_core(u); }

 private:
  std::shared_ptr<const ComposableMap> base_;
};

}  // namespace sketchlab
