#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sketchlab/keyset.hpp"

namespace sketchlab {

// Canonical encoding of a sketch value. Equality is structural on the words;
// every map family defines its own fixed word layout.
struct Sketch {
  std::vector<std::uint32_t> words;

  bool operator==(const Sketch& other) const = default;

  std::uint64_t hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::uint32_t w : words) {
      h ^= w;
      h *= 0x100000001b3ULL;
    }
    return h;
  }
};

// Union-composable sketching map over subsets of {0..n-1}.
class ComposableMap {
 public:
  virtual ~ComposableMap() = default;

  virtual std::uint32_t ground_size() const = 0;
  virtual int rank_bound() const = 0;
  virtual bool monotone() const = 0;
  virtual std::string family() const = 0;

  virtual Sketch sketch(const KeySet& u) const = 0;
  virtual Sketch compose(const Sketch& a, const Sketch& b) const = 0;

  // A minimal C subset of U with sketch(C) == sketch(U). Default: greedy
  // single-key removal in ascending key order (deterministic tie-break).
  virtual KeySet in_core(const KeySet& u) const;
};

}  // namespace sketchlab
