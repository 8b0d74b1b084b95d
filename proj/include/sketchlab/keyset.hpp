#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace sketchlab {

using Key = std::uint32_t;

// Universe of keys 0..n-1.
struct GroundSet {
  std::uint32_t n;

  explicit GroundSet(std::uint32_t size) : n(size) {
    if (n < 2) throw std::invalid_argument("ground set needs n >= 2");
  }
};

// Sorted, duplicate-free set of key indices.
class KeySet {
 public:
  KeySet() = default;
  KeySet(std::initializer_list<Key> keys) : members_(keys) { normalize(); }
  explicit KeySet(std::vector<Key> keys) : members_(std::move(keys)) { normalize(); }

  static KeySet full(std::uint32_t n) {
    std::vector<Key> m(n);
    for (std::uint32_t i = 0; i < n; ++i) m[i] = i;
    KeySet s;
    s.members_ = std::move(m);
    return s;
  }

  const std::vector<Key>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }

  bool contains(Key k) const {
    return std::binary_search(members_.begin(), members_.end(), k);
  }

  bool is_subset_of(const KeySet& other) const {
    return std::includes(other.members_.begin(), other.members_.end(),
                         members_.begin(), members_.end());
  }

  KeySet set_union(const KeySet& other) const {
    std::vector<Key> out;
    out.reserve(members_.size() + other.members_.size());
    std::set_union(members_.begin(), members_.end(), other.members_.begin(),
                   other.members_.end(), std::back_inserter(out));
    KeySet s;
    s.members_ = std::move(out);
    return s;
  }

  KeySet set_minus(const KeySet& other) const {
    std::vector<Key> out;
    std::set_difference(members_.begin(), members_.end(), other.members_.begin(),
                        other.members_.end(), std::back_inserter(out));
    KeySet s;
    s.members_ = std::move(out);
    return s;
  }

  KeySet set_intersect(const KeySet& other) const {
    std::vector<Key> out;
    std::set_intersection(members_.begin(), members_.end(), other.members_.begin(),
                          other.members_.end(), std::back_inserter(out));
    KeySet s;
    s.members_ = std::move(out);
    return s;
  }

  void insert(Key k) {
    auto it = std::lower_bound(members_.begin(), members_.end(), k);
    if (it == members_.end() || *it != k) members_.insert(it, k);
  }

  void check_within(std::uint32_t n) const {
    if (!members_.empty() && members_.back() >= n) {
      throw std::out_of_range("key index out of ground set");
    }
  }

  bool operator==(const KeySet& other) const = default;

 private:
  void normalize() {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  }

  std::vector<Key> members_;
};

}  // namespace sketchlab
