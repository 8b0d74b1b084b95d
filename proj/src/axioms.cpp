#include "sketchlab/axioms.hpp"

#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>

namespace sketchlab {

namespace {

KeySet mask_to_set(std::uint32_t mask) {
  std::vector<Key> keys;
  for (std::uint32_t b = mask; b; b &= b - 1) {
    keys.push_back(static_cast<Key>(__builtin_ctz(b)));
  }
  return KeySet(std::move(keys));
}

std::string mask_str(std::uint32_t mask) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (std::uint32_t b = mask; b; b &= b - 1) {
    if (!first) os << ",";
    os << __builtin_ctz(b);
    first = false;
  }
  os << "}";
  return os.str();
}

}  // namespace

AxiomReport brute_force_axioms(const ComposableMap& map, int n_max) {
  const std::uint32_t n = map.ground_size();
  if (n > static_cast<std::uint32_t>(n_max) || n > 20) {
    throw std::invalid_argument("ground set too large for exhaustive axiom check");
  }
  const std::uint32_t kSubsets = 1u << n;
  AxiomReport report;

  std::vector<Sketch> sk(kSubsets);
  for (std::uint32_t m = 0; m < kSubsets; ++m) sk[m] = map.sketch(mask_to_set(m));

  // class id per subset, grouped by sketch value
  std::map<std::vector<std::uint32_t>, int> class_of_words;
  std::vector<int> cls(kSubsets);
  std::vector<std::vector<std::uint32_t>> class_members;
  for (std::uint32_t m = 0; m < kSubsets; ++m) {
    auto [it, inserted] = class_of_words.try_emplace(sk[m].words, static_cast<int>(class_members.size()));
    if (inserted) class_members.emplace_back();
    cls[m] = it->second;
    class_members[it->second].push_back(m);
  }

  // composability + idempotence
  for (std::uint32_t a = 0; a < kSubsets; ++a) {
    for (std::uint32_t b = a; b < kSubsets; ++b) {
      ++report.checks;
      if (!(map.compose(sk[a], sk[b]) == sk[a | b])) {
        report.fail(a == b ? "idempotence" : "composability",
                    "compose(S" + mask_str(a) + ", S" + mask_str(b) + ") != S(union)");
        if (report.counterexamples.size() >= 4) goto after_compose;
      }
    }
  }
after_compose:;

  // midpoint: U1 subset U2 subset U3 with equal outer sketches
  for (std::uint32_t u3 = 0; u3 < kSubsets && report.counterexamples.size() < 8; ++u3) {
    for (std::uint32_t u1 = u3;; u1 = (u1 - 1) & u3) {
      if (cls[u1] == cls[u3] && u1 != u3) {
        const std::uint32_t gap = u3 & ~u1;
        for (std::uint32_t d = gap;; d = (d - 1) & gap) {
          ++report.checks;
          if (cls[u1 | d] != cls[u3]) {
            report.fail("midpoint", "S" + mask_str(u1) + " == S" + mask_str(u3) +
                                        " but S" + mask_str(u1 | d) + " differs");
            break;
          }
          if (d == 0) break;
        }
      }
      if (u1 == 0) break;
    }
  }

  // MaxSet per class, then containment-implies-sketch-order
  std::vector<std::uint32_t> maxset(class_members.size(), 0u);
  for (std::uint32_t m = 0; m < kSubsets; ++m) maxset[cls[m]] |= m;
  for (std::size_t c = 0; c < class_members.size(); ++c) {
    ++report.checks;
    if (cls[maxset[c]] != static_cast<int>(c)) {
      report.fail("maxset-closure", "union of class " + mask_str(maxset[c]) +
                                        " leaves its sketch class");
    }
  }
  for (std::uint32_t v = 0; v < kSubsets && report.counterexamples.size() < 12; ++v) {
    for (std::uint32_t u = v;; u = (u - 1) & v) {
      ++report.checks;
      if ((maxset[cls[u]] & ~maxset[cls[v]]) != 0) {
        report.fail("containment-order", mask_str(u) + " subset of " + mask_str(v) +
                                             " but MaxSet order is violated");
      }
      if (u == 0) break;
    }
  }

  // cores: minimal members of each class
  std::vector<std::vector<std::uint32_t>> cores(class_members.size());
  for (std::size_t c = 0; c < class_members.size(); ++c) {
    for (std::uint32_t m : class_members[c]) {
      bool minimal = true;
      for (std::uint32_t other : class_members[c]) {
        if (other != m && (other & ~m) == 0) {
          minimal = false;
          break;
        }
      }
      if (minimal) cores[c].push_back(m);
    }
  }

  // rank bound over all cores
  for (std::size_t c = 0; c < class_members.size(); ++c) {
    for (std::uint32_t core : cores[c]) {
      ++report.checks;
      if (__builtin_popcount(core) > map.rank_bound()) {
        report.fail("rank-bound", "core " + mask_str(core) + " exceeds rank bound");
      }
    }
  }

  // core characterization: S(U) == sigma  iff  some core of sigma inside U
  // and U inside MaxSet(sigma)
  for (std::uint32_t u = 0; u < kSubsets; ++u) {
    bool has_core_inside = false;
    for (std::uint32_t core : cores[cls[u]]) {
      if ((core & ~u) == 0) {
        has_core_inside = true;
        break;
      }
    }
    ++report.checks;
    if (!has_core_inside) {
      report.fail("core-in-set", "no core of its sketch inside " + mask_str(u));
    }
  }
  for (std::size_t c = 0; c < class_members.size() && report.passed; ++c) {
    for (std::uint32_t u = 0; u < kSubsets; ++u) {
      if ((u & ~maxset[c]) != 0) continue;
      bool contains_core = false;
      for (std::uint32_t core : cores[c]) {
        if ((core & ~u) == 0) {
          contains_core = true;
          break;
        }
      }
      ++report.checks;
      if (contains_core && cls[u] != static_cast<int>(c)) {
        report.fail("core-characterization",
                    mask_str(u) + " sandwiched in class of " + mask_str(maxset[c]) +
                        " but sketches differ");
        break;
      }
    }
  }

  // in-core contract: subset, same sketch, minimal under single removals
  for (std::uint32_t u = 0; u < kSubsets; ++u) {
    KeySet core = map.in_core(mask_to_set(u));
    std::uint32_t core_mask = 0;
    for (Key x : core.members()) core_mask |= 1u << x;
    ++report.checks;
    if ((core_mask & ~u) != 0 || cls[core_mask] != cls[u]) {
      report.fail("in-core", "in_core(" + mask_str(u) + ") invalid");
      continue;
    }
    for (std::uint32_t b = core_mask; b; b &= b - 1) {
      std::uint32_t without = core_mask & ~(b & (~b + 1));
      if (cls[without] == cls[u]) {
        report.fail("in-core-minimality",
                    "in_core(" + mask_str(u) + ") keeps a removable key");
        break;
      }
    }
  }

  if (map.monotone()) {
    std::vector<int> core_size(class_members.size());
    for (std::size_t c = 0; c < class_members.size(); ++c) {
      int lo = 1 << 30, hi = -1;
      for (std::uint32_t core : cores[c]) {
        lo = std::min(lo, __builtin_popcount(core));
        hi = std::max(hi, __builtin_popcount(core));
      }
      core_size[c] = lo;
      ++report.checks;
      if (lo != hi) {
        report.fail("equal-core-cardinality",
                    "class of " + mask_str(maxset[c]) + " has cores of sizes " +
                        std::to_string(lo) + " and " + std::to_string(hi));
      }
    }
    for (std::uint32_t v = 0; v < kSubsets && report.counterexamples.size() < 16; ++v) {
      for (std::uint32_t u = v;; u = (u - 1) & v) {
        ++report.checks;
        if (core_size[cls[u]] > core_size[cls[v]]) {
          report.fail("monotone-core-size", mask_str(u) + " subset of " + mask_str(v) +
                                                " but core size decreases");
        }
        if (u == 0) break;
      }
    }
  }

  return report;
}

}  // namespace sketchlab
