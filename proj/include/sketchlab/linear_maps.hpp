#pragma once

#include <memory>
#include <vector>

#include "sketchlab/keyset.hpp"
#include "sketchlab/linalg.hpp"
#include "sketchlab/matrices.hpp"
#include "sketchlab/peeling.hpp"
#include "sketchlab/sketch.hpp"

namespace sketchlab {

// Fixed-width word codec for field elements inside Sketch payloads.
template <typename Field>
struct FieldCodec;

template <>
struct FieldCodec<FpField> {
  static void encode(const FpField&, std::uint64_t e, std::vector<std::uint32_t>& out) {
    out.push_back(static_cast<std::uint32_t>(e));
  }
  static std::uint64_t decode(const FpField&, const std::uint32_t*& p) { return *p++; }
};

template <>
struct FieldCodec<RationalField> {
  static void encode(const RationalField&, const BigRational& e, std::vector<std::uint32_t>& out);
  static BigRational decode(const RationalField&, const std::uint32_t*& p);
};

// The span of the selected matrix columns, canonicalized as an RREF row set.
// Monotone composable of rank k; its peeling is basis peeling.
template <typename Field>
class SpanMap : public ComposableMap {
 public:
  SpanMap(Field field, std::vector<ColVec<Field>> columns, int dim)
      : field_(field), columns_(std::move(columns)), dim_(dim) {}

  std::uint32_t ground_size() const override { return static_cast<std::uint32_t>(columns_.size()); }
  int rank_bound() const override { return dim_; }
  bool monotone() const override { return true; }
  std::string family() const override { return "span"; }

  Sketch sketch(const KeySet& u) const override;
  Sketch compose(const Sketch& a, const Sketch& b) const override;
  KeySet in_core(const KeySet& u) const override;

 private:
  std::vector<ColVec<Field>> canonical_rref(std::vector<ColVec<Field>> vecs) const;
  Sketch encode_rows(const std::vector<ColVec<Field>>& rows) const;
  std::vector<ColVec<Field>> decode_rows(const Sketch& s) const;

  Field field_;
  std::vector<ColVec<Field>> columns_;
  int dim_;
};

// The greedy (lexicographically first) basis of the selected columns,
// encoded by its index list. Monotone composable with unique cores.
template <typename Field>
class GreedyBasisMap : public ComposableMap {
 public:
  GreedyBasisMap(Field field, std::vector<ColVec<Field>> columns, int dim)
      : field_(field), columns_(std::move(columns)), dim_(dim) {}

  std::uint32_t ground_size() const override { return static_cast<std::uint32_t>(columns_.size()); }
  int rank_bound() const override { return dim_; }
  bool monotone() const override { return true; }
  std::string family() const override { return "greedy-basis"; }

  Sketch sketch(const KeySet& u) const override;
  Sketch compose(const Sketch& a, const Sketch& b) const override;
  KeySet in_core(const KeySet& u) const override { return KeySet(sketch(u).words); }

 private:
  Field field_;
  std::vector<ColVec<Field>> columns_;
  int dim_;
};

enum class BasisPoolKind { kBasis, kGreedyBasis };

struct BasisPool {
  KeySet pool;
  BasisPoolKind kind;
  double delta;
  int prefix_layers;
};

std::unique_ptr<ComposableMap> make_span_map(const PrimeFieldMatrix& a);
std::unique_ptr<ComposableMap> make_span_map(const RealMatrix& a);
std::unique_ptr<ComposableMap> make_greedy_basis_map(const PrimeFieldMatrix& a);
std::unique_ptr<ComposableMap> make_greedy_basis_map(const RealMatrix& a);

BasisPool basis_pool(const PrimeFieldMatrix& a, double qmin, double delta, BasisPoolKind kind);
BasisPool basis_pool(const RealMatrix& a, double qmin, double delta, BasisPoolKind kind);

// Empirical failure rate per (mask, q): span mode checks
// spn(cols of U+M) == spn(cols of (U cap L)+M); greedy mode checks
// GreedyBasis(U+M) inside (L cap U)+M.
std::vector<PoolCheckCell> verify_linear_pool(const PrimeFieldMatrix& a, const BasisPool& pool,
                                              const std::vector<KeySet>& masks,
                                              const std::vector<double>& q_grid, int trials,
                                              RngStream rng);
std::vector<PoolCheckCell> verify_linear_pool(const RealMatrix& a, const BasisPool& pool,
                                              const std::vector<KeySet>& masks,
                                              const std::vector<double>& q_grid, int trials,
                                              RngStream rng);

}  // namespace sketchlab
