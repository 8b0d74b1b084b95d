#include "sketchlab/linear_maps.hpp"

#include <algorithm>

#include "sketchlab/query.hpp"

namespace sketchlab {

void FieldCodec<RationalField>::encode(const RationalField&, const BigRational& e,
                                       std::vector<std::uint32_t>& out) {
  const BigInt num = numerator(e);
  const BigInt den = denominator(e);
  out.push_back(num < 0 ? 1u : 0u);
  for (const BigInt* part : {&num, &den}) {
    BigInt v = *part < 0 ? BigInt(-*part) : *part;
    std::vector<std::uint32_t> limbs;
    if (v == 0) limbs.push_back(0);
    while (v != 0) {
      limbs.push_back(static_cast<std::uint32_t>(v & 0xffffffffu));
      v >>= 32;
    }
    out.push_back(static_cast<std::uint32_t>(limbs.size()));
    out.insert(out.end(), limbs.begin(), limbs.end());
  }
}

BigRational FieldCodec<RationalField>::decode(const RationalField&, const std::uint32_t*& p) {
  const bool negative = *p++ != 0;
  BigInt parts[2];
  for (BigInt& v : parts) {
    std::uint32_t count = *p++;
    v = 0;
    for (std::uint32_t i = 0; i < count; ++i) {
      v |= BigInt(p[i]) << (32 * i);
    }
    p += count;
  }
  BigRational out(parts[0], parts[1]);
  return negative ? BigRational(-out) : out;
}

// ---- SpanMap ----

template <typename Field>
std::vector<ColVec<Field>> SpanMap<Field>::canonical_rref(std::vector<ColVec<Field>> vecs) const {
  std::vector<int> pivots;
  SpanBuilder<Field> fresh(field_, dim_);
  std::vector<ColVec<Field>> basis_rows;
  for (auto& v : vecs) {
    ColVec<Field> r = fresh.reduce(v);
    int piv = -1;
    for (int j = 0; j < dim_; ++j) {
      if (!field_.is_zero(r[j])) {
        piv = j;
        break;
      }
    }
    if (piv < 0) continue;
    auto inv = field_.inv(r[piv]);
    for (int j = 0; j < dim_; ++j) r[j] = field_.mul(r[j], inv);
    fresh.add(v);
    basis_rows.push_back(std::move(r));
    pivots.push_back(piv);
  }
  // back-eliminate
  for (std::size_t i = 0; i < basis_rows.size(); ++i) {
    for (std::size_t j = 0; j < basis_rows.size(); ++j) {
      if (i == j) continue;
      auto c = basis_rows[i][pivots[j]];
      if (field_.is_zero(c)) continue;
      for (int col = 0; col < dim_; ++col) {
        basis_rows[i][col] = field_.sub(basis_rows[i][col], field_.mul(c, basis_rows[j][col]));
      }
    }
  }
  // sort by pivot position
  std::vector<std::size_t> order(basis_rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pivots[a] < pivots[b];
  });
  std::vector<ColVec<Field>> out;
  out.reserve(order.size());
  for (std::size_t i : order) out.push_back(std::move(basis_rows[i]));
  return out;
}

template <typename Field>
Sketch SpanMap<Field>::encode_rows(const std::vector<ColVec<Field>>& rows) const {
  std::vector<std::uint32_t> words;
  words.push_back(static_cast<std::uint32_t>(rows.size()));
  for (const auto& r : rows) {
    for (const auto& e : r) FieldCodec<Field>::encode(field_, e, words);
  }
  return Sketch{std::move(words)};
}

template <typename Field>
std::vector<ColVec<Field>> SpanMap<Field>::decode_rows(const Sketch& s) const {
  const std::uint32_t* p = s.words.data();
  std::uint32_t count = *p++;
  std::vector<ColVec<Field>> rows(count, ColVec<Field>(dim_));
  for (auto& r : rows) {
    for (int j = 0; j < dim_; ++j) r[j] = FieldCodec<Field>::decode(field_, p);
  }
  return rows;
}

template <typename Field>
Sketch SpanMap<Field>::sketch(const KeySet& u) const {
  u.check_within(ground_size());
  std::vector<ColVec<Field>> vecs;
  vecs.reserve(u.size());
  for (Key x : u.members()) vecs.push_back(columns_[x]);
  return encode_rows(canonical_rref(std::move(vecs)));
}

template <typename Field>
Sketch SpanMap<Field>::compose(const Sketch& a, const Sketch& b) const {
  std::vector<ColVec<Field>> vecs = decode_rows(a);
  for (auto& r : decode_rows(b)) vecs.push_back(std::move(r));
  return encode_rows(canonical_rref(std::move(vecs)));
}

template <typename Field>
KeySet SpanMap<Field>::in_core(const KeySet& u) const {
  SpanBuilder<Field> span(field_, dim_);
  std::vector<Key> picked;
  for (Key x : u.members()) {
    if (span.add(columns_[x])) picked.push_back(x);
  }
  return KeySet(std::move(picked));
}

// ---- GreedyBasisMap ----

template <typename Field>
Sketch GreedyBasisMap<Field>::sketch(const KeySet& u) const {
  u.check_within(ground_size());
  SpanBuilder<Field> span(field_, dim_);
  std::vector<std::uint32_t> picked;
  for (Key x : u.members()) {
    if (span.add(columns_[x])) picked.push_back(x);
  }
  return Sketch{std::move(picked)};
}

template <typename Field>
Sketch GreedyBasisMap<Field>::compose(const Sketch& a, const Sketch& b) const {
  std::vector<std::uint32_t> merged;
  std::set_union(a.words.begin(), a.words.end(), b.words.begin(), b.words.end(),
                 std::back_inserter(merged));
  return sketch(KeySet(std::move(merged)));
}

template class SpanMap<FpField>;
template class SpanMap<RationalField>;
template class GreedyBasisMap<FpField>;
template class GreedyBasisMap<RationalField>;

// ---- factories ----

namespace {
std::vector<ColVec<FpField>> fp_columns(const PrimeFieldMatrix& a) {
  std::vector<ColVec<FpField>> cols(a.n());
  for (std::uint32_t i = 0; i < a.n(); ++i) cols[i] = a.column(i);
  return cols;
}
std::vector<ColVec<RationalField>> rat_columns(const RealMatrix& a) {
  std::vector<ColVec<RationalField>> cols(a.n());
  for (std::uint32_t i = 0; i < a.n(); ++i) cols[i] = a.column(i);
  return cols;
}
}  // namespace

std::unique_ptr<ComposableMap> make_span_map(const PrimeFieldMatrix& a) {
  if (a.p() > 0xffffffffull) throw std::invalid_argument("span map encoding needs p < 2^32");
  return std::make_unique<SpanMap<FpField>>(a.field(), fp_columns(a), a.k());
}

std::unique_ptr<ComposableMap> make_span_map(const RealMatrix& a) {
  return std::make_unique<SpanMap<RationalField>>(RationalField{}, rat_columns(a), a.k());
}

std::unique_ptr<ComposableMap> make_greedy_basis_map(const PrimeFieldMatrix& a) {
  return std::make_unique<GreedyBasisMap<FpField>>(a.field(), fp_columns(a), a.k());
}

std::unique_ptr<ComposableMap> make_greedy_basis_map(const RealMatrix& a) {
  return std::make_unique<GreedyBasisMap<RationalField>>(RationalField{}, rat_columns(a), a.k());
}

namespace {
template <typename MatrixT>
BasisPool basis_pool_impl(const MatrixT& a, double qmin, double delta, BasisPoolKind kind) {
  std::unique_ptr<ComposableMap> map = kind == BasisPoolKind::kBasis
                                           ? make_span_map(a)
                                           : make_greedy_basis_map(a);
  CorePeeling peeling = peel(*map);
  DeterminingPool pool = pool_from_peeling(peeling, *map, qmin, delta, /*monotone=*/true);
  return BasisPool{std::move(pool.pool), kind, delta, pool.prefix_layers};
}

template <typename Field, typename MatrixT>
std::vector<PoolCheckCell> verify_linear_pool_impl(const Field& f, const MatrixT& a,
                                                   const BasisPool& pool,
                                                   const std::vector<KeySet>& masks,
                                                   const std::vector<double>& q_grid,
                                                   int trials, RngStream rng) {
  std::vector<ColVec<Field>> cols(a.n());
  for (std::uint32_t i = 0; i < a.n(); ++i) cols[i] = a.column(i);
  std::vector<PoolCheckCell> cells;
  std::uint64_t tag = 0;
  for (std::size_t mi = 0; mi < masks.size(); ++mi) {
    for (double q : q_grid) {
      RngStream cell_rng = rng.child(++tag);
      int failures = 0;
      for (int t = 0; t < trials; ++t) {
        KeySet u = sample_bernoulli_subset(a.n(), q, cell_rng);
        KeySet inside = u.set_intersect(pool.pool).set_union(masks[mi]);
        KeySet whole = u.set_union(masks[mi]);
        bool ok;
        if (pool.kind == BasisPoolKind::kBasis) {
          SpanBuilder<Field> span(f, a.k());
          for (Key x : inside.members()) span.add(cols[x]);
          int inner = span.rank();
          bool grew = false;
          for (Key x : whole.set_minus(inside).members()) {
            if (span.add(cols[x])) {
              grew = true;
              break;
            }
          }
          ok = !grew && inner == span.rank();
        } else {
          SpanBuilder<Field> span(f, a.k());
          ok = true;
          for (Key x : whole.members()) {
            if (span.add(cols[x]) && !inside.contains(x)) {
              ok = false;
              break;
            }
          }
        }
        if (!ok) ++failures;
      }
      cells.push_back({mi, q, static_cast<double>(failures) / trials});
    }
  }
  return cells;
}
}  // namespace

BasisPool basis_pool(const PrimeFieldMatrix& a, double qmin, double delta, BasisPoolKind kind) {
  return basis_pool_impl(a, qmin, delta, kind);
}
BasisPool basis_pool(const RealMatrix& a, double qmin, double delta, BasisPoolKind kind) {
  return basis_pool_impl(a, qmin, delta, kind);
}

std::vector<PoolCheckCell> verify_linear_pool(const PrimeFieldMatrix& a, const BasisPool& pool,
                                              const std::vector<KeySet>& masks,
                                              const std::vector<double>& q_grid, int trials,
                                              RngStream rng) {
  return verify_linear_pool_impl(a.field(), a, pool, masks, q_grid, trials, rng);
}

std::vector<PoolCheckCell> verify_linear_pool(const RealMatrix& a, const BasisPool& pool,
                                              const std::vector<KeySet>& masks,
                                              const std::vector<double>& q_grid, int trials,
                                              RngStream rng) {
  return verify_linear_pool_impl(RationalField{}, a, pool, masks, q_grid, trials, rng);
}

}  // namespace sketchlab
