#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace sketchlab {

// Column vectors and exact elimination over an abstract field. Dimensions are
// small (k is the sketch size), so everything is dense and unblocked.

template <typename Field>
using ColVec = std::vector<typename Field::Element>;

// Incremental row-reduced basis of a growing set of vectors; supports rank
// queries and membership-in-span tests, all in exact field arithmetic.
template <typename Field>
class SpanBuilder {
 public:
  explicit SpanBuilder(const Field& f, int dim) : f_(f), dim_(dim), pivot_of_row_(dim, -1) {}

  int rank() const { return static_cast<int>(rows_.size()); }
  int dim() const { return dim_; }

  bool in_span(const ColVec<Field>& v) const {
    ColVec<Field> r = reduce(v);
    for (const auto& x : r) {
      if (!f_.is_zero(x)) return false;
    }
    return true;
  }

  // Residual of v after eliminating against the current basis.
  ColVec<Field> reduce(const ColVec<Field>& v) const {
    ColVec<Field> r = v;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const int piv = pivots_[i];
      if (f_.is_zero(r[piv])) continue;
      auto c = r[piv];
      for (int j = 0; j < dim_; ++j) {
        r[j] = f_.sub(r[j], f_.mul(c, rows_[i][j]));
      }
    }
    return r;
  }

  // Adds v if independent; returns true when the rank grew.
  bool add(const ColVec<Field>& v) {
    ColVec<Field> r = reduce(v);
    int piv = -1;
    for (int j = 0; j < dim_; ++j) {
      if (!f_.is_zero(r[j])) {
        piv = j;
        break;
      }
    }
    if (piv < 0) return false;
    auto inv = f_.inv(r[piv]);
    for (int j = 0; j < dim_; ++j) r[j] = f_.mul(r[j], inv);
    rows_.push_back(std::move(r));
    pivots_.push_back(piv);
    pivot_of_row_[piv] = static_cast<int>(rows_.size()) - 1;
    return true;
  }

 private:
  Field f_;
  int dim_;
  std::vector<ColVec<Field>> rows_;
  std::vector<int> pivots_;
  std::vector<int> pivot_of_row_;
};

// Indices selected by the left-to-right greedy independence scan; equal to
// the lexicographically first basis of the sequence.
template <typename Field>
std::vector<std::uint32_t> greedy_basis(const Field& f,
                                        const std::vector<ColVec<Field>>& columns,
                                        int dim) {
  SpanBuilder<Field> span(f, dim);
  std::vector<std::uint32_t> picked;
  for (std::uint32_t i = 0; i < columns.size(); ++i) {
    if (span.add(columns[i])) picked.push_back(i);
    if (span.rank() == dim) {
      // remaining columns are necessarily dependent
      break;
    }
  }
  return picked;
}

template <typename Field>
int rank_of_columns(const Field& f, const std::vector<ColVec<Field>>& columns, int dim) {
  SpanBuilder<Field> span(f, dim);
  for (const auto& c : columns) {
    span.add(c);
    if (span.rank() == dim) break;
  }
  return span.rank();
}

// Gauss-Jordan inverse of a dim x dim matrix given as columns. Throws on
// singular input.
template <typename Field>
std::vector<ColVec<Field>> invert_matrix(const Field& f,
                                         const std::vector<ColVec<Field>>& columns) {
  const int dim = static_cast<int>(columns.size());
  // augmented rows [A | I], row-major
  std::vector<std::vector<typename Field::Element>> rows(
      dim, std::vector<typename Field::Element>(2 * dim, f.zero()));
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) rows[r][c] = columns[c][r];
    rows[r][dim + r] = f.one();
  }
  for (int col = 0; col < dim; ++col) {
    int piv = -1;
    for (int r = col; r < dim; ++r) {
      if (!f.is_zero(rows[r][col])) {
        piv = r;
        break;
      }
    }
    if (piv < 0) throw std::domain_error("singular matrix");
    std::swap(rows[col], rows[piv]);
    auto inv = f.inv(rows[col][col]);
    for (int j = 0; j < 2 * dim; ++j) rows[col][j] = f.mul(rows[col][j], inv);
    for (int r = 0; r < dim; ++r) {
      if (r == col || f.is_zero(rows[r][col])) continue;
      auto c = rows[r][col];
      for (int j = 0; j < 2 * dim; ++j) {
        rows[r][j] = f.sub(rows[r][j], f.mul(c, rows[col][j]));
      }
    }
  }
  std::vector<ColVec<Field>> out(dim, ColVec<Field>(dim, f.zero()));
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) out[c][r] = rows[r][dim + c];
  }
  return out;
}

// Change-of-basis matrix F with F * basis[j] = e_j, built by extending the
// basis columns with standard-basis columns and inverting.
template <typename Field>
struct ChangeOfBasis {
  std::vector<std::uint32_t> basis_indices;
  std::vector<ColVec<Field>> matrix;  // dim x dim, stored as columns

  ColVec<Field> apply(const Field& f, const ColVec<Field>& v) const {
    const int dim = static_cast<int>(matrix.size());
    ColVec<Field> out(dim, f.zero());
    for (int c = 0; c < dim; ++c) {
      if (f.is_zero(v[c])) continue;
      for (int r = 0; r < dim; ++r) {
        out[r] = f.add(out[r], f.mul(matrix[c][r], v[c]));
      }
    }
    return out;
  }
};

template <typename Field>
ChangeOfBasis<Field> change_of_basis(const Field& f,
                                     const std::vector<ColVec<Field>>& all_columns,
                                     const std::vector<std::uint32_t>& basis_indices,
                                     int dim) {
  std::vector<ColVec<Field>> m;
  m.reserve(dim);
  SpanBuilder<Field> span(f, dim);
  for (std::uint32_t idx : basis_indices) {
    if (!span.add(all_columns[idx])) throw std::domain_error("basis indices not independent");
    m.push_back(all_columns[idx]);
  }
  for (int j = 0; j < dim && static_cast<int>(m.size()) < dim; ++j) {
    ColVec<Field> e(dim, f.zero());
    e[j] = f.one();
    if (span.add(e)) m.push_back(std::move(e));
  }
  ChangeOfBasis<Field> out;
  out.basis_indices = basis_indices;
  out.matrix = invert_matrix(f, m);
  // contract check: F * a^(b_j) = e_j, exactly
  for (std::size_t j = 0; j < basis_indices.size(); ++j) {
    ColVec<Field> img = out.apply(f, all_columns[basis_indices[j]]);
    for (int r = 0; r < dim; ++r) {
      const bool want_one = (r == static_cast<int>(j));
      if (want_one ? !(img[r] == f.one()) : !f.is_zero(img[r])) {
        throw std::logic_error("change of basis failed exactness check");
      }
    }
  }
  return out;
}

}  // namespace sketchlab
