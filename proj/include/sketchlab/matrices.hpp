#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sketchlab/fp.hpp"
#include "sketchlab/linalg.hpp"
#include "sketchlab/rational.hpp"
#include "sketchlab/rng.hpp"

namespace sketchlab {

// k x n sketching matrix over F_p, stored row-major.
class PrimeFieldMatrix {
 public:
  PrimeFieldMatrix(std::uint64_t p, int k, std::uint32_t n, std::vector<std::uint64_t> entries);
  static PrimeFieldMatrix random(std::uint64_t p, int k, std::uint32_t n, RngHandle rng);

  std::uint64_t p() const { return p_; }
  int k() const { return k_; }
  std::uint32_t n() const { return n_; }
  std::uint64_t at(int row, std::uint32_t col) const { return entries_[static_cast<std::size_t>(row) * n_ + col]; }
  ColVec<FpField> column(std::uint32_t i) const;
  const FpField& field() const { return field_; }

 private:
  std::uint64_t p_;
  int k_;
  std::uint32_t n_;
  std::vector<std::uint64_t> entries_;
  FpField field_;
};

// k x n matrix over exact rationals with an entry-magnitude certificate
// gamma0 for the attack parameterization.
class RealMatrix {
 public:
  RealMatrix(int k, std::uint32_t n, std::vector<BigRational> entries);
  // small random integer entries in [-range, range]
  static RealMatrix random_integer(int k, std::uint32_t n, int range, RngHandle rng);

  int k() const { return k_; }
  std::uint32_t n() const { return n_; }
  const BigRational& at(int row, std::uint32_t col) const {
    return entries_[static_cast<std::size_t>(row) * n_ + col];
  }
  ColVec<RationalField> column(std::uint32_t i) const;

 private:
  int k_;
  std::uint32_t n_;
  std::vector<BigRational> entries_;
};

// Text fixture format: header "p k n" (p = 0 for reals), then row-major
// entries; rational entries may be written as num/den.
void save_matrix(std::ostream& os, const PrimeFieldMatrix& m);
void save_matrix(std::ostream& os, const RealMatrix& m);
PrimeFieldMatrix load_fp_matrix(std::istream& is);
RealMatrix load_real_matrix(std::istream& is);

// Certified lower bound on gamma0(A): max |entry| of F_B * A over column
// bases B. Exhaustive over all column bases when n <= 12, otherwise sampled
// via greedy bases of random column orders.
BigRational gamma0_estimate(const RealMatrix& a, int samples, RngStream rng);

}  // namespace sketchlab
