#include "sketchlab/matrices.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sketchlab {

PrimeFieldMatrix::PrimeFieldMatrix(std::uint64_t p, int k, std::uint32_t n,
                                   std::vector<std::uint64_t> entries)
    : p_(p), k_(k), n_(n), entries_(std::move(entries)), field_(p) {
  if (entries_.size() != static_cast<std::size_t>(k_) * n_) {
    throw std::invalid_argument("entry count mismatch");
  }
  for (auto& e : entries_) {
    if (e >= p_) throw std::invalid_argument("entry not reduced mod p");
  }
}

PrimeFieldMatrix PrimeFieldMatrix::random(std::uint64_t p, int k, std::uint32_t n,
                                          RngHandle rng) {
  RngStream s = rng.stream_for();
  std::vector<std::uint64_t> e(static_cast<std::size_t>(k) * n);
  for (auto& v : e) v = s.below(p);
  return PrimeFieldMatrix(p, k, n, std::move(e));
}

ColVec<FpField> PrimeFieldMatrix::column(std::uint32_t i) const {
  ColVec<FpField> c(k_);
  for (int r = 0; r < k_; ++r) c[r] = at(r, i);
  return c;
}

RealMatrix::RealMatrix(int k, std::uint32_t n, std::vector<BigRational> entries)
    : k_(k), n_(n), entries_(std::move(entries)) {
  if (entries_.size() != static_cast<std::size_t>(k_) * n_) {
    throw std::invalid_argument("entry count mismatch");
  }
}

RealMatrix RealMatrix::random_integer(int k, std::uint32_t n, int range, RngHandle rng) {
  RngStream s = rng.stream_for();
  std::vector<BigRational> e(static_cast<std::size_t>(k) * n);
  for (auto& v : e) {
    v = BigRational(static_cast<std::int64_t>(s.below(2 * range + 1)) - range);
  }
  return RealMatrix(k, n, std::move(e));
}

ColVec<RationalField> RealMatrix::column(std::uint32_t i) const {
  ColVec<RationalField> c(k_);
  for (int r = 0; r < k_; ++r) c[r] = at(r, i);
  return c;
}

void save_matrix(std::ostream& os, const PrimeFieldMatrix& m) {
  os << m.p() << " " << m.k() << " " << m.n() << "\n";
  for (int r = 0; r < m.k(); ++r) {
    for (std::uint32_t c = 0; c < m.n(); ++c) {
      os << m.at(r, c) << (c + 1 == m.n() ? "\n" : " ");
    }
  }
}

void save_matrix(std::ostream& os, const RealMatrix& m) {
  os << 0 << " " << m.k() << " " << m.n() << "\n";
  for (int r = 0; r < m.k(); ++r) {
    for (std::uint32_t c = 0; c < m.n(); ++c) {
      const BigRational& v = m.at(r, c);
      os << numerator(v);
      if (denominator(v) != 1) os << "/" << denominator(v);
      os << (c + 1 == m.n() ? "\n" : " ");
    }
  }
}

PrimeFieldMatrix load_fp_matrix(std::istream& is) {
  std::uint64_t p;
  int k;
  std::uint32_t n;
  if (!(is >> p >> k >> n)) throw std::runtime_error("bad matrix header");
  if (p == 0) throw std::runtime_error("expected prime-field matrix, got p=0");
  std::vector<std::uint64_t> e(static_cast<std::size_t>(k) * n);
  for (auto& v : e) {
    if (!(is >> v)) throw std::runtime_error("truncated matrix body");
  }
  return PrimeFieldMatrix(p, k, n, std::move(e));
}

RealMatrix load_real_matrix(std::istream& is) {
  std::uint64_t p;
  int k;
  std::uint32_t n;
  if (!(is >> p >> k >> n)) throw std::runtime_error("bad matrix header");
  if (p != 0) throw std::runtime_error("expected real matrix header p=0");
  std::vector<BigRational> e(static_cast<std::size_t>(k) * n);
  std::string tok;
  for (auto& v : e) {
    if (!(is >> tok)) throw std::runtime_error("truncated matrix body");
    auto slash = tok.find('/');
    if (slash == std::string::npos) {
      v = BigRational(BigInt(tok));
    } else {
      v = BigRational(BigInt(tok.substr(0, slash)), BigInt(tok.substr(slash + 1)));
    }
  }
  return RealMatrix(k, n, std::move(e));
}

namespace {

BigRational max_abs_entry_after_rotation(const RealMatrix& a,
                                         const std::vector<std::uint32_t>& basis) {
  RationalField f;
  std::vector<ColVec<RationalField>> cols(a.n());
  for (std::uint32_t i = 0; i < a.n(); ++i) cols[i] = a.column(i);
  auto fb = change_of_basis(f, cols, basis, a.k());
  BigRational best = 0;
  for (std::uint32_t i = 0; i < a.n(); ++i) {
    ColVec<RationalField> img = fb.apply(f, cols[i]);
    for (const auto& v : img) {
      BigRational av = v < 0 ? BigRational(-v) : v;
      if (av > best) best = av;
    }
  }
  return best;
}

}  // namespace

BigRational gamma0_estimate(const RealMatrix& a, int samples, RngStream rng) {
  RationalField f;
  std::vector<ColVec<RationalField>> cols(a.n());
  for (std::uint32_t i = 0; i < a.n(); ++i) cols[i] = a.column(i);
  const int rank = rank_of_columns(f, cols, a.k());
  BigRational best = 0;
  auto consider = [&](const std::vector<std::uint32_t>& basis) {
    if (static_cast<int>(basis.size()) != rank) return;
    BigRational v = max_abs_entry_after_rotation(a, basis);
    if (v > best) best = v;
  };

  if (a.n() <= 12) {
    // all independent column subsets of size == rank
    std::vector<std::uint32_t> idx(rank);
    std::vector<std::uint32_t> choice;
    auto rec = [&](auto&& self, std::uint32_t start) -> void {
      if (static_cast<int>(choice.size()) == rank) {
        std::vector<ColVec<RationalField>> sub;
        for (auto i : choice) sub.push_back(cols[i]);
        if (rank_of_columns(f, sub, a.k()) == rank) consider(choice);
        return;
      }
      for (std::uint32_t i = start; i < a.n(); ++i) {
        choice.push_back(i);
        self(self, i + 1);
        choice.pop_back();
      }
    };
    rec(rec, 0);
  } else {
    std::vector<std::uint32_t> order(a.n());
    std::iota(order.begin(), order.end(), 0u);
    for (int s = 0; s < samples; ++s) {
      for (std::uint32_t i = a.n(); i > 1; --i) {
        std::swap(order[i - 1], order[rng.below(i)]);
      }
      // greedy basis along the shuffled order
      SpanBuilder<RationalField> span(f, a.k());
      std::vector<std::uint32_t> basis;
      for (std::uint32_t i : order) {
        if (span.add(cols[i])) basis.push_back(i);
        if (span.rank() == rank) break;
      }
      std::sort(basis.begin(), basis.end());
      consider(basis);
    }
  }
  return best;
}

}  // namespace sketchlab
