#pragma once

#include <cstdint>
#include <stdexcept>

namespace sketchlab {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>((static_cast<__uint128_t>(a) * b) % p);
}

inline std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t p) {
  std::uint64_t acc = 1 % p;
  base %= p;
  while (exp) {
    if (exp & 1) acc = mulmod_u64(acc, base, p);
    base = mulmod_u64(base, base, p);
    exp >>= 1;
  }
  return acc;
}

// Deterministic Miller-Rabin for 64-bit inputs.
inline bool is_prime_u64(std::uint64_t x) {
  if (x < 2) return false;
  for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (x == q) return true;
    if (x % q == 0) return false;
  }
  std::uint64_t d = x - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t y = powmod_u64(a, d, x);
    if (y == 1 || y == x - 1) continue;
    bool witness = true;
    for (int i = 1; i < r; ++i) {
      y = mulmod_u64(y, y, x);
      if (y == x - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

// Arithmetic in F_p with residues stored as uint64.
class FpField {
 public:
  explicit FpField(std::uint64_t p) : p_(p) {
    if (!is_prime_u64(p)) throw std::invalid_argument("modulus is not prime");
  }

  using Element = std::uint64_t;

  std::uint64_t modulus() const { return p_; }
  Element zero() const { return 0; }
  Element one() const { return 1 % p_; }
  Element reduce(std::uint64_t v) const { return v % p_; }
  Element add(Element a, Element b) const { return (a + b) % p_; }
  Element sub(Element a, Element b) const { return (a + p_ - b) % p_; }
  Element mul(Element a, Element b) const { return mulmod_u64(a, b, p_); }
  Element neg(Element a) const { return a == 0 ? 0 : p_ - a; }
  Element inv(Element a) const {
    if (a == 0) throw std::domain_error("inverse of zero");
    return powmod_u64(a, p_ - 2, p_);
  }
  bool is_zero(Element a) const { return a == 0; }

 private:
  std::uint64_t p_;
};

}  // namespace sketchlab
