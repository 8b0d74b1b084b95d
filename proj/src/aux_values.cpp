#include "sketchlab/aux_values.hpp"

#include <cmath>
#include <stdexcept>

namespace sketchlab {

BigRational sample_exp1_dyadic(RngStream& rng) {
  // u uniform on (0,1] from 128 random bits, then -ln(u) rounded to the
  // 2^-128 grid; zero draws are clamped to the smallest representable u.
  BigInt u_bits = 0;
  for (int limb = 0; limb < 2; ++limb) {
    u_bits <<= 64;
    u_bits |= BigInt(rng());
  }
  if (u_bits == 0) u_bits = 1;
  const BigInt one_shifted = BigInt(1) << kDyadicFractionBits;
  BigFloat u = BigFloat(u_bits) / BigFloat(one_shifted);
  BigFloat m = -log(u);
  BigInt scaled = static_cast<BigInt>(boost::multiprecision::round(m * BigFloat(one_shifted)));
  return BigRational(scaled, one_shifted);
}

BigRational ScaledReal::to_rational(const BigInt& beta) const {
  if (beta_exp == 0) return mantissa;
  BigInt pow = 1;
  for (std::int64_t i = 0; i < (beta_exp > 0 ? beta_exp : -beta_exp); ++i) pow *= beta;
  return beta_exp > 0 ? mantissa * BigRational(pow) : mantissa / BigRational(pow);
}

RealAuxParams RealAuxParams::large_magnitude(double c_const, double gamma, std::uint32_t n,
                                             int k, double delta) {
  if (c_const < 8.0) throw std::invalid_argument("C must be >= 8");
  double b = c_const * gamma * n * std::log(n / delta) * k / delta;
  RealAuxParams p;
  p.beta = BigInt(static_cast<std::uint64_t>(std::ceil(b)));
  p.mode = RealAuxMode::kLargeMagnitude;
  return p;
}

RealAuxParams RealAuxParams::small_magnitude(double c_const, double gamma, std::uint32_t n,
                                             int k, double delta, double qmin) {
  if (c_const < 8.0) throw std::invalid_argument("C must be >= 8");
  double b = c_const * n * gamma * k / delta;
  RealAuxParams p;
  p.beta = BigInt(static_cast<std::uint64_t>(std::ceil(b)));
  p.mode = RealAuxMode::kSmallMagnitude;
  p.q0 = qmin / 2.0;
  return p;
}

FpQueryVector aux_fp(const KeySet& mask, const KeySet& u_minus_m, std::uint64_t p,
                     RngStream& rng) {
  if (!mask.set_intersect(u_minus_m).empty()) {
    throw std::invalid_argument("aux inputs must be disjoint");
  }
  FpQueryVector out;
  out.support = mask.set_union(u_minus_m);
  out.values.reserve(out.support.size());
  for (std::size_t i = 0; i < out.support.size(); ++i) {
    std::uint64_t v = rng.below(p);
    if (v == 0) out.has_sampled_zeros = true;
    out.values.push_back(v);
  }
  return out;
}

std::pair<std::int64_t, std::int64_t> shifted_thresholds_fp(std::int64_t a, std::int64_t b,
                                                            std::uint64_t p, std::uint32_t n,
                                                            double c) {
  const double ratio = static_cast<double>(p) / (p - 1);
  if (static_cast<double>(b) / n >= 1.0 / ratio) {
    throw std::invalid_argument("need B/n < (p-1)/p");
  }
  auto a_shift = static_cast<std::int64_t>(std::llround(ratio * a - c * n));
  auto b_shift = static_cast<std::int64_t>(std::llround(ratio * b + c * n));
  if (a_shift >= b_shift) throw std::invalid_argument("shifted thresholds collapse: A' >= B'");
  return {a_shift, b_shift};
}

RealQueryVector aux_real_large(const KeySet& mask, const KeySet& u_minus_m,
                               const RealAuxParams& params, RngStream& rng) {
  if (params.mode != RealAuxMode::kLargeMagnitude) {
    throw std::invalid_argument("params not in large-magnitude mode");
  }
  if (params.precision_bits < kDyadicFractionBits) {
    throw std::invalid_argument("precision budget below dyadic mantissa width");
  }
  RealQueryVector out;
  out.support = mask.set_union(u_minus_m);
  out.values.reserve(out.support.size());
  for (Key x : out.support.members()) {
    // 1-based key index in the exponent
    out.values.push_back(ScaledReal{sample_exp1_dyadic(rng), -(static_cast<std::int64_t>(x) + 1)});
  }
  return out;
}

std::pair<RealQueryVector, KeySet> aux_real_small(const KeySet& mask, const KeySet& u,
                                                  double q, const RealAuxParams& params,
                                                  RngStream& rng) {
  if (params.mode != RealAuxMode::kSmallMagnitude) {
    throw std::invalid_argument("params not in small-magnitude mode");
  }
  if (q < params.q0) throw std::invalid_argument("q below the subsample rate q0");
  const double thin = params.q0 / q;
  std::vector<Key> h_keys;
  for (Key x : u.members()) {
    if (rng.unit() < thin) h_keys.push_back(x);
  }
  KeySet h(std::move(h_keys));

  RealQueryVector out;
  out.support = u.set_union(mask);
  out.values.reserve(out.support.size());
  const KeySet large = h.set_union(mask);
  for (Key x : out.support.members()) {
    if (large.contains(x)) {
      out.values.push_back(ScaledReal{sample_exp1_dyadic(rng), +1});
    } else {
      out.values.push_back(ScaledReal{BigRational(1), 0});
    }
  }
  return {std::move(out), std::move(h)};
}

std::vector<std::uint64_t> sketch_vector(const PrimeFieldMatrix& a, const FpQueryVector& v) {
  if (!v.support.empty() && v.support.members().back() >= a.n()) {
    throw std::invalid_argument("query vector dimension mismatch");
  }
  std::vector<std::uint64_t> out(a.k(), 0);
  const auto& keys = v.support.members();
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const std::uint64_t val = v.values[i];
    if (val == 0) continue;
    for (int r = 0; r < a.k(); ++r) {
      out[r] = (out[r] + mulmod_u64(a.at(r, keys[i]), val, a.p())) % a.p();
    }
  }
  return out;
}

std::vector<BigRational> sketch_vector(const RealMatrix& a, const RealQueryVector& v,
                                       const BigInt& beta) {
  if (!v.support.empty() && v.support.members().back() >= a.n()) {
    throw std::invalid_argument("query vector dimension mismatch");
  }
  std::vector<BigRational> out(a.k(), BigRational(0));
  const auto& keys = v.support.members();
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const BigRational val = v.values[i].to_rational(beta);
    if (val == 0) continue;
    for (int r = 0; r < a.k(); ++r) {
      const BigRational& e = a.at(r, keys[i]);
      if (e != 0) out[r] += e * val;
    }
  }
  return out;
}

double log_magnitude_ratio(const RealQueryVector& v, const BigInt& beta) {
  const double log_beta = std::log(static_cast<double>(BigFloat(beta)));
  double lo = 0, hi = 0;
  bool any = false;
  for (const auto& s : v.values) {
    if (s.mantissa == 0) continue;
    double lg = std::log(std::abs(static_cast<double>(BigFloat(s.mantissa)))) +
                static_cast<double>(s.beta_exp) * log_beta;
    if (!any) {
      lo = hi = lg;
      any = true;
    } else {
      lo = std::min(lo, lg);
      hi = std::max(hi, lg);
    }
  }
  return any ? hi - lo : 0.0;
}

}  // namespace sketchlab
