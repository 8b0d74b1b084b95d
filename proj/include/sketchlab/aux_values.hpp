#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "sketchlab/keyset.hpp"
#include "sketchlab/matrices.hpp"
#include "sketchlab/rational.hpp"
#include "sketchlab/rng.hpp"

namespace sketchlab {

// Query vector over F_p: uniform values on the support, zeros retained and
// flagged.
struct FpQueryVector {
  KeySet support;
  std::vector<std::uint64_t> values;  // aligned with support.members()
  bool has_sampled_zeros = false;

  std::uint64_t l0_norm() const {
    std::uint64_t c = 0;
    for (auto v : values) c += v != 0;
    return c;
  }
};

// Real value in exponent-separated form: mantissa * beta^exponent.
struct ScaledReal {
  BigRational mantissa;
  std::int64_t beta_exp = 0;

  BigRational to_rational(const BigInt& beta) const;
};

struct RealQueryVector {
  KeySet support;
  std::vector<ScaledReal> values;
};

enum class RealAuxMode { kLargeMagnitude, kSmallMagnitude };

struct RealAuxParams {
  BigInt beta;
  RealAuxMode mode;
  double q0 = 0.0;           // subsample rate, small-magnitude mode
  int precision_bits = 128;  // dyadic mantissa resolution

  // beta = C * gamma * n * ln(n/delta) * k / delta
  static RealAuxParams large_magnitude(double c_const, double gamma, std::uint32_t n,
                                       int k, double delta);
  // beta = C * n * gamma * k / delta, q0 = qmin / 2
  static RealAuxParams small_magnitude(double c_const, double gamma, std::uint32_t n,
                                       int k, double delta, double qmin);
};

FpQueryVector aux_fp(const KeySet& mask, const KeySet& u_minus_m, std::uint64_t p,
                     RngStream& rng);

// QR-side thresholds for the F_p scheme: A' = p/(p-1) A - cn, B' = p/(p-1) B + cn.
std::pair<std::int64_t, std::int64_t> shifted_thresholds_fp(std::int64_t a, std::int64_t b,
                                                            std::uint64_t p, std::uint32_t n,
                                                            double c = 0.01);

// v_i ~ Exp(beta^-i) on the support (1-based key index in the exponent).
RealQueryVector aux_real_large(const KeySet& mask, const KeySet& u_minus_m,
                               const RealAuxParams& params, RngStream& rng);

// Subsamples H from U at rate q0/q so that marginally H ~ Bern[q0]; large keys
// (H and the mask) get Exp(beta) values, remaining support keys get exactly 1.
std::pair<RealQueryVector, KeySet> aux_real_small(const KeySet& mask, const KeySet& u,
                                                  double q, const RealAuxParams& params,
                                                  RngStream& rng);

// Exact sketch A*v over F_p.
std::vector<std::uint64_t> sketch_vector(const PrimeFieldMatrix& a, const FpQueryVector& v);
// Exact sketch A*v over the rationals (values expanded against beta).
std::vector<BigRational> sketch_vector(const RealMatrix& a, const RealQueryVector& v,
                                       const BigInt& beta);

// log(max |v_i|) - log(min nonzero |v_i|), natural log, for magnitude audits.
double log_magnitude_ratio(const RealQueryVector& v, const BigInt& beta);

}  // namespace sketchlab
