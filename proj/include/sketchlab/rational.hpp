#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "sketchlab/rng.hpp"

namespace sketchlab {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;
// 50 decimal digits, enough headroom to round logs to a 2^-128 grid.
using BigFloat = boost::multiprecision::cpp_bin_float_50;

// Exact field of rationals; mirrors the FpField interface for the templated
// elimination code.
class RationalField {
 public:
  using Element = BigRational;

  Element zero() const { return Element(0); }
  Element one() const { return Element(1); }
  Element add(const Element& a, const Element& b) const { return a + b; }
  Element sub(const Element& a, const Element& b) const { return a - b; }
  Element mul(const Element& a, const Element& b) const { return a * b; }
  Element neg(const Element& a) const { return -a; }
  Element inv(const Element& a) const {
    if (a == 0) throw std::domain_error("inverse of zero");
    return 1 / a;
  }
  bool is_zero(const Element& a) const { return a == 0; }
};

// Unit-mean exponential draw as an exact dyadic rational: the uniform input
// takes 128 random bits and -ln(u) is rounded to the 2^-128 grid.
BigRational sample_exp1_dyadic(RngStream& rng);

constexpr int kDyadicFractionBits = 128;

}  // namespace sketchlab
