#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sketchlab/rng.hpp"

namespace sketchlab {

// Soft threshold pair 0 < A < B < n.
struct ThresholdPair {
  std::int64_t a_count;
  std::int64_t b_count;

  ThresholdPair(std::int64_t a, std::int64_t b, std::uint32_t n);

  double a_ratio(std::uint32_t n) const { return static_cast<double>(a_count) / n; }
  double b_ratio(std::uint32_t n) const { return static_cast<double>(b_count) / n; }
};

// Checks the breakpoint inequalities qmin < q1 < (A-|L|)/n and
// B/n < q2 < qmax < 1, each by at least `min_separation`. On failure a
// diagnostic naming the violated inequality is written to *diag.
bool validate_rate_breakpoints(const ThresholdPair& thresholds,
                               std::int64_t pool_bound, std::uint32_t n,
                               double qmin, double q1, double q2, double qmax,
                               double min_separation = 0.02,
                               std::string* diag = nullptr);

// Rate density proportional to f(q)/(q(1-q)) with trapezoidal f supported on
// [qmin, qmax]. The CDF is closed-form; sampling goes through an inverse-CDF
// table with 2^12 knots and linear interpolation.
class RateDistribution {
 public:
  RateDistribution(double qmin, double q1, double q2, double qmax,
                   double min_separation = 0.02);

  // Preset from the small-epsilon regime: q1 = A/n - 2e, q2 = B/n + 2e,
  // q1 - qmin = qmax - q2 = sqrt(e) with e = B/A - 1.
  static RateDistribution epsilon_regime(const ThresholdPair& t, std::uint32_t n,
                                         double min_separation = 0.005);

  double qmin() const { return qmin_; }
  double q1() const { return q1_; }
  double q2() const { return q2_; }
  double qmax() const { return qmax_; }
  double normalizer() const { return c_nu_; }

  // Trapezoid f: 0 outside [qmin,qmax], linear ramps, 1 on [q1,q2].
  double f(double q) const;
  // Normalized density c_nu * f(q) / (q(1-q)).
  double density(double q) const;
  // Exact CDF (closed-form antiderivatives per piece).
  double cdf(double q) const;
  // Inverse CDF via the knot table.
  double quantile(double u) const;

  double sample(RngStream& rng) const { return quantile(rng.unit()); }

  static constexpr int kTableKnots = 1 << 12;

 private:
  double unnormalized_cdf(double q) const;

  double qmin_, q1_, q2_, qmax_;
  double c_nu_;
  std::vector<double> inv_table_;  // quantiles at u = i / kTableKnots
};

}  // namespace sketchlab
