#include "sketchlab/rate_distribution.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sketchlab {

ThresholdPair::ThresholdPair(std::int64_t a, std::int64_t b, std::uint32_t n)
    : a_count(a), b_count(b) {
  if (!(0 < a && a < b && b < static_cast<std::int64_t>(n))) {
    throw std::invalid_argument("thresholds must satisfy 0 < A < B < n");
  }
}

bool validate_rate_breakpoints(const ThresholdPair& t, std::int64_t pool_bound,
                               std::uint32_t n, double qmin, double q1,
                               double q2, double qmax, double min_separation,
                               std::string* diag) {
  std::ostringstream why;
  bool ok = true;
  auto require = [&](bool cond, const char* what) {
    if (!cond) {
      if (!why.str().empty()) why << "; ";
      why << what;
      ok = false;
    }
  };
  for (double q : {qmin, q1, q2, qmax}) {
    require(q > 0.0 && q < 1.0, "all rates must lie in (0,1)");
  }
  const double sep = min_separation;
  require(qmin + sep <= q1, "qmin < q1 violated (separation)");
  require(q1 + sep <= static_cast<double>(t.a_count - pool_bound) / n,
          "q1 < (A - |L|)/n violated");
  require(static_cast<double>(t.b_count) / n + sep <= q2, "B/n < q2 violated");
  require(q2 + sep <= qmax, "q2 < qmax violated");
  require(qmax + sep <= 1.0, "qmax < 1 violated");
  if (diag) *diag = ok ? "" : why.str();
  return ok;
}

namespace {

// Antiderivative of (q - c) / (q(1-q)) = -c/q + (1-c)/(1-q).
double ramp_primitive(double q, double c) {
  return -c * std::log(q) - (1.0 - c) * std::log(1.0 - q);
}

// Antiderivative of 1 / (q(1-q)).
double flat_primitive(double q) { return std::log(q) - std::log(1.0 - q); }

}  // namespace

RateDistribution::RateDistribution(double qmin, double q1, double q2,
                                   double qmax, double min_separation)
    : qmin_(qmin), q1_(q1), q2_(q2), qmax_(qmax) {
  if (!(0.0 < qmin && qmin < q1 && q1 < q2 && q2 < qmax && qmax < 1.0)) {
    throw std::invalid_argument("breakpoints must satisfy 0<qmin<q1<q2<qmax<1");
  }
  for (double gap : {q1 - qmin, q2 - q1, qmax - q2}) {
    if (gap < min_separation) {
      throw std::invalid_argument("breakpoint separation below minimum");
    }
  }
  c_nu_ = 1.0 / unnormalized_cdf(qmax_);

  inv_table_.resize(kTableKnots + 1);
  inv_table_[0] = qmin_;
  inv_table_[kTableKnots] = qmax_;
  for (int i = 1; i < kTableKnots; ++i) {
    const double target = static_cast<double>(i) / kTableKnots;
    double lo = qmin_, hi = qmax_;
    for (int it = 0; it < 64; ++it) {
      double mid = 0.5 * (lo + hi);
      (cdf(mid) < target ? lo : hi) = mid;
    }
    inv_table_[i] = 0.5 * (lo + hi);
  }
}

RateDistribution RateDistribution::epsilon_regime(const ThresholdPair& t,
                                                  std::uint32_t n,
                                                  double min_separation) {
  const double a = t.a_ratio(n), b = t.b_ratio(n);
  const double eps = b / a - 1.0;
  const double q1 = a - 2.0 * eps;
  const double q2 = b + 2.0 * eps;
  const double w = std::sqrt(eps);
  return RateDistribution(q1 - w, q1, q2, q2 + w, min_separation);
}

double RateDistribution::f(double q) const {
  if (q <= qmin_ || q >= qmax_) return 0.0;
  if (q <= q1_) return (q - qmin_) / (q1_ - qmin_);
  if (q <= q2_) return 1.0;
  return (qmax_ - q) / (qmax_ - q2_);
}

double RateDistribution::density(double q) const {
  return c_nu_ * f(q) / (q * (1.0 - q));
}

double RateDistribution::unnormalized_cdf(double q) const {
  if (q <= qmin_) return 0.0;
  double acc = 0.0;
  // ramp up: f = (q - qmin)/(q1 - qmin)
  {
    double hi = std::min(q, q1_);
    acc += (ramp_primitive(hi, qmin_) - ramp_primitive(qmin_, qmin_)) / (q1_ - qmin_);
    if (q <= q1_) return acc;
  }
  {
    double hi = std::min(q, q2_);
    acc += flat_primitive(hi) - flat_primitive(q1_);
    if (q <= q2_) return acc;
  }
  // ramp down: f = (qmax - q)/(qmax - q2); (d-q)/(q(1-q)) = d/q + (d-1)/(1-q)
  {
    double hi = std::min(q, qmax_);
    const double d = qmax_;
    auto prim = [&](double x) { return d * std::log(x) - (d - 1.0) * std::log(1.0 - x); };
    acc += (prim(hi) - prim(q2_)) / (qmax_ - q2_);
  }
  return acc;
}

double RateDistribution::cdf(double q) const { return c_nu_ * unnormalized_cdf(q); }

double RateDistribution::quantile(double u) const {
  if (u <= 0.0) return qmin_;
  if (u >= 1.0) return qmax_;
  const double pos = u * kTableKnots;
  const int i = static_cast<int>(pos);
  const double frac = pos - i;
  return inv_table_[i] * (1.0 - frac) + inv_table_[i + 1] * frac;
}

}  // namespace sketchlab
