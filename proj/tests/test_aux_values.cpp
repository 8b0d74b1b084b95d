#include <doctest.h>

#include <cmath>

#include "sketchlab/aux_values.hpp"
#include "sketchlab/query.hpp"

using namespace sketchlab;

TEST_CASE("aux_fp over F_2 produces fair bits on the support") {
  RngStream rng(61, 0);
  KeySet mask{0, 1};
  KeySet rest{2, 3, 4, 5, 6, 7};
  int ones = 0, total = 0;
  for (int i = 0; i < 20000; ++i) {
    FpQueryVector v = aux_fp(mask, rest, 2, rng);
    for (auto x : v.values) ones += x, ++total;
  }
  const double p = static_cast<double>(ones) / total;
  CHECK(std::abs(p - 0.5) < 4.0 / std::sqrt(4.0 * total));
}

TEST_CASE("aux_fp expected support sparsity is (p-1)/p of the query size") {
  RngStream rng(62, 0);
  const std::uint64_t p = 7;
  KeySet mask{1, 3};
  KeySet rest{0, 2, 5, 8, 13, 21, 34, 55};
  const double m = 10.0;
  double sum = 0;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) sum += aux_fp(mask, rest, p, rng).l0_norm();
  const double expect = (p - 1.0) / p * m;
  const double sigma = std::sqrt(m * (1.0 / p) * (1 - 1.0 / p) / draws);
  CHECK(std::abs(sum / draws - expect) < 3 * sigma);
}

TEST_CASE("aux_fp with empty support is the zero vector") {
  RngStream rng(63, 0);
  FpQueryVector v = aux_fp(KeySet{}, KeySet{}, 257, rng);
  CHECK(v.support.empty());
  CHECK(v.values.empty());
  CHECK(v.l0_norm() == 0);
}

TEST_CASE("aux_fp rejects overlapping inputs") {
  RngStream rng(64, 0);
  CHECK_THROWS(aux_fp(KeySet{1, 2}, KeySet{2, 3}, 5, rng));
}

TEST_CASE("shifted thresholds match the closed form") {
  auto [a2, b2] = shifted_thresholds_fp(300, 500, 2, 2000, 0.01);
  CHECK(a2 == 580);
  CHECK(b2 == 1020);

  // p -> infinity limit: A' -> A - cn, B' -> B + cn
  auto [a3, b3] = shifted_thresholds_fp(300, 500, 1000003, 2000, 0.01);
  CHECK(a3 == 300 - 20);
  CHECK(b3 == 500 + 20);

  // too-aggressive c collapses the pair
  CHECK_THROWS(shifted_thresholds_fp(300, 310, 2, 1000, 0.4));
  // B/n must stay below (p-1)/p
  CHECK_THROWS(shifted_thresholds_fp(300, 900, 2, 1000, 0.01));
}

TEST_CASE("dyadic exponential draws have unit mean and 2^-128 grained values") {
  RngStream rng(65, 0);
  double sum = 0;
  const int draws = 20000;
  for (int i = 0; i < draws; ++i) {
    BigRational m = sample_exp1_dyadic(rng);
    CHECK(m >= 0);
    // exact dyadic: denominator divides 2^128
    BigInt den = denominator(m);
    CHECK((BigInt(1) << kDyadicFractionBits) % den == 0);
    sum += static_cast<double>(BigFloat(m));
  }
  CHECK(std::abs(sum / draws - 1.0) < 4.0 / std::sqrt(static_cast<double>(draws)));
}

TEST_CASE("large-magnitude aux values scale as beta^-index and stay positive") {
  RealAuxParams params = RealAuxParams::large_magnitude(8.0, 2.0, 64, 4, 0.05);
  RngStream rng(66, 0);
  KeySet support_keys{0, 5, 20};
  double mantissa_sum_at_5 = 0;
  int count = 0;
  const int draws = 20000;
  for (int i = 0; i < draws; ++i) {
    RealQueryVector v = aux_real_large(KeySet{}, support_keys, params, rng);
    for (std::size_t j = 0; j < v.support.size(); ++j) {
      CHECK(v.values[j].mantissa > 0);
      CHECK(v.values[j].beta_exp == -(static_cast<std::int64_t>(v.support.members()[j]) + 1));
      if (v.support.members()[j] == 5) {
        mantissa_sum_at_5 += static_cast<double>(BigFloat(v.values[j].mantissa));
        ++count;
      }
    }
  }
  // E[v_i] = beta^-i means the mantissa is a unit-mean exponential
  CHECK(std::abs(mantissa_sum_at_5 / count - 1.0) < 4.0 / std::sqrt(static_cast<double>(count)));
}

TEST_CASE("large-magnitude log ratio obeys the n log(beta) envelope") {
  const std::uint32_t n = 48;
  RealAuxParams params = RealAuxParams::large_magnitude(8.0, 2.0, n, 4, 0.05);
  RngStream rng(67, 0);
  KeySet everything = KeySet::full(n);
  const double log_beta = std::log(static_cast<double>(BigFloat(params.beta)));
  for (int i = 0; i < 50; ++i) {
    RealQueryVector v = aux_real_large(KeySet{}, everything, params, rng);
    const double ratio = log_magnitude_ratio(v, params.beta);
    CHECK(ratio <= (n + 1) * log_beta);  // O(n log gamma-scale) envelope
    CHECK(ratio > (n - 2) * log_beta * 0.5);
  }
}

TEST_CASE("small-magnitude subsample keeps H = U at q = q0") {
  RealAuxParams params = RealAuxParams::small_magnitude(8.0, 2.0, 64, 4, 0.05, 0.2);
  RngStream rng(68, 0);
  KeySet u{1, 2, 3, 10, 20, 30};
  auto [v, h] = aux_real_small(KeySet{}, u, params.q0, params, rng);
  CHECK(h == u);
  CHECK_THROWS(aux_real_small(KeySet{}, u, params.q0 / 2, params, rng));
}

TEST_CASE("small-magnitude thinning matches binomial subsampling (chi-square)") {
  const std::uint32_t n = 512;
  const double q = 0.4;
  RealAuxParams params = RealAuxParams::small_magnitude(8.0, 2.0, n, 4, 0.05, 0.2);
  RngStream rng(69, 0);
  // conditioned on |U| = m, |H| should be Binomial(m, q0/q): chi-square over
  // pooled bins at fixed m
  const int draws = 4000;
  const double thin = params.q0 / q;
  double chi2 = 0;
  int bins = 0;
  std::vector<int> h_sizes;
  const KeySet u = sample_bernoulli_subset(n, q, rng);  // fix one U
  const int m = static_cast<int>(u.size());
  std::vector<int> counts(m + 1, 0);
  for (int i = 0; i < draws; ++i) {
    auto [v, h] = aux_real_small(KeySet{}, u, q, params, rng);
    counts[h.size()]++;
  }
  // pool into 8 quantile bins of the binomial
  const double mu = m * thin;
  const double sd = std::sqrt(m * thin * (1 - thin));
  std::vector<double> edges;
  for (int b = 1; b < 8; ++b) edges.push_back(mu + sd * (-2.1 + 0.6 * b));
  std::vector<double> observed(8, 0), expected(8, 0);
  auto binom_pmf = [&](int j) {
    double logp = std::lgamma(m + 1) - std::lgamma(j + 1) - std::lgamma(m - j + 1) +
                  j * std::log(thin) + (m - j) * std::log1p(-thin);
    return std::exp(logp);
  };
  for (int j = 0; j <= m; ++j) {
    int b = 0;
    while (b < 7 && j > edges[b]) ++b;
    observed[b] += counts[j];
    expected[b] += draws * binom_pmf(j);
  }
  for (int b = 0; b < 8; ++b) {
    if (expected[b] < 5) continue;
    chi2 += (observed[b] - expected[b]) * (observed[b] - expected[b]) / expected[b];
    ++bins;
  }
  // alpha = 0.001 for df <= 7 -> critical value 24.32
  CHECK(chi2 < 24.32);
  CHECK(bins >= 4);
}

TEST_CASE("small-magnitude values are units off the large keys and log ratio is tame") {
  const std::uint32_t n = 256;
  RealAuxParams params = RealAuxParams::small_magnitude(8.0, 2.0, n, 4, 0.05, 0.2);
  RngStream rng(70, 0);
  KeySet mask{0, 1, 2};
  KeySet u = sample_bernoulli_subset(n, 0.4, rng);
  auto [v, h] = aux_real_small(mask, u, 0.4, params, rng);
  const KeySet large = h.set_union(mask);
  for (std::size_t i = 0; i < v.support.size(); ++i) {
    const Key x = v.support.members()[i];
    if (large.contains(x)) {
      CHECK(v.values[i].beta_exp == 1);
    } else {
      CHECK(v.values[i].mantissa == BigRational(1));
      CHECK(v.values[i].beta_exp == 0);
    }
  }
  // O(log(n gamma)) bound: log(beta) + slack for the exponential tails
  const double log_beta = std::log(static_cast<double>(BigFloat(params.beta)));
  CHECK(log_magnitude_ratio(v, params.beta) <= log_beta + 3 * std::log(n));
}

TEST_CASE("real sketch_vector is exact for rational fixtures") {
  // A = [[1/2, 2, 0], [1, -1, 3]] and v = (1, 1, beta*EXP) checked against
  // a hand-expanded rational product with a stubbed mantissa
  std::vector<BigRational> e = {BigRational(1, 2), BigRational(2), BigRational(0),
                                BigRational(1), BigRational(-1), BigRational(3)};
  RealMatrix a(2, 3, e);
  RealQueryVector v;
  v.support = KeySet{0, 1, 2};
  v.values = {ScaledReal{BigRational(1), 0}, ScaledReal{BigRational(1), 0},
              ScaledReal{BigRational(3, 2), 1}};
  const BigInt beta = 10;
  auto s = sketch_vector(a, v, beta);
  CHECK(s[0] == BigRational(1, 2) + BigRational(2));
  CHECK(s[1] == BigRational(1) - BigRational(1) + BigRational(3) * BigRational(15));
}
