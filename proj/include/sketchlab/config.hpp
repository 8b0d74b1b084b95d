#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sketchlab {

struct RateConfig {
  double qmin = 0.10;
  double q1 = 0.20;
  double q2 = 0.55;
  double qmax = 0.70;
  double min_separation = 0.02;
};

struct ThresholdConfig {
  std::int64_t a = 0;  // 0 -> 0.3 * n
  std::int64_t b = 0;  // 0 -> 0.5 * n
};

struct FpConfig {
  std::uint64_t p = 257;
  double c_shift = 0.01;
};

struct RealConfig {
  double c_const = 8.0;
  double gamma = 0.0;  // 0 -> certified estimate from the matrix
  std::string mode = "small";
};

struct VerifyConfig {
  int trials = 10000;
  int ell_override = 0;  // 0 -> formula value; used for truncation fixtures
};

// Single-file experiment description; round-trips losslessly through JSON.
struct ExperimentConfig {
  std::string scenario = "default";
  std::uint32_t n = 2048;
  std::string system = "bottomk-wrapper";
  int k = 8;
  int copies = 8;
  std::string responder = "random-copy-wrapper";
  ThresholdConfig thresholds;
  RateConfig rates;
  std::int64_t pool_bound = 128;
  std::uint64_t rounds = 0;  // 0 -> pool_bound^2 * ceil(ln n) * r_multiplier
  double r_multiplier = 1.0;
  double promotion_slack = 16.0;
  double delta = 0.01;
  int trials = 10;
  std::uint64_t seed = 20250810;
  std::string out_dir = "out";
  FpConfig fp;
  RealConfig real;
  double bool_density = 0.05;
  VerifyConfig verify;

  std::int64_t threshold_a() const {
    return thresholds.a ? thresholds.a : static_cast<std::int64_t>(0.3 * n);
  }
  std::int64_t threshold_b() const {
    return thresholds.b ? thresholds.b : static_cast<std::int64_t>(0.5 * n);
  }
  std::uint64_t derived_rounds() const;

  std::string to_json() const;
  static ExperimentConfig from_json(const std::string& text);
  static ExperimentConfig load(const std::string& path);
  void save(const std::string& path) const;

  // FNV-1a over the canonical JSON serialization; binds records to inputs.
  std::uint64_t hash() const;
};

struct TrialSummary {
  int trial = 0;
  std::uint64_t rounds = 0;
  std::uint64_t errors = 0;
  double error_fraction = 0.0;
  std::size_t mask_size = 0;
  double eta_hat = 0.0;
  double seconds = 0.0;
};

struct RunRecord {
  std::uint64_t config_hash = 0;
  std::vector<TrialSummary> trials;

  double median_error_fraction() const;
  double median_eta() const;
  std::string to_json(const ExperimentConfig& cfg) const;
};

// Per-round CSV with the stable header t,q,setsize,masksize,z,err.
struct RoundLogEntry;
void write_round_csv(const std::string& path, const std::vector<RoundLogEntry>& log);

}  // namespace sketchlab
