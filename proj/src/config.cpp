#include "sketchlab/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "sketchlab/attack.hpp"

namespace sketchlab {

using nlohmann::json;

std::uint64_t ExperimentConfig::derived_rounds() const {
  if (rounds) return rounds;
  const double ln_n = std::ceil(std::log(static_cast<double>(n)));
  return static_cast<std::uint64_t>(static_cast<double>(pool_bound) * pool_bound * ln_n *
                                    r_multiplier);
}

std::string ExperimentConfig::to_json() const {
  json j;
  j["scenario"] = scenario;
  j["n"] = n;
  j["system"] = system;
  j["k"] = k;
  j["copies"] = copies;
  j["responder"] = responder;
  j["thresholds"] = {{"a", thresholds.a}, {"b", thresholds.b}};
  j["rates"] = {{"qmin", rates.qmin},
                {"q1", rates.q1},
                {"q2", rates.q2},
                {"qmax", rates.qmax},
                {"min_separation", rates.min_separation}};
  j["pool_bound"] = pool_bound;
  j["rounds"] = rounds;
  j["r_multiplier"] = r_multiplier;
  j["promotion_slack"] = promotion_slack;
  j["delta"] = delta;
  j["trials"] = trials;
  j["seed"] = seed;
  j["out_dir"] = out_dir;
  j["fp"] = {{"p", fp.p}, {"c_shift", fp.c_shift}};
  j["real"] = {{"c_const", real.c_const}, {"gamma", real.gamma}, {"mode", real.mode}};
  j["bool_density"] = bool_density;
  j["verify"] = {{"trials", verify.trials}, {"ell_override", verify.ell_override}};
  return j.dump(2);
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  json j = json::parse(text);
  ExperimentConfig c;
  auto get = [&](const char* key, auto& out) {
    if (j.contains(key)) out = j.at(key).get<std::decay_t<decltype(out)>>();
  };
  get("scenario", c.scenario);
  get("n", c.n);
  get("system", c.system);
  get("k", c.k);
  get("copies", c.copies);
  get("responder", c.responder);
  if (j.contains("thresholds")) {
    c.thresholds.a = j["thresholds"].value("a", c.thresholds.a);
    c.thresholds.b = j["thresholds"].value("b", c.thresholds.b);
  }
  if (j.contains("rates")) {
    const auto& r = j["rates"];
    c.rates.qmin = r.value("qmin", c.rates.qmin);
    c.rates.q1 = r.value("q1", c.rates.q1);
    c.rates.q2 = r.value("q2", c.rates.q2);
    c.rates.qmax = r.value("qmax", c.rates.qmax);
    c.rates.min_separation = r.value("min_separation", c.rates.min_separation);
  }
  get("pool_bound", c.pool_bound);
  get("rounds", c.rounds);
  get("r_multiplier", c.r_multiplier);
  get("promotion_slack", c.promotion_slack);
  get("delta", c.delta);
  get("trials", c.trials);
  get("seed", c.seed);
  get("out_dir", c.out_dir);
  if (j.contains("fp")) {
    c.fp.p = j["fp"].value("p", c.fp.p);
    c.fp.c_shift = j["fp"].value("c_shift", c.fp.c_shift);
  }
  if (j.contains("real")) {
    c.real.c_const = j["real"].value("c_const", c.real.c_const);
    c.real.gamma = j["real"].value("gamma", c.real.gamma);
    c.real.mode = j["real"].value("mode", c.real.mode);
  }
  get("bool_density", c.bool_density);
  if (j.contains("verify")) {
    c.verify.trials = j["verify"].value("trials", c.verify.trials);
    c.verify.ell_override = j["verify"].value("ell_override", c.verify.ell_override);
  }
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

void ExperimentConfig::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write config: " + path);
  out << to_json() << "\n";
}

std::uint64_t ExperimentConfig::hash() const {
  const std::string canon = to_json();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canon) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {
double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size();
  return m % 2 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}
}  // namespace

double RunRecord::median_error_fraction() const {
  std::vector<double> v;
  for (const auto& t : trials) v.push_back(t.error_fraction);
  return median_of(std::move(v));
}

double RunRecord::median_eta() const {
  std::vector<double> v;
  for (const auto& t : trials) v.push_back(t.eta_hat);
  return median_of(std::move(v));
}

std::string RunRecord::to_json(const ExperimentConfig& cfg) const {
  json j;
  j["config_hash"] = config_hash;
  j["scenario"] = cfg.scenario;
  json arr = json::array();
  for (const auto& t : trials) {
    arr.push_back({{"trial", t.trial},
                   {"rounds", t.rounds},
                   {"errors", t.errors},
                   {"error_fraction", t.error_fraction},
                   {"mask_size", t.mask_size},
                   {"eta_hat", t.eta_hat},
                   {"seconds", t.seconds}});
  }
  j["trials"] = arr;
  j["median_error_fraction"] = median_error_fraction();
  j["median_eta_hat"] = median_eta();
  return j.dump(2);
}

void write_round_csv(const std::string& path, const std::vector<RoundLogEntry>& log) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot write csv: " + path);
  std::fputs("t,q,setsize,masksize,z,err\n", f);
  for (const auto& e : log) {
    std::fprintf(f, "%llu,%.17g,%u,%u,%u,%u\n", static_cast<unsigned long long>(e.t), e.q,
                 e.set_size, e.mask_size, static_cast<unsigned>(e.z),
                 static_cast<unsigned>(e.err));
  }
  std::fclose(f);
}

}  // namespace sketchlab
