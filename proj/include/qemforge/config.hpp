#pragma once

// Experiment configuration: JSON document -> validated ExperimentConfig.
// Validation collects every violation before reporting; unknown keys are
// rejected to catch typos.

#include "qemforge/lindblad.hpp"

#include <json.hpp>

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace qemforge {

struct ConfigError : std::runtime_error {
  explicit ConfigError(std::vector<std::string> violations_in)
      : std::runtime_error(join(violations_in)), violations(std::move(violations_in)) {}

  std::vector<std::string> violations;

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out = "invalid configuration:";
    for (const auto& s : v) out += "\n  - " + s;
    return out;
  }
};

enum class Method { None, Stochastic, Richardson, Hybrid, ContinuousReference, InfiniteSample };

struct ModelConfig {
  std::string preset;  // heisenberg2d | tfim | j1j2 | cr_circuit
  int rows = 0;
  int cols = 0;
  int qubits = 0;
  double j = 0.0;
  double j2 = 0.0;
  double h = 0.0;
  double gamma_anis = 0.0;
  // circuit
  int depth = 0;
  double omega = 0.0;
  double gamma = 0.0;
  std::uint64_t circuit_seed = 0;
};

struct NoiseConfig {
  std::string preset;  // relax_dephase | lowfreq | none
  std::vector<double> rates;
};

struct RecoveryErrorConfig {
  double px = 0.0, py = 0.0, pz = 0.0;
  bool enabled = false;
};

struct ObservableConfig {
  std::string type = "nn_correlation";  // nn_correlation | nnn_correlation | fidelity
  double normalization = 1.0;
};

struct ExperimentConfig {
  ModelConfig model;
  NoiseConfig noise_exp;
  NoiseConfig noise_est;
  RecoveryErrorConfig recovery_error;
  ObservableConfig observable;
  Method method = Method::None;
  std::string method_name = "none";
  std::size_t num_samples = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::vector<double> times;       // us, strictly increasing, positive
  std::vector<double> nodes = {1.0};
  std::string decomposition = "minimal";  // minimal | lp
  double tolerance = 1e-10;
  double reference_dt = 0.0;       // continuous_reference step
  std::string output_path;
};

namespace detail {

inline void check_keys(const nlohmann::json& obj, const std::set<std::string>& allowed,
                       const std::string& where, std::vector<std::string>& errs) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) errs.push_back(where + ": unknown key '" + it.key() + "'");
}

inline bool require(const nlohmann::json& obj, const std::string& key,
                    const std::string& where, std::vector<std::string>& errs) {
  if (!obj.contains(key)) {
    errs.push_back(where + ": missing required key '" + key + "'");
    return false;
  }
  return true;
}

}  // namespace detail

inline ExperimentConfig parse_config(const std::string& text) {
  std::vector<std::string> errs;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError({std::string("JSON parse error: ") + e.what()});
  }
  if (!doc.is_object()) throw ConfigError({"top level must be a JSON object"});

  ExperimentConfig cfg;
  detail::check_keys(doc,
                     {"model", "noise_exp", "noise_est", "recovery_error", "observable",
                      "method", "num_samples", "seed", "time_grid", "times", "nodes",
                      "decomposition", "tolerance", "reference_dt", "output"},
                     "config", errs);

  // --- model ---
  if (detail::require(doc, "model", "config", errs)) {
    const auto& m = doc["model"];
    detail::check_keys(m,
                       {"preset", "rows", "cols", "qubits", "J", "J2", "h", "gamma_anis",
                        "depth", "omega", "gamma", "circuit_seed"},
                       "model", errs);
    if (detail::require(m, "preset", "model", errs)) cfg.model.preset = m["preset"];
    cfg.model.rows = m.value("rows", 0);
    cfg.model.cols = m.value("cols", 0);
    cfg.model.qubits = m.value("qubits", 0);
    cfg.model.j = m.value("J", 0.0);
    cfg.model.j2 = m.value("J2", 0.0);
    cfg.model.h = m.value("h", 0.0);
    cfg.model.gamma_anis = m.value("gamma_anis", 0.0);
    cfg.model.depth = m.value("depth", 0);
    cfg.model.omega = m.value("omega", 0.0);
    cfg.model.gamma = m.value("gamma", 0.0);
    cfg.model.circuit_seed = m.value("circuit_seed", 0ULL);
    const std::set<std::string> presets = {"heisenberg2d", "tfim", "j1j2", "cr_circuit"};
    if (!cfg.model.preset.empty() && !presets.count(cfg.model.preset))
      errs.push_back("model.preset: unknown preset '" + cfg.model.preset + "'");
    if (cfg.model.preset == "heisenberg2d" || cfg.model.preset == "j1j2") {
      if (cfg.model.rows < 1 || cfg.model.cols < 1 || cfg.model.rows * cfg.model.cols < 2)
        errs.push_back("model.rows/cols: lattice must have at least 2 sites");
    }
    if (cfg.model.preset == "tfim" && cfg.model.qubits < 2)
      errs.push_back("model.qubits: tfim needs at least 2 qubits");
    if (cfg.model.preset == "cr_circuit") {
      if (cfg.model.qubits < 2) errs.push_back("model.qubits: circuit needs at least 2 qubits");
      if (cfg.model.depth < 1) errs.push_back("model.depth: must be >= 1");
      if (cfg.model.omega <= 0.0) errs.push_back("model.omega: must be positive");
      if (cfg.model.gamma < 0.0) errs.push_back("model.gamma: must be nonnegative");
    }
  }

  // --- noise ---
  auto parse_noise = [&errs](const nlohmann::json& parent, const std::string& key) {
    NoiseConfig nc;
    nc.preset = "none";
    if (!parent.contains(key)) return nc;
    const auto& n = parent[key];
    detail::check_keys(n, {"preset", "rates"}, key, errs);
    if (detail::require(n, "preset", key, errs)) nc.preset = n["preset"];
    if (n.contains("rates")) nc.rates = n["rates"].get<std::vector<double>>();
    const std::set<std::string> presets = {"relax_dephase", "lowfreq", "none"};
    if (!presets.count(nc.preset))
      errs.push_back(key + ".preset: unknown noise preset '" + nc.preset + "'");
    for (std::size_t i = 0; i < nc.rates.size(); ++i)
      if (nc.rates[i] < 0.0)
        errs.push_back(key + ".rates[" + std::to_string(i) + "]: negative rate");
    if (nc.preset == "relax_dephase" && nc.rates.size() != 2)
      errs.push_back(key + ".rates: relax_dephase needs exactly 2 rates");
    if (nc.preset == "lowfreq" && nc.rates.size() != 1)
      errs.push_back(key + ".rates: lowfreq needs exactly 1 rate");
    return nc;
  };
  cfg.noise_exp = parse_noise(doc, "noise_exp");
  cfg.noise_est = parse_noise(doc, "noise_est");

  // --- recovery error ---
  if (doc.contains("recovery_error")) {
    const auto& r = doc["recovery_error"];
    detail::check_keys(r, {"px", "py", "pz"}, "recovery_error", errs);
    cfg.recovery_error.px = r.value("px", 0.0);
    cfg.recovery_error.py = r.value("py", 0.0);
    cfg.recovery_error.pz = r.value("pz", 0.0);
    cfg.recovery_error.enabled = true;
    if (cfg.recovery_error.px < 0.0 || cfg.recovery_error.py < 0.0 ||
        cfg.recovery_error.pz < 0.0 ||
        cfg.recovery_error.px + cfg.recovery_error.py + cfg.recovery_error.pz > 1.0)
      errs.push_back("recovery_error: probabilities must be nonnegative with sum <= 1");
  }

  // --- observable ---
  if (doc.contains("observable")) {
    const auto& o = doc["observable"];
    detail::check_keys(o, {"type", "normalization"}, "observable", errs);
    cfg.observable.type = o.value("type", "nn_correlation");
    cfg.observable.normalization = o.value("normalization", 1.0);
    const std::set<std::string> types = {"nn_correlation", "nnn_correlation", "fidelity"};
    if (!types.count(cfg.observable.type))
      errs.push_back("observable.type: unknown type '" + cfg.observable.type + "'");
    if (cfg.observable.normalization == 0.0)
      errs.push_back("observable.normalization: must be nonzero");
  }
  if (cfg.model.preset == "cr_circuit") cfg.observable.type = "fidelity";

  // --- method ---
  if (detail::require(doc, "method", "config", errs)) {
    cfg.method_name = doc["method"];
    if (cfg.method_name == "none") cfg.method = Method::None;
    else if (cfg.method_name == "stochastic") cfg.method = Method::Stochastic;
    else if (cfg.method_name == "richardson") cfg.method = Method::Richardson;
    else if (cfg.method_name == "hybrid") cfg.method = Method::Hybrid;
    else if (cfg.method_name == "continuous_reference") cfg.method = Method::ContinuousReference;
    else if (cfg.method_name == "infinite_sample") cfg.method = Method::InfiniteSample;
    else errs.push_back("method: unknown method '" + cfg.method_name + "'");
  }

  cfg.num_samples = doc.value("num_samples", 0ULL);
  if (doc.contains("seed")) {
    cfg.seed = doc["seed"].get<std::uint64_t>();
    cfg.seed_set = true;
  }
  const bool sampling = (cfg.method == Method::Stochastic || cfg.method == Method::Hybrid) &&
                        cfg.num_samples > 0;
  if (sampling && !cfg.seed_set) errs.push_back("seed: required for sampling methods");
  if (cfg.method == Method::Stochastic && cfg.num_samples == 0 &&
      cfg.model.preset == "cr_circuit")
    errs.push_back("num_samples: circuit stochastic runs need num_samples > 0");

  // --- time grid ---
  if (doc.contains("times")) {
    cfg.times = doc["times"].get<std::vector<double>>();
  } else if (doc.contains("time_grid")) {
    const auto& g = doc["time_grid"];
    detail::check_keys(g, {"t_end", "points"}, "time_grid", errs);
    const double t_end = g.value("t_end", 0.0);
    const int points = g.value("points", 0);
    if (t_end <= 0.0) errs.push_back("time_grid.t_end: must be positive");
    if (points < 1) errs.push_back("time_grid.points: must be >= 1");
    for (int i = 1; i <= points; ++i)
      cfg.times.push_back(t_end * static_cast<double>(i) / static_cast<double>(points));
  } else if (cfg.model.preset != "cr_circuit") {
    errs.push_back("config: one of 'times' or 'time_grid' is required");
  }
  for (std::size_t i = 0; i < cfg.times.size(); ++i) {
    if (cfg.times[i] <= 0.0) errs.push_back("times: entries must be positive");
    if (i > 0 && cfg.times[i] <= cfg.times[i - 1])
      errs.push_back("times: entries must be strictly increasing");
  }

  if (doc.contains("nodes")) {
    cfg.nodes = doc["nodes"].get<std::vector<double>>();
    if (cfg.nodes.empty() || cfg.nodes.size() > 5)
      errs.push_back("nodes: need between 1 and 5 boost factors");
    for (double r : cfg.nodes)
      if (r < 1.0) errs.push_back("nodes: boost factors must be >= 1");
  }
  if ((cfg.method == Method::Richardson || cfg.method == Method::Hybrid) &&
      cfg.nodes.size() < 2)
    errs.push_back("nodes: richardson/hybrid need at least 2 boost factors");

  cfg.decomposition = doc.value("decomposition", std::string("minimal"));
  if (cfg.decomposition != "minimal" && cfg.decomposition != "lp")
    errs.push_back("decomposition: must be 'minimal' or 'lp'");
  cfg.tolerance = doc.value("tolerance", 1e-10);
  if (cfg.tolerance <= 0.0) errs.push_back("tolerance: must be positive");
  cfg.reference_dt = doc.value("reference_dt", 0.0);
  if (cfg.method == Method::ContinuousReference && cfg.reference_dt <= 0.0)
    errs.push_back("reference_dt: required (positive) for continuous_reference");
  cfg.output_path = doc.value("output", std::string());

  if (!errs.empty()) throw ConfigError(std::move(errs));
  return cfg;
}

}  // namespace qemforge
