// qemforge command line: simulate / decompose / cost / extrapolate / reproduce.
//
// Exit codes: 0 success, 2 configuration error, 3 runtime or integration
// error, 4 failed acceptance check in reproduce mode.

#include "qemforge/experiment.hpp"
#include "qemforge/reproduce.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitCheckFailed = 4;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw qemforge::ConfigError({"cannot open config file: " + path});
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cmd_simulate(const std::string& config_path, std::optional<std::uint64_t> seed,
                 const std::string& out_path) {
  const std::string text = read_file(config_path);
  qemforge::ExperimentConfig cfg = qemforge::parse_config(text);
  if (seed) {
    cfg.seed = *seed;
    cfg.seed_set = true;
  }
  const qemforge::ResultTable table = qemforge::run_experiment(cfg, text);
  const std::string target = !out_path.empty() ? out_path : cfg.output_path;
  if (!target.empty()) {
    qemforge::write_table(table, target);
    std::cout << "wrote " << table.rows.size() << " rows to " << target << "\n";
  } else {
    std::cout << qemforge::to_csv(table);
  }
  return 0;
}

int cmd_decompose(const std::string& preset, const std::vector<double>& rates,
                  int qubits, bool use_lp, double time_us) {
  const qemforge::NoiseModel est = qemforge::noise_presets(preset, rates, qubits);
  const auto decomps =
      qemforge::build_decomps(est, qubits, use_lp ? "lp" : "minimal");
  std::cout << "# generator: " << qemforge::kVersion << "\n";
  std::cout << "# preset: " << preset << ", qubits: " << qubits
            << ", decomposition: " << (use_lp ? "lp" : "minimal") << "\n";
  std::cout << "subsystem,profile,operation,id_a,id_b,q_per_us\n";
  for (std::size_t s = 0; s < decomps.size(); ++s) {
    const auto& d = decomps[s];
    std::string support = "q";
    for (std::size_t i = 0; i < d.support.size(); ++i)
      support += (i ? "q" : "") + std::to_string(d.support[i]);
    const std::string profile = d.profile.constant() ? "const" : "linear_t";
    std::cout << support << "," << profile << ",[I],0,-1," << qemforge::detail::fmt(d.q0)
              << "\n";
    for (const auto& e : d.entries)
      std::cout << support << "," << profile << "," << e.name << "," << e.id_a << ","
                << e.id_b << "," << qemforge::detail::fmt(e.q) << "\n";
  }
  const double rate_sum = qemforge::per_qubit_rate_sum(est, qubits);
  const auto cost = qemforge::cost_overhead(decomps, time_us, qubits, rate_sum);
  std::cout << "# C1_total_per_us: " << qemforge::detail::fmt(cost.c1_total) << "\n";
  std::cout << "# T_us: " << qemforge::detail::fmt(time_us) << "\n";
  std::cout << "# C1_integral: " << qemforge::detail::fmt(cost.c1_integral) << "\n";
  std::cout << "# C: " << qemforge::detail::fmt(cost.overhead_c) << "\n";
  std::cout << "# C2: " << qemforge::detail::fmt(cost.overhead_c2) << "\n";
  std::cout << "# mean_jumps: " << qemforge::detail::fmt(cost.mean_jumps) << "\n";
  return 0;
}

int cmd_cost(int qubits, const std::vector<double>& rates, double time_us,
             const std::string& preset, bool use_lp) {
  const qemforge::NoiseModel est = qemforge::noise_presets(preset, rates, qubits);
  const auto decomps = qemforge::build_decomps(est, qubits, use_lp ? "lp" : "minimal");
  const double rate_sum = qemforge::per_qubit_rate_sum(est, qubits);
  const auto cost = qemforge::cost_overhead(decomps, time_us, qubits, rate_sum);
  std::cout << "qubits,time_us,Lambda,C1_total,C1_integral,C,C2,mean_jumps\n";
  std::cout << qubits << "," << qemforge::detail::fmt(time_us) << ","
            << qemforge::detail::fmt(cost.total_noise_strength) << ","
            << qemforge::detail::fmt(cost.c1_total) << ","
            << qemforge::detail::fmt(cost.c1_integral) << ","
            << qemforge::detail::fmt(cost.overhead_c) << ","
            << qemforge::detail::fmt(cost.overhead_c2) << ","
            << qemforge::detail::fmt(cost.mean_jumps) << "\n";
  return 0;
}

int cmd_extrapolate(const std::vector<double>& nodes, const std::vector<double>& inputs,
                    const std::vector<double>& stderrs) {
  const auto res = qemforge::extrapolate(nodes, inputs, stderrs);
  std::cout << "node,beta,input\n";
  for (std::size_t j = 0; j < nodes.size(); ++j)
    std::cout << qemforge::detail::fmt(nodes[j]) << ","
              << qemforge::detail::fmt(res.beta[j]) << ","
              << qemforge::detail::fmt(inputs[j]) << "\n";
  std::cout << "# mean: " << qemforge::detail::fmt(res.mean) << "\n";
  std::cout << "# stderr: " << qemforge::detail::fmt(res.stderr_) << "\n";
  std::cout << "# gamma_amplification: " << qemforge::detail::fmt(res.gamma_amplification)
            << "\n";
  return 0;
}

int cmd_reproduce(const std::string& fig_id, const std::string& scale,
                  const std::string& out_dir) {
  const qemforge::ReproduceOutput out = qemforge::reproduce(fig_id, scale);
  std::filesystem::create_directories(out_dir);
  for (const auto& [name, table] : out.tables) {
    const std::string path = out_dir + "/" + name + ".csv";
    qemforge::write_table(table, path);
    std::cout << "wrote " << path << "\n";
  }
  for (const auto& note : out.notes) std::cout << "note: " << note << "\n";
  for (const auto& check : out.checks)
    std::cout << (check.passed ? "PASS" : "FAIL") << " " << check.name << " ("
              << check.detail << ")\n";
  return out.all_passed() ? 0 : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qemforge: continuous-time quasi-probability error mitigation toolkit"};
  app.require_subcommand(1);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "run an experiment from a config file");
  std::string config_path, out_path;
  std::uint64_t seed_value = 0;
  simulate->add_option("--config", config_path, "JSON experiment config")->required();
  auto* seed_opt = simulate->add_option("--seed", seed_value, "override the config seed");
  simulate->add_option("--out", out_path, "output CSV path (default: config 'output' or stdout)");

  // decompose
  auto* decompose = app.add_subcommand("decompose", "print a quasi-probability decomposition");
  std::string noise_preset = "relax_dephase";
  std::vector<double> rates;
  int qubits = 1;
  bool use_lp = false;
  double time_us = 1.0;
  decompose->add_option("--noise", noise_preset, "noise preset name")->required();
  decompose->add_option("--rates", rates, "preset rates, 1/us")->required()->delimiter(',');
  decompose->add_option("--qubits", qubits, "register size (default 1)");
  decompose->add_flag("--lp", use_lp, "one-norm-minimizing LP decomposition");
  decompose->add_option("--time", time_us, "horizon for the cost summary, us (default 1)");

  // cost
  auto* cost = app.add_subcommand("cost", "sampling-cost report for a noise model");
  int cost_qubits = 0;
  std::vector<double> cost_rates;
  double cost_time = 0.0;
  std::string cost_preset = "relax_dephase";
  bool cost_lp = false;
  cost->add_option("--qubits", cost_qubits, "register size")->required();
  cost->add_option("--rates", cost_rates, "preset rates, 1/us")->required()->delimiter(',');
  cost->add_option("--time", cost_time, "evolution time, us")->required();
  cost->add_option("--noise", cost_preset, "noise preset (default relax_dephase)");
  cost->add_flag("--lp", cost_lp, "one-norm-minimizing LP decomposition");

  // extrapolate
  auto* extrap = app.add_subcommand("extrapolate", "Richardson-extrapolate node estimates");
  std::vector<double> nodes, inputs, stderrs;
  extrap->add_option("--nodes", nodes, "boost factors r_j")->required()->delimiter(',');
  extrap->add_option("--inputs", inputs, "estimates at each node")->required()->delimiter(',');
  extrap->add_option("--stderrs", stderrs, "standard errors at each node")->delimiter(',');

  // reproduce
  auto* repro = app.add_subcommand("reproduce", "run a bundled figure recipe");
  std::string fig_id, scale = "small", out_dir = "reproduce_out";
  repro->add_option("figid", fig_id, "figure id")->required();
  repro->add_option("--scale", scale, "small | paper (default small)");
  repro->add_option("--out", out_dir, "output directory (default reproduce_out)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (simulate->parsed())
      return cmd_simulate(config_path,
                          seed_opt->count() ? std::optional<std::uint64_t>(seed_value)
                                            : std::nullopt,
                          out_path);
    if (decompose->parsed())
      return cmd_decompose(noise_preset, rates, qubits, use_lp, time_us);
    if (cost->parsed())
      return cmd_cost(cost_qubits, cost_rates, cost_time, cost_preset, cost_lp);
    if (extrap->parsed()) return cmd_extrapolate(nodes, inputs, stderrs);
    if (repro->parsed()) return cmd_reproduce(fig_id, scale, out_dir);
  } catch (const qemforge::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: invalid argument: " << e.what() << "\n";
    return kExitConfig;
  } catch (const qemforge::IntegrationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
