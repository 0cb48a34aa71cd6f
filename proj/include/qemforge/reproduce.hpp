#pragma once

// Figure-reproduction recipes: bundled configurations for each benchmark
// panel, run at paper or desk ("small") scale, with per-figure sanity checks.

#include "qemforge/experiment.hpp"

namespace qemforge {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ReproduceOutput {
  std::vector<std::pair<std::string, ResultTable>> tables;  // (panel name, table)
  std::vector<CheckResult> checks;
  std::vector<std::string> notes;

  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

namespace detail {

inline constexpr double kTwoPi = 2.0 * M_PI;

inline nlohmann::json fig2_base(bool small) {
  nlohmann::json j;
  j["model"] = {{"preset", "heisenberg2d"}, {"rows", 2}, {"cols", 2},
                {"J", kTwoPi * 4.0}, {"h", kTwoPi * 4.0}, {"gamma_anis", 0.25}};
  j["noise_exp"] = {{"preset", "relax_dephase"}, {"rates", {0.044, 0.044}}};
  j["noise_est"] = {{"preset", "relax_dephase"}, {"rates", {0.04, 0.04}}};
  j["recovery_error"] = {{"px", 0.0025}, {"py", 0.0025}, {"pz", 0.005}};
  j["observable"] = {{"type", "nn_correlation"}, {"normalization", 4.0}};
  j["time_grid"] = {{"t_end", 2.0}, {"points", 8}};
  j["seed"] = 20240817;
  j["num_samples"] = small ? 20000 : 1000000;
  return j;
}

inline nlohmann::json fig2g_base(bool small) {
  nlohmann::json j;
  const int cols = small ? 3 : 4;
  j["model"] = {{"preset", "heisenberg2d"}, {"rows", 2}, {"cols", cols},
                {"J", kTwoPi * 4.0}, {"h", kTwoPi * 4.0}, {"gamma_anis", 0.25}};
  j["noise_exp"] = {{"preset", "relax_dephase"}, {"rates", {0.044, 0.044}}};
  j["noise_est"] = {{"preset", "relax_dephase"}, {"rates", {0.04, 0.04}}};
  j["observable"] = {{"type", "nn_correlation"},
                     {"normalization", static_cast<double>(cols == 3 ? 7 : 10)}};
  j["time_grid"] = {{"t_end", 2.0}, {"points", 8}};
  j["num_samples"] = 0;  // infinite-sample limit
  return j;
}

inline nlohmann::json fig3_base(bool small) {
  nlohmann::json j;
  j["model"] = {{"preset", "cr_circuit"}, {"qubits", 4}, {"depth", 5},
                {"omega", kTwoPi}, {"gamma", 0.01}, {"circuit_seed", 7}};
  j["noise_exp"] = {{"preset", "relax_dephase"}, {"rates", {0.04, 0.04}}};
  j["noise_est"] = {{"preset", "relax_dephase"}, {"rates", {0.04, 0.04}}};
  j["recovery_error"] = {{"px", 0.0025}, {"py", 0.0025}, {"pz", 0.005}};
  j["seed"] = 20240817;
  j["num_samples"] = small ? 2000 : 10000;
  return j;
}

inline nlohmann::json appE_ising_base(bool small) {
  nlohmann::json j;
  j["model"] = {{"preset", "tfim"}, {"qubits", 4},
                {"J", kTwoPi * 4.0}, {"h", kTwoPi * 4.0}};
  j["noise_exp"] = {{"preset", "relax_dephase"}, {"rates", {0.044, 0.044}}};
  j["noise_est"] = {{"preset", "relax_dephase"}, {"rates", {0.04, 0.04}}};
  j["recovery_error"] = {{"px", 0.0025}, {"py", 0.0025}, {"pz", 0.005}};
  j["observable"] = {{"type", "nnn_correlation"}, {"normalization", 2.0}};
  j["time_grid"] = {{"t_end", 2.0}, {"points", 8}};
  j["seed"] = 20240817;
  j["num_samples"] = small ? 20000 : 1000000;
  return j;
}

inline nlohmann::json appE_j1j2_base(bool small) {
  nlohmann::json j;
  j["model"] = {{"preset", "j1j2"}, {"rows", 2}, {"cols", 2},
                {"J", kTwoPi * 2.0}, {"J2", kTwoPi * 1.0}, {"h", kTwoPi * 2.0}};
  j["noise_exp"] = {{"preset", "relax_dephase"}, {"rates", {0.044, 0.044}}};
  j["noise_est"] = {{"preset", "relax_dephase"}, {"rates", {0.04, 0.04}}};
  j["recovery_error"] = {{"px", 0.0025}, {"py", 0.0025}, {"pz", 0.005}};
  j["observable"] = {{"type", "nn_correlation"}, {"normalization", 4.0}};
  j["time_grid"] = {{"t_end", 2.0}, {"points", 8}};
  j["seed"] = 20240817;
  j["num_samples"] = small ? 20000 : 1000000;
  return j;
}

inline nlohmann::json appF_base(bool /*small*/) {
  nlohmann::json j;
  // Rate profile g(t) = (2 lambda'^2) t with 2 lambda'^2 = 0.1 /us estimated
  // and a 20% over-strength experiment.
  j["model"] = {{"preset", "tfim"}, {"qubits", 2},
                {"J", kTwoPi * 3.0}, {"h", kTwoPi * 1.5}};
  j["noise_exp"] = {{"preset", "lowfreq"}, {"rates", {std::sqrt(0.06)}}};
  j["noise_est"] = {{"preset", "lowfreq"}, {"rates", {std::sqrt(0.05)}}};
  j["observable"] = {{"type", "nn_correlation"}, {"normalization", 1.0}};
  j["time_grid"] = {{"t_end", 2.0}, {"points", 8}};
  j["num_samples"] = 0;
  return j;
}

struct PanelRun {
  ExperimentConfig cfg;
  ResultTable table;
};

inline PanelRun run_panel(nlohmann::json j, const std::string& method,
                          const std::vector<double>& nodes = {}) {
  j["method"] = method;
  if (!nodes.empty()) j["nodes"] = nodes;
  const std::string text = j.dump();
  PanelRun run;
  run.cfg = parse_config(text);
  run.table = run_experiment(run.cfg, text);
  return run;
}

// Ideal observable curve on the config's time grid.
inline std::vector<double> ideal_curve(const ExperimentConfig& cfg) {
  const SpinContext ctx = make_spin_context(cfg);
  std::vector<double> out;
  for (const auto& psi : ctx.ideal_psi)
    out.push_back((psi.adjoint() * ctx.model.observable * psi)(0).real());
  return out;
}

inline double max_error(const ResultTable& table, const std::vector<double>& ideal) {
  double m = 0.0;
  for (std::size_t k = 0; k < table.rows.size(); ++k)
    m = std::max(m, std::abs(table.rows[k].mean - ideal[k]));
  return m;
}

inline CheckResult make_check(const std::string& name, bool passed, const std::string& detail) {
  return {name, passed, detail};
}

inline ResultTable cost_table(const std::string& kind, const std::vector<double>& lambdas,
                              int n, double l1, double l2) {
  const NoiseModel est = preset_relax_dephase(l1, l2, n);
  const auto decomps = build_decomps(est, n, kind);
  const double rate_sum = l1 + l2;
  ResultTable table;
  table.metadata.push_back(std::string("generator: ") + kVersion);
  table.metadata.push_back("method: cost_" + kind);
  table.metadata.push_back(
      "columns: time_us is the evolution time T; mean and cost_C2 are C^2(Lambda), "
      "Lambda = N T (lambda1 + lambda2)");
  for (double lam : lambdas) {
    const double t_end = lam / (n * rate_sum);
    const CostReport cost = cost_overhead(decomps, t_end, n, rate_sum);
    ResultRow row;
    row.time_us = t_end;
    row.method = "cost_" + kind;
    row.mean = cost.overhead_c2;
    row.mean_jumps = cost.mean_jumps;
    row.c1_total = cost.c1_total;
    row.cost_c2 = cost.overhead_c2;
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace detail

inline ReproduceOutput reproduce(const std::string& fig_id, const std::string& scale) {
  if (scale != "small" && scale != "paper")
    throw ConfigError({"scale: must be 'small' or 'paper'"});
  const bool small = scale == "small";
  ReproduceOutput out;
  auto note_scale = [&](const std::string& what) {
    if (small) out.notes.push_back("desk scale: " + what);
  };

  if (fig_id == "fig2") {
    auto base = detail::fig2_base(small);
    note_scale("num_samples reduced to 20000 (paper: 1e6)");
    auto noisy = detail::run_panel(base, "none");
    auto stoch = detail::run_panel(base, "stochastic");
    const auto ideal = detail::ideal_curve(noisy.cfg);
    const double e_noisy = detail::max_error(noisy.table, ideal);
    const double e_stoch = detail::max_error(stoch.table, ideal);
    out.checks.push_back(detail::make_check(
        "stochastic_reduces_error", e_stoch < e_noisy,
        "max|err| noisy=" + detail::fmt(e_noisy) + " stochastic=" + detail::fmt(e_stoch)));
    out.tables.emplace_back("fig2_none", std::move(noisy.table));
    out.tables.emplace_back("fig2_stochastic", std::move(stoch.table));
    return out;
  }

  if (fig_id == "fig2g") {
    auto base = detail::fig2g_base(small);
    note_scale("lattice reduced to 2x3 (paper: 2x4)");
    auto noisy = detail::run_panel(base, "none");
    auto stoch = detail::run_panel(base, "infinite_sample");
    auto hybrid = detail::run_panel(base, "hybrid", {1.0, 1.8});
    const auto ideal = detail::ideal_curve(noisy.cfg);
    const double e_noisy = detail::max_error(noisy.table, ideal);
    const double e_stoch = detail::max_error(stoch.table, ideal);
    const double e_hybrid = detail::max_error(hybrid.table, ideal);
    out.checks.push_back(detail::make_check(
        "stochastic_10x", e_stoch * 10.0 <= e_noisy,
        "max|err| noisy=" + detail::fmt(e_noisy) + " stochastic=" + detail::fmt(e_stoch)));
    out.checks.push_back(detail::make_check(
        "hybrid_further_10x", e_hybrid * 10.0 <= e_stoch,
        "max|err| stochastic=" + detail::fmt(e_stoch) + " hybrid=" + detail::fmt(e_hybrid)));
    out.tables.emplace_back("fig2g_none", std::move(noisy.table));
    out.tables.emplace_back("fig2g_infinite_sample", std::move(stoch.table));
    out.tables.emplace_back("fig2g_hybrid", std::move(hybrid.table));
    return out;
  }

  if (fig_id == "fig3") {
    auto base = detail::fig3_base(small);
    note_scale("num_samples reduced to 2000 (paper-scale run: 1e4)");
    auto noisy = detail::run_panel(base, "none");
    auto stoch = detail::run_panel(base, "stochastic");
    const double inf_noisy = 1.0 - noisy.table.rows.back().mean;
    const double inf_stoch = 1.0 - stoch.table.rows.back().mean;
    out.checks.push_back(detail::make_check(
        "mitigated_infidelity_lower", inf_stoch < inf_noisy,
        "depth-5 infidelity noisy=" + detail::fmt(inf_noisy) +
            " mitigated=" + detail::fmt(inf_stoch)));
    out.tables.emplace_back("fig3_none", std::move(noisy.table));
    out.tables.emplace_back("fig3_stochastic", std::move(stoch.table));
    return out;
  }

  if (fig_id == "fig4") {
    std::vector<double> lambdas;
    for (double lam = 0.25; lam <= 3.0 + 1e-9; lam += 0.25) lambdas.push_back(lam);
    auto minimal = detail::cost_table("minimal", lambdas, 4, 0.04, 0.04);
    auto lp = detail::cost_table("lp", lambdas, 4, 0.04, 0.04);
    // C^2 at Lambda = 1 (4th grid entry).
    const std::size_t idx1 = 3;
    const double c2_min = minimal.rows[idx1].cost_c2;
    const double c2_lp = lp.rows[idx1].cost_c2;
    out.notes.push_back("reference value from the source experiments: C^2(Lambda=1) = 30; "
                        "the decomposition basis behind it is unstated, so only the ordering "
                        "and exponential shape are gated");
    out.checks.push_back(detail::make_check(
        "lp_not_worse", c2_lp <= c2_min + 1e-9,
        "C^2(Lambda=1) minimal=" + detail::fmt(c2_min) + " lp=" + detail::fmt(c2_lp)));
    // log C^2 linear in Lambda (exact for C = exp(C1 T)): R^2 of a linear fit.
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    const auto m = static_cast<double>(lambdas.size());
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      const double x = lambdas[i], y = std::log(minimal.rows[i].cost_c2);
      sx += x; sy += y; sxx += x * x; sxy += x * y; syy += y * y;
    }
    const double cov = sxy - sx * sy / m;
    const double vx = sxx - sx * sx / m, vy = syy - sy * sy / m;
    const double r2 = vy > 0.0 ? cov * cov / (vx * vy) : 1.0;
    out.checks.push_back(detail::make_check("log_cost_linear", r2 >= 0.999,
                                            "R^2=" + detail::fmt(r2)));
    out.tables.emplace_back("fig4_cost_minimal", std::move(minimal));
    out.tables.emplace_back("fig4_cost_lp", std::move(lp));
    return out;
  }

  if (fig_id == "appE_ising" || fig_id == "appE_j1j2") {
    auto base = fig_id == "appE_ising" ? detail::appE_ising_base(small)
                                       : detail::appE_j1j2_base(small);
    note_scale("num_samples reduced to 20000 (paper: 1e6)");
    auto noisy = detail::run_panel(base, "none");
    auto stoch = detail::run_panel(base, "stochastic");
    const auto ideal = detail::ideal_curve(noisy.cfg);
    const double e_noisy = detail::max_error(noisy.table, ideal);
    const double e_stoch = detail::max_error(stoch.table, ideal);
    out.checks.push_back(detail::make_check(
        "stochastic_reduces_error", e_stoch < e_noisy,
        "max|err| noisy=" + detail::fmt(e_noisy) + " stochastic=" + detail::fmt(e_stoch)));
    out.tables.emplace_back(fig_id + "_none", std::move(noisy.table));
    out.tables.emplace_back(fig_id + "_stochastic", std::move(stoch.table));
    return out;
  }

  if (fig_id == "appF") {
    auto base = detail::appF_base(small);
    auto noisy = detail::run_panel(base, "none");
    auto stoch = detail::run_panel(base, "infinite_sample");
    auto hybrid = detail::run_panel(base, "hybrid", {1.0, 1.5});
    const auto ideal = detail::ideal_curve(noisy.cfg);
    const double e_stoch_final =
        std::abs(stoch.table.rows.back().mean - ideal.back());
    const double e_hybrid_final =
        std::abs(hybrid.table.rows.back().mean - ideal.back());
    out.checks.push_back(detail::make_check(
        "hybrid_not_worse_at_final_time", e_hybrid_final <= e_stoch_final,
        "final-time |err| stochastic=" + detail::fmt(e_stoch_final) +
            " hybrid=" + detail::fmt(e_hybrid_final)));
    out.tables.emplace_back("appF_none", std::move(noisy.table));
    out.tables.emplace_back("appF_infinite_sample", std::move(stoch.table));
    out.tables.emplace_back("appF_hybrid", std::move(hybrid.table));
    return out;
  }

  throw ConfigError({"unknown figure id: " + fig_id +
                     " (known: fig2, fig2g, fig3, fig4, appE_ising, appE_j1j2, appF)"});
}

}  // namespace qemforge
