#include "qemforge/experiment.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace qemforge;

namespace {

std::string tfim_doc(const std::string& method, int samples) {
  nlohmann::json j;
  j["model"] = {{"preset", "tfim"}, {"qubits", 2}, {"J", 2.0}, {"h", 2.0}};
  j["noise_exp"] = {{"preset", "relax_dephase"}, {"rates", {0.04, 0.04}}};
  j["noise_est"] = {{"preset", "relax_dephase"}, {"rates", {0.04, 0.04}}};
  j["observable"] = {{"type", "nn_correlation"}, {"normalization", 1.0}};
  j["time_grid"] = {{"t_end", 1.0}, {"points", 2}};
  j["method"] = method;
  j["num_samples"] = samples;
  j["seed"] = 99;
  return j.dump();
}

std::vector<std::string> violations_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.violations;
  }
  return {};
}

bool mentions(const std::vector<std::string>& errs, const std::string& needle) {
  for (const auto& e : errs)
    if (e.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("a complete document parses") {
  const ExperimentConfig cfg = parse_config(tfim_doc("stochastic", 100));
  CHECK(cfg.model.preset == "tfim");
  CHECK(cfg.method == Method::Stochastic);
  CHECK(cfg.num_samples == 100);
  CHECK(cfg.seed == 99);
  REQUIRE(cfg.times.size() == 2);
  CHECK(cfg.times[1] == Catch::Approx(1.0));
}

TEST_CASE("empty document lists the required keys") {
  const auto errs = violations_of("{}");
  CHECK(mentions(errs, "model"));
  CHECK(mentions(errs, "method"));
  CHECK(mentions(errs, "time"));
}

TEST_CASE("negative rate names the offending field") {
  nlohmann::json j = nlohmann::json::parse(tfim_doc("none", 0));
  j["noise_exp"]["rates"] = {-0.1, 0.04};
  const auto errs = violations_of(j.dump());
  CHECK(mentions(errs, "noise_exp.rates[0]"));
}

TEST_CASE("unknown keys are rejected at every level") {
  nlohmann::json j = nlohmann::json::parse(tfim_doc("none", 0));
  j["typo_key"] = 1;
  j["model"]["bogus"] = 2;
  const auto errs = violations_of(j.dump());
  CHECK(mentions(errs, "typo_key"));
  CHECK(mentions(errs, "bogus"));
}

TEST_CASE("sampling methods require a seed") {
  nlohmann::json j = nlohmann::json::parse(tfim_doc("stochastic", 100));
  j.erase("seed");
  CHECK(mentions(violations_of(j.dump()), "seed"));
}

TEST_CASE("validation collects several violations at once") {
  nlohmann::json j = nlohmann::json::parse(tfim_doc("bogus_method", 0));
  j["noise_est"]["preset"] = "unknown_noise";
  j["nodes"] = {0.5};
  const auto errs = violations_of(j.dump());
  CHECK(errs.size() >= 3);
}

TEST_CASE("noise rates round-trip through the config format bit-exactly") {
  const double rate = 0.04 + 1e-17 + 0.0037219;
  nlohmann::json j = nlohmann::json::parse(tfim_doc("none", 0));
  j["noise_exp"]["rates"] = {rate, rate / 3.0};
  const ExperimentConfig cfg = parse_config(j.dump());
  CHECK(cfg.noise_exp.rates[0] == rate);
  CHECK(cfg.noise_exp.rates[1] == rate / 3.0);
}

TEST_CASE("CSV schema uses the fixed column header") {
  ResultTable table;
  table.metadata.push_back("note: test");
  ResultRow row;
  row.time_us = 0.5;
  row.method = "none";
  row.mean = 0.25;
  table.rows.push_back(row);
  const std::string csv = to_csv(table);
  CHECK(csv.find("# note: test\n") == 0);
  CHECK(csv.find("time_us,method,mean,stderr,fidelity,mean_jumps,C1_total,cost_C2\n") !=
        std::string::npos);
  CHECK(csv.find("0.5,none,0.25,0,0,0,0,1\n") != std::string::npos);
}

TEST_CASE("unmitigated run fills one row per time") {
  const std::string text = tfim_doc("none", 0);
  const ResultTable table = run_experiment(parse_config(text), text);
  REQUIRE(table.rows.size() == 2);
  CHECK(table.rows[0].method == "none");
  CHECK(table.rows[0].fidelity > 0.8);
  CHECK(table.rows[0].cost_c2 == 1.0);
}

TEST_CASE("infinite-sample mode with an exact model recovers the ideal curve") {
  const std::string text = tfim_doc("infinite_sample", 0);
  const ExperimentConfig cfg = parse_config(text);
  const ResultTable table = run_experiment(cfg, text);
  const detail::SpinContext ctx = detail::make_spin_context(cfg);
  for (std::size_t k = 0; k < table.rows.size(); ++k) {
    const double ideal =
        (ctx.ideal_psi[k].adjoint() * ctx.model.observable * ctx.ideal_psi[k])(0).real();
    CHECK(std::abs(table.rows[k].mean - ideal) < 1e-6);
    CHECK(table.rows[k].fidelity == Catch::Approx(1.0).margin(1e-6));
  }
}

TEST_CASE("identical seeds give byte-identical CSV output") {
  const std::string text = tfim_doc("stochastic", 500);
  const ExperimentConfig cfg = parse_config(text);
  const std::string a = to_csv(run_experiment(cfg, text));
  const std::string b = to_csv(run_experiment(cfg, text));
  CHECK(a == b);
}

TEST_CASE("continuous_reference requires a step size") {
  nlohmann::json j = nlohmann::json::parse(tfim_doc("continuous_reference", 0));
  CHECK(mentions(violations_of(j.dump()), "reference_dt"));
  j["reference_dt"] = 0.01;
  CHECK_NOTHROW(parse_config(j.dump()));
}
