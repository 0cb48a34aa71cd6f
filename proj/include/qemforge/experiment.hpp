#pragma once

// Experiment orchestration: dispatch a validated configuration to the
// simulation engines, collect one result row per (time, method), and format
// the CSV output (metadata comment block + fixed column schema).

#include "qemforge/config.hpp"
#include "qemforge/decomp.hpp"
#include "qemforge/extrapolation.hpp"
#include "qemforge/models.hpp"
#include "qemforge/stochastic.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

namespace qemforge {

inline constexpr const char* kVersion = "qemforge 0.1.0";

struct ResultRow {
  double time_us = 0.0;
  std::string method;
  double mean = 0.0;
  double stderr_ = 0.0;
  double fidelity = 0.0;
  double mean_jumps = 0.0;
  double c1_total = 0.0;
  double cost_c2 = 1.0;
};

struct ResultTable {
  std::vector<std::string> metadata;  // emitted as '# ...' comment lines
  std::vector<ResultRow> rows;
};

namespace detail {

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace detail

inline std::string to_csv(const ResultTable& table) {
  std::string out;
  for (const auto& line : table.metadata) out += "# " + line + "\n";
  out += "time_us,method,mean,stderr,fidelity,mean_jumps,C1_total,cost_C2\n";
  for (const auto& r : table.rows) {
    out += detail::fmt(r.time_us) + "," + r.method + "," + detail::fmt(r.mean) + "," +
           detail::fmt(r.stderr_) + "," + detail::fmt(r.fidelity) + "," +
           detail::fmt(r.mean_jumps) + "," + detail::fmt(r.c1_total) + "," +
           detail::fmt(r.cost_c2) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Model assembly
// ---------------------------------------------------------------------------

inline NoiseModel build_noise(const NoiseConfig& nc, int n) {
  if (nc.preset == "none" || nc.preset.empty()) return NoiseModel{};
  return noise_presets(nc.preset, nc.rates, n);
}

struct SpinModel {
  int n = 0;
  HamiltonianSpec h;
  DensityState initial;
  Matrix observable;
  LatticeSpec lattice;
};

inline SpinModel build_spin_model(const ExperimentConfig& cfg) {
  const auto& m = cfg.model;
  SpinModel model;
  if (m.preset == "heisenberg2d") {
    model.lattice = LatticeSpec::grid(m.rows, m.cols);
    model.n = model.lattice.num_sites();
    model.h = build_heisenberg2d(m.j, m.h, m.gamma_anis, model.lattice);
  } else if (m.preset == "tfim") {
    model.lattice = LatticeSpec::chain(m.qubits);
    model.n = m.qubits;
    model.h = build_tfim(m.j, m.h, m.qubits);
  } else if (m.preset == "j1j2") {
    model.lattice = m.rows == 1 || m.cols == 1
                        ? LatticeSpec::chain(m.rows * m.cols)
                        : LatticeSpec::grid(m.rows, m.cols);
    model.n = model.lattice.num_sites();
    model.h = build_j1j2(m.j, m.j2, m.h, model.lattice);
  } else {
    throw std::invalid_argument("not a spin-model preset: " + m.preset);
  }
  model.initial = DensityState::plus_state(model.n);
  const PauliSum obs = cfg.observable.type == "nnn_correlation"
                           ? observable_nnn_correlation(model.lattice, cfg.observable.normalization)
                           : observable_nn_correlation(model.lattice, cfg.observable.normalization);
  model.observable = obs.matrix();
  return model;
}

inline std::vector<QuasiDecomposition> build_decomps(const NoiseModel& est, int n,
                                                     const std::string& kind) {
  const RecoveryGenerator gen = recovery_generator(est, n);
  std::vector<QuasiDecomposition> out;
  out.reserve(gen.subsystems.size());
  if (kind == "lp") {
    const auto extra = overcomplete_extra_basis();
    for (const auto& sub : gen.subsystems) out.push_back(decompose_lp(sub, extra));
  } else {
    for (const auto& sub : gen.subsystems) out.push_back(decompose_minimal(sub));
  }
  return out;
}

inline double per_qubit_rate_sum(const NoiseModel& noise, int n) {
  double acc = 0.0;
  for (const auto& t : noise.terms) acc += t.rate;
  return n > 0 ? acc / n : 0.0;
}

inline bool has_linear_profile(const NoiseModel& noise) {
  for (const auto& t : noise.terms)
    if (!t.profile.constant()) return true;
  return false;
}

// Integrate a generator once over [0, max grid time], visiting the state at
// each grid point.
inline void evolve_on_grid(const Generator& gen, Matrix rho, const std::vector<double>& times,
                           double tol, const std::function<void(std::size_t, const Matrix&)>& visit) {
  double t = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    integrate_dopri5([&gen](double tt, const Matrix& y) { return gen.rhs(tt, y); }, rho, t,
                     times[k], tol, std::numeric_limits<double>::infinity());
    t = times[k];
    visit(k, rho);
  }
}

// Schroedinger evolution of a pure state on the grid (ideal reference).
inline void evolve_psi_on_grid(const HamiltonianSpec& h, Vector psi,
                               const std::vector<double>& times, double tol,
                               const std::function<void(std::size_t, const Vector&)>& visit) {
  const Matrix hbase = h.base_matrix();
  Matrix y = psi;
  double t = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    integrate_dopri5(
        [&](double tt, const Matrix& v) { return Matrix(-kI * h.multiplier(tt) * (hbase * v)); },
        y, t, times[k], tol, std::numeric_limits<double>::infinity());
    t = times[k];
    visit(k, Vector(y.col(0)));
  }
}

// ---------------------------------------------------------------------------
// Spin-model experiment paths
// ---------------------------------------------------------------------------

namespace detail {

struct SpinContext {
  SpinModel model;
  NoiseModel noise_exp;
  NoiseModel noise_est;
  std::vector<QuasiDecomposition> decomps;
  std::vector<Vector> ideal_psi;  // per grid time
  double rate_sum = 0.0;          // per-qubit experimental rate sum
};

inline SpinContext make_spin_context(const ExperimentConfig& cfg) {
  SpinContext ctx;
  ctx.model = build_spin_model(cfg);
  ctx.noise_exp = build_noise(cfg.noise_exp, ctx.model.n);
  ctx.noise_est = build_noise(cfg.noise_est, ctx.model.n);
  ctx.noise_exp.validate(ctx.model.n);
  ctx.noise_est.validate(ctx.model.n);
  if (!ctx.noise_est.empty())
    ctx.decomps = build_decomps(ctx.noise_est, ctx.model.n, cfg.decomposition);
  ctx.rate_sum = per_qubit_rate_sum(ctx.noise_exp, ctx.model.n);
  Vector psi0 = Vector::Constant(pow2(ctx.model.n),
                                 1.0 / std::sqrt(static_cast<double>(pow2(ctx.model.n))));
  ctx.ideal_psi.resize(cfg.times.size());
  evolve_psi_on_grid(ctx.model.h, psi0, cfg.times, cfg.tolerance,
                     [&](std::size_t k, const Vector& psi) { ctx.ideal_psi[k] = psi; });
  return ctx;
}

inline ResultRow base_row(const ExperimentConfig& cfg, const SpinContext& ctx,
                          std::size_t k) {
  ResultRow row;
  row.time_us = cfg.times[k];
  row.method = cfg.method_name;
  const CostReport cost =
      cost_overhead(ctx.decomps, cfg.times[k], ctx.model.n, ctx.rate_sum);
  row.c1_total = cost.c1_total;
  row.cost_c2 = cost.overhead_c2;
  row.mean_jumps = cost.mean_jumps;
  return row;
}

inline void run_spin_none(const ExperimentConfig& cfg, const SpinContext& ctx,
                          ResultTable& table) {
  Generator gen(ctx.model.h, ctx.noise_exp, LindbladConvention::Gksl);
  evolve_on_grid(gen, ctx.model.initial.rho, cfg.times, cfg.tolerance,
                 [&](std::size_t k, const Matrix& rho) {
                   ResultRow row;
                   row.time_us = cfg.times[k];
                   row.method = cfg.method_name;
                   row.mean = (ctx.model.observable * rho).trace().real();
                   row.fidelity = state_fidelity(rho, ctx.ideal_psi[k]);
                   table.rows.push_back(row);
                 });
}

inline void run_spin_infinite(const ExperimentConfig& cfg, const SpinContext& ctx,
                              ResultTable& table) {
  const NoiseModel diff = noise_difference(ctx.noise_exp, ctx.noise_est);
  Generator gen(ctx.model.h, diff, LindbladConvention::Gksl, /*allow_signed=*/true);
  evolve_on_grid(gen, ctx.model.initial.rho, cfg.times, cfg.tolerance,
                 [&](std::size_t k, const Matrix& rho) {
                   ResultRow row = base_row(cfg, ctx, k);
                   row.mean = (ctx.model.observable * rho).trace().real();
                   row.fidelity = state_fidelity(rho, ctx.ideal_psi[k]);
                   table.rows.push_back(row);
                 });
}

inline void run_spin_stochastic(const ExperimentConfig& cfg, const SpinContext& ctx,
                                ResultTable& table) {
  Generator gen(ctx.model.h, ctx.noise_exp, LindbladConvention::Gksl);
  const auto stepper = make_stepper(gen, cfg.tolerance);
  std::optional<KrausMap> recovery_error;
  if (cfg.recovery_error.enabled)
    recovery_error = preset_inhomogeneous_pauli(cfg.recovery_error.px, cfg.recovery_error.py,
                                                cfg.recovery_error.pz);
  for (std::size_t k = 0; k < cfg.times.size(); ++k) {
    StochasticEngine engine(ctx.model.n, ctx.decomps,
                            single_segment(cfg.times[k], *stepper, ctx.decomps.size()),
                            ctx.model.observable, recovery_error, ctx.ideal_psi[k]);
    const auto agg = engine.run(ctx.model.initial, cfg.seed,
                                k * static_cast<std::uint64_t>(cfg.num_samples),
                                cfg.num_samples);
    ResultRow row = base_row(cfg, ctx, k);
    row.mean = agg.estimator.mean;
    row.stderr_ = agg.estimator.stderr_;
    row.fidelity = agg.fidelity;
    row.mean_jumps = agg.mean_jumps;
    table.rows.push_back(row);
  }
}

inline void run_spin_continuous_reference(const ExperimentConfig& cfg,
                                          const SpinContext& ctx, ResultTable& table) {
  for (std::size_t k = 0; k < cfg.times.size(); ++k) {
    const Matrix rho =
        continuous_reference_state(ctx.model.initial, ctx.model.h, ctx.noise_exp,
                                   ctx.noise_est, cfg.reference_dt, cfg.times[k], cfg.tolerance);
    ResultRow row = base_row(cfg, ctx, k);
    row.mean = (ctx.model.observable * rho).trace().real();
    row.fidelity = state_fidelity(0.5 * (rho + rho.adjoint()), ctx.ideal_psi[k]);
    table.rows.push_back(row);
  }
}

// Shared scaffolding for richardson (noisy runs) and hybrid (effective runs):
// one progressive integration per boost node, then node-wise extrapolation.
inline void run_spin_extrapolated(const ExperimentConfig& cfg, const SpinContext& ctx,
                                  bool mitigated, ResultTable& table) {
  const bool linear = has_linear_profile(ctx.noise_exp) || has_linear_profile(ctx.noise_est);
  std::vector<double> nodes_eff;
  for (double r : cfg.nodes) nodes_eff.push_back(linear ? r * r : r);
  const std::size_t nk = cfg.times.size();
  std::vector<std::vector<Matrix>> states(cfg.nodes.size(), std::vector<Matrix>(nk));

  const NoiseModel run_noise =
      mitigated ? noise_difference(ctx.noise_exp, ctx.noise_est) : ctx.noise_exp;
  const bool finite = mitigated && cfg.num_samples > 0;
  std::vector<std::vector<EstimatorResult>> node_est;
  std::vector<std::vector<double>> node_overlap, node_jumps;
  std::optional<KrausMap> recovery_error;
  if (cfg.recovery_error.enabled)
    recovery_error = preset_inhomogeneous_pauli(cfg.recovery_error.px, cfg.recovery_error.py,
                                                cfg.recovery_error.pz);

  for (std::size_t jn = 0; jn < cfg.nodes.size(); ++jn) {
    const double r = cfg.nodes[jn];
    HamiltonianSpec hr = ctx.model.h;
    hr.rescale_r = r;
    std::vector<double> lab_times;
    for (double t : cfg.times) lab_times.push_back(r * t);
    if (finite) {
      Generator gen(hr, ctx.noise_exp, LindbladConvention::Gksl);
      const auto stepper = make_stepper(gen, cfg.tolerance);
      node_est.emplace_back();
      node_overlap.emplace_back();
      node_jumps.emplace_back();
      for (std::size_t k = 0; k < nk; ++k) {
        StochasticEngine engine(ctx.model.n, ctx.decomps,
                                single_segment(lab_times[k], *stepper, ctx.decomps.size()),
                                ctx.model.observable, recovery_error, ctx.ideal_psi[k]);
        const auto agg = engine.run(ctx.model.initial, cfg.seed,
                                    (jn * nk + k) * static_cast<std::uint64_t>(cfg.num_samples),
                                    cfg.num_samples);
        node_est[jn].push_back(agg.estimator);
        node_overlap[jn].push_back(agg.fidelity * agg.fidelity);
        node_jumps[jn].push_back(agg.mean_jumps);
      }
    } else {
      Generator gen(hr, run_noise, LindbladConvention::Gksl, /*allow_signed=*/mitigated);
      evolve_on_grid(gen, ctx.model.initial.rho, lab_times, cfg.tolerance,
                     [&](std::size_t k, const Matrix& rho) { states[jn][k] = rho; });
    }
  }

  const auto beta = richardson_coefficients(nodes_eff);
  for (std::size_t k = 0; k < nk; ++k) {
    ResultRow row = mitigated ? base_row(cfg, ctx, k) : ResultRow{};
    row.time_us = cfg.times[k];
    row.method = cfg.method_name;
    if (finite) {
      std::vector<double> means, errs;
      double overlap = 0.0, jumps = 0.0, cost_c = 0.0;
      for (std::size_t jn = 0; jn < beta.size(); ++jn) {
        means.push_back(node_est[jn][k].mean);
        errs.push_back(node_est[jn][k].stderr_);
        overlap += beta[jn] * node_overlap[jn][k];
        jumps += node_jumps[jn][k];
        cost_c += std::abs(beta[jn]) * node_est[jn][k].overhead_c;
      }
      const auto ext = extrapolate(nodes_eff, means, errs);
      row.mean = ext.mean;
      row.stderr_ = ext.stderr_;
      row.fidelity = std::sqrt(std::clamp(overlap, 0.0, 1.0));
      row.mean_jumps = jumps;
      row.cost_c2 = cost_c * cost_c;
    } else {
      Matrix ext_state = Matrix::Zero(ctx.model.initial.rho.rows(), ctx.model.initial.rho.cols());
      std::vector<double> means;
      for (std::size_t jn = 0; jn < beta.size(); ++jn) {
        means.push_back((ctx.model.observable * states[jn][k]).trace().real());
        ext_state += beta[jn] * states[jn][k];
      }
      const auto ext = extrapolate(nodes_eff, means);
      row.mean = ext.mean;
      row.fidelity = state_fidelity(0.5 * (ext_state + ext_state.adjoint()), ctx.ideal_psi[k]);
      if (!mitigated) {
        row.cost_c2 = ext.gamma_amplification * ext.gamma_amplification;
      } else {
        double cost_c = 0.0;
        for (std::size_t jn = 0; jn < beta.size(); ++jn) {
          const CostReport cr = cost_overhead(ctx.decomps, cfg.nodes[jn] * cfg.times[k],
                                              ctx.model.n, ctx.rate_sum);
          cost_c += std::abs(beta[jn]) * cr.overhead_c;
        }
        row.cost_c2 = cost_c * cost_c;
      }
    }
    table.rows.push_back(row);
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Circuit experiment path
// ---------------------------------------------------------------------------

// Timeline assembly for one CR circuit: one noisy segment per layer,
// instantaneous rotations and CNOT frame gates between segments, recovery
// decompositions for the always-on noise plus per-layer crosstalk.
class CircuitExperiment {
 public:
  CircuitExperiment(const CircuitSpec& spec, const NoiseModel& relax_exp,
                    const NoiseModel& relax_est, const std::string& decomposition,
                    double tolerance, bool mitigate) {
    const int n = spec.num_qubits;
    // Decomps: always-on relaxation/dephasing recovery, then one crosstalk
    // recovery per qubit that ever appears as a CR target.
    std::map<int, std::size_t> crosstalk_slot;
    if (mitigate) {
      decomps_ = build_decomps(relax_est, n, decomposition);
      always_on_ = decomps_.size();
      std::set<int> targets;
      for (const auto& layer : spec.layers)
        for (auto [c, t] : layer.cnots) targets.insert(t);
      for (int t : targets) {
        RecoveryGenerator::Subsystem sub;
        sub.support = {t};
        sub.profile = TimeProfile::constant_profile();
        sub.g = -commutator_ptm(Matrix(spec.gamma * spec.omega * pauli_matrix(PauliLabel::X)), 1)
                     .entries;
        crosstalk_slot[t] = decomps_.size();
        decomps_.push_back(decomposition == "lp" ? decompose_lp(sub, overcomplete_extra_basis())
                                                 : decompose_minimal(sub));
      }
    }
    // One stepper per distinct CNOT pattern.
    std::map<std::vector<std::pair<int, int>>, std::size_t> stepper_slot;
    double t = 0.0;
    std::vector<InstantGate> pending;  // frame gates of the previous layer
    const Matrix rz = rotation_matrix(PauliLabel::Z, M_PI / 2.0);
    const Matrix rx = rotation_matrix(PauliLabel::X, M_PI / 2.0);
    for (const auto& layer : spec.layers) {
      TimelineSegment seg;
      seg.t0 = t;
      seg.t1 = t + spec.segment_time;
      t = seg.t1;
      seg.gates_at_start = std::move(pending);
      pending.clear();
      for (const auto& rot : layer.rotations)
        seg.gates_at_start.push_back({rotation_matrix(rot.axis, rot.angle), {rot.qubit}});
      auto it = stepper_slot.find(layer.cnots);
      if (it == stepper_slot.end()) {
        NoiseModel seg_noise = relax_exp;
        if (spec.gamma != 0.0) seg_noise.coherent_error = cr_layer_crosstalk(spec, layer);
        Generator gen(cr_layer_drive_padded(spec, layer), seg_noise, LindbladConvention::Gksl);
        steppers_.push_back(make_stepper(gen, tolerance));
        it = stepper_slot.emplace(layer.cnots, steppers_.size() - 1).first;
      }
      seg.stepper = steppers_[it->second].get();
      if (mitigate) {
        for (std::size_t d = 0; d < always_on_; ++d) seg.active_decomps.push_back(d);
        for (auto [c, tq] : layer.cnots) seg.active_decomps.push_back(crosstalk_slot[tq]);
      }
      segments_.push_back(std::move(seg));
      for (auto [c, tq] : layer.cnots) {
        pending.push_back({rz, {c}});
        pending.push_back({rx, {tq}});
      }
    }
    // Zero-length tail segment carrying the final frame gates.
    TimelineSegment tail;
    tail.t0 = tail.t1 = t;
    tail.stepper = steppers_.front().get();
    tail.gates_at_start = std::move(pending);
    segments_.push_back(std::move(tail));

    ideal_ = ideal_circuit_state(spec);
    observable_ = ideal_ * ideal_.adjoint();
  }

  const std::vector<QuasiDecomposition>& decomps() const { return decomps_; }
  const std::vector<TimelineSegment>& segments() const { return segments_; }
  const Vector& ideal_state() const { return ideal_; }
  const Matrix& observable() const { return observable_; }

 private:
  // The drive Hamiltonian must span the full register even when a layer
  // drives fewer qubits, so pad with an explicit zero identity term.
  static HamiltonianSpec cr_layer_drive_padded(const CircuitSpec& spec,
                                               const CircuitSpec::Layer& layer) {
    HamiltonianSpec h = cr_layer_drive(spec, layer);
    if (h.terms.terms.empty())
      h.terms.terms.push_back(
          PauliString(std::vector<PauliLabel>(spec.num_qubits, PauliLabel::I), 0.0));
    return h;
  }

  std::vector<QuasiDecomposition> decomps_;
  std::size_t always_on_ = 0;
  std::vector<std::unique_ptr<NoisyStepper>> steppers_;
  std::vector<TimelineSegment> segments_;
  Vector ideal_;
  Matrix observable_;
};

namespace detail {

inline void run_circuit(const ExperimentConfig& cfg, ResultTable& table) {
  const auto& m = cfg.model;
  const bool mitigate = cfg.method == Method::Stochastic;
  std::optional<KrausMap> recovery_error;
  if (cfg.recovery_error.enabled && mitigate)
    recovery_error = preset_inhomogeneous_pauli(cfg.recovery_error.px, cfg.recovery_error.py,
                                                cfg.recovery_error.pz);
  for (int depth = 1; depth <= m.depth; ++depth) {
    const CircuitSpec spec =
        build_cr_circuit(depth, m.circuit_seed, m.qubits, m.omega, m.gamma);
    const NoiseModel relax_exp = build_noise(cfg.noise_exp, m.qubits);
    const NoiseModel relax_est = build_noise(cfg.noise_est, m.qubits);
    CircuitExperiment exp(spec, relax_exp, relax_est, cfg.decomposition, cfg.tolerance,
                          mitigate);
    StochasticEngine engine(m.qubits, exp.decomps(), exp.segments(), exp.observable(),
                            recovery_error, exp.ideal_state());
    const std::size_t samples = mitigate ? cfg.num_samples : 1;
    const auto agg = engine.run(DensityState::zero_state(m.qubits), cfg.seed,
                                static_cast<std::uint64_t>(depth) * 100000000ULL, samples);
    ResultRow row;
    row.time_us = depth * spec.segment_time;
    row.method = cfg.method_name;
    row.mean = agg.estimator.mean;
    row.stderr_ = agg.estimator.stderr_;
    row.fidelity = std::sqrt(std::clamp(agg.estimator.mean, 0.0, 1.0));
    row.mean_jumps = agg.mean_jumps;
    for (const auto& d : exp.decomps()) row.c1_total += d.c1;
    row.cost_c2 = engine.overhead_c() * engine.overhead_c();
    table.rows.push_back(row);
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

inline ResultTable run_experiment(const ExperimentConfig& cfg,
                                  const std::string& config_text = std::string()) {
  ResultTable table;
  table.metadata.push_back(std::string("generator: ") + kVersion);
  if (!config_text.empty()) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(detail::fnv1a(config_text)));
    table.metadata.push_back(std::string("config_hash: ") + buf);
  }
  table.metadata.push_back("method: " + cfg.method_name);
  if (cfg.seed_set) table.metadata.push_back("seed: " + std::to_string(cfg.seed));

  if (cfg.model.preset == "cr_circuit") {
    if (cfg.method != Method::None && cfg.method != Method::Stochastic)
      throw ConfigError({"method: circuit benchmark supports 'none' and 'stochastic' only"});
    detail::run_circuit(cfg, table);
    return table;
  }

  const detail::SpinContext ctx = detail::make_spin_context(cfg);
  switch (cfg.method) {
    case Method::None:
      detail::run_spin_none(cfg, ctx, table);
      break;
    case Method::InfiniteSample:
      detail::run_spin_infinite(cfg, ctx, table);
      break;
    case Method::Stochastic:
      if (cfg.num_samples == 0)
        detail::run_spin_infinite(cfg, ctx, table);
      else
        detail::run_spin_stochastic(cfg, ctx, table);
      break;
    case Method::ContinuousReference:
      detail::run_spin_continuous_reference(cfg, ctx, table);
      break;
    case Method::Richardson:
      detail::run_spin_extrapolated(cfg, ctx, /*mitigated=*/false, table);
      break;
    case Method::Hybrid:
      detail::run_spin_extrapolated(cfg, ctx, /*mitigated=*/true, table);
      break;
  }
  return table;
}

inline void write_table(const ResultTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << to_csv(table);
}

}  // namespace qemforge
