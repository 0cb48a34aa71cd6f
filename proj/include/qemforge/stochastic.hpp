#pragma once

// Stochastic quasi-probability error mitigation: pre-sampled jump schedules,
// recovery-inserted noisy trajectories, and signed C-weighted aggregation,
// plus the discretised continuous reference and effective-state accounting.

#include "qemforge/decomp.hpp"
#include "qemforge/lindblad.hpp"
#include "qemforge/rng.hpp"

#include <atomic>
#include <cstdlib>
#include <memory>
#include <thread>

namespace qemforge {

// ---------------------------------------------------------------------------
// Noisy-segment evolution backends
// ---------------------------------------------------------------------------

class NoisyStepper {
 public:
  virtual ~NoisyStepper() = default;
  virtual void evolve(Matrix& rho, double t0, double t1) const = 0;
};

class Rk45Stepper final : public NoisyStepper {
 public:
  Rk45Stepper(Generator gen, double tol)
      : gen_(std::move(gen)), tol_(tol) {}

  void evolve(Matrix& rho, double t0, double t1) const override {
    integrate_dopri5([this](double t, const Matrix& y) { return gen_.rhs(t, y); },
                     rho, t0, t1, tol_,
                     std::numeric_limits<double>::infinity());
  }

 private:
  Generator gen_;
  double tol_;
};

// Eigendecomposed Liouvillian propagator for time-independent generators on
// small systems: exp(L tau) applied via V exp(diag) V^-1.
class SpectralStepper final : public NoisyStepper {
 public:
  explicit SpectralStepper(const Generator& gen) {
    const Matrix l = gen.liouvillian(0.0);
    Eigen::ComplexEigenSolver<Matrix> es(l);
    if (es.info() != Eigen::Success)
      throw IntegrationError("Liouvillian eigendecomposition failed");
    v_ = es.eigenvectors();
    eig_ = es.eigenvalues();
    lu_ = std::make_shared<Eigen::PartialPivLU<Matrix>>(v_);
    // Reject near-defective Liouvillians; caller falls back to RK45.
    const Matrix recon = v_ * eig_.asDiagonal() * lu_->solve(Matrix::Identity(l.rows(), l.cols()));
    if ((recon - l).cwiseAbs().maxCoeff() > 1e-8 * (1.0 + l.cwiseAbs().maxCoeff()))
      throw IntegrationError("Liouvillian is too close to defective");
  }

  void evolve(Matrix& rho, double t0, double t1) const override {
    const double tau = t1 - t0;
    if (tau <= 0.0) return;
    Vector w = lu_->solve(Vector(Eigen::Map<const Vector>(rho.data(), rho.size())));
    for (Eigen::Index i = 0; i < w.size(); ++i) w[i] *= std::exp(eig_[i] * tau);
    const Vector out = v_ * w;
    rho = Eigen::Map<const Matrix>(out.data(), rho.rows(), rho.cols());
  }

 private:
  Matrix v_;
  Vector eig_;
  std::shared_ptr<Eigen::PartialPivLU<Matrix>> lu_;
};

// Spectral path when the generator is time independent and small enough,
// RK45 otherwise.
inline std::unique_ptr<NoisyStepper> make_stepper(const Generator& gen, double tol) {
  if (gen.time_independent() && gen.num_qubits() <= 4) {
    try {
      return std::make_unique<SpectralStepper>(gen);
    } catch (const IntegrationError&) {
      // fall through
    }
  }
  return std::make_unique<Rk45Stepper>(gen, tol);
}

// ---------------------------------------------------------------------------
// Jump schedules
// ---------------------------------------------------------------------------

struct JumpEvent {
  double time = 0.0;
  std::size_t decomp_index = 0;
  std::size_t entry_index = 0;
};

struct JumpSchedule {
  std::vector<JumpEvent> events;
  double alpha = 1.0;
  std::uint64_t trajectory_stream = 0;
};

struct InstantGate {
  Matrix unitary;           // local
  std::vector<int> support;
};

// One window of the experiment timeline: a noisy-evolution backend plus the
// recovery decompositions active during it. Instant gates fire at t0.
struct TimelineSegment {
  double t0 = 0.0;
  double t1 = 0.0;
  const NoisyStepper* stepper = nullptr;
  std::vector<InstantGate> gates_at_start;
  std::vector<std::size_t> active_decomps;
};

// Survival-function inversion exp(-int Gamma) = q, for Gamma piecewise
// linear in t across the timeline. Closed form per window, with a bisection
// fallback when the quadratic is ill conditioned.
inline JumpSchedule sample_jump_schedule(const std::vector<QuasiDecomposition>& decomps,
                                         const std::vector<TimelineSegment>& segments,
                                         PhiloxRng& rng) {
  JumpSchedule schedule;
  auto seg = segments.begin();
  double t = segments.empty() ? 0.0 : segments.front().t0;
  double hazard_target = -std::log(std::max(rng.uniform(), 1e-300));
  while (seg != segments.end()) {
    double a = 0.0, b = 0.0;  // Gamma(t) = a + b t within this window
    for (std::size_t di : seg->active_decomps) {
      if (decomps[di].profile.constant())
        a += decomps[di].gamma;
      else
        b += decomps[di].gamma;
    }
    const double span = seg->t1 - t;
    const double window_hazard = a * span + b * (t * span + 0.5 * span * span);
    if (window_hazard < hazard_target) {
      hazard_target -= window_hazard;
      t = seg->t1;
      ++seg;
      continue;
    }
    // Jump inside this window: solve a tau + b (t tau + tau^2/2) = target.
    double tau;
    const double lin = a + b * t;
    if (b == 0.0) {
      tau = hazard_target / a;
    } else {
      const double disc = lin * lin + 2.0 * b * hazard_target;
      tau = (-lin + std::sqrt(std::max(disc, 0.0))) / b;
      // Guard against cancellation for tiny b.
      auto hazard_of = [&](double x) { return a * x + b * (t * x + 0.5 * x * x); };
      if (!(tau >= 0.0 && tau <= span) ||
          std::abs(hazard_of(tau) - hazard_target) > 1e-10 * (1.0 + hazard_target)) {
        double lo = 0.0, hi = span;
        for (int it = 0; it < 200; ++it) {
          const double mid = 0.5 * (lo + hi);
          (hazard_of(mid) < hazard_target ? lo : hi) = mid;
        }
        tau = 0.5 * (lo + hi);
      }
    }
    t += tau;
    // Select the basis operation across all active decompositions, weighted
    // by |q_j| g_S(t) at the jump time.
    double total = 0.0;
    for (std::size_t di : seg->active_decomps)
      total += decomps[di].gamma * decomps[di].profile.value(t);
    const double u = rng.uniform() * total;
    double acc = 0.0;
    JumpEvent ev;
    ev.time = t;
    bool placed = false;
    for (std::size_t di : seg->active_decomps) {
      const auto& d = decomps[di];
      const double w = d.gamma * d.profile.value(t);
      if (!placed && u < acc + w) {
        ev.decomp_index = di;
        ev.entry_index = d.pick_entry((u - acc) / w);
        placed = true;
      }
      acc += w;
    }
    if (!placed && !seg->active_decomps.empty()) {
      const std::size_t di = seg->active_decomps.back();
      ev.decomp_index = di;
      ev.entry_index = decomps[di].entries.size() - 1;
    }
    schedule.events.push_back(ev);
    schedule.alpha *= decomps[ev.decomp_index].entries[ev.entry_index].q < 0.0 ? -1.0 : 1.0;
    hazard_target = -std::log(std::max(rng.uniform(), 1e-300));
  }
  return schedule;
}

// ---------------------------------------------------------------------------
// Trajectory execution and estimation
// ---------------------------------------------------------------------------

struct TrajectoryResult {
  double raw_observable = 0.0;  // O_m
  double alpha = 1.0;
  double trace = 1.0;           // Tr rho(T), subnormalized for projective ops
  double fidelity_overlap = 0.0;  // <psi_I| rho |psi_I>, if a reference is set
  int num_jumps = 0;
};

struct EstimatorResult {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::size_t samples = 0;
  double overhead_c = 1.0;
  double predicted_error = 0.0;  // C / sqrt(N_s)
};

inline EstimatorResult estimate(const std::vector<TrajectoryResult>& trajectories,
                                double overhead_c) {
  if (trajectories.empty()) throw std::invalid_argument("estimate: no trajectories");
  KahanSum sum, sumsq;
  for (const auto& t : trajectories) {
    const double w = overhead_c * t.alpha * t.raw_observable;
    sum.add(w);
    sumsq.add(w * w);
  }
  const auto n = static_cast<double>(trajectories.size());
  EstimatorResult r;
  r.samples = trajectories.size();
  r.overhead_c = overhead_c;
  r.mean = sum.value() / n;
  const double var = std::max(0.0, (sumsq.value() - n * r.mean * r.mean) / std::max(1.0, n - 1.0));
  r.stderr_ = std::sqrt(var / n);
  r.predicted_error = overhead_c / std::sqrt(n);
  return r;
}

inline int worker_count() {
  if (const char* env = std::getenv("QEMFORGE_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

// Shared, immutable context for running trajectories of one experiment.
class StochasticEngine {
 public:
  StochasticEngine(int num_qubits, std::vector<QuasiDecomposition> decomps,
                   std::vector<TimelineSegment> segments, Matrix observable,
                   std::optional<KrausMap> recovery_error = std::nullopt,
                   std::optional<Vector> ideal_reference = std::nullopt)
      : n_(num_qubits),
        decomps_(std::move(decomps)),
        segments_(std::move(segments)),
        observable_(std::move(observable)),
        ideal_reference_(std::move(ideal_reference)) {
    for (const auto& d : decomps_) {
      DecompOps ops;
      for (const auto& e : d.entries) {
        KrausMap km = e.kraus;
        km.support = d.support;
        ops.appliers.emplace_back(km, n_);
      }
      if (recovery_error) {
        for (int q : d.support) {
          KrausMap km = *recovery_error;
          km.support = {q};
          ops.error_appliers.emplace_back(km, n_);
        }
      }
      decomp_ops_.push_back(std::move(ops));
    }
    for (const auto& seg : segments_) {
      std::vector<EmbeddedOp> gates;
      for (const auto& g : seg.gates_at_start)
        gates.emplace_back(g.unitary, g.support, n_);
      segment_gates_.push_back(std::move(gates));
    }
    overhead_c_ = compute_overhead();
  }

  double overhead_c() const { return overhead_c_; }
  double total_time() const { return segments_.empty() ? 0.0 : segments_.back().t1; }

  // Analytic mean jump count, int Gamma dt over the timeline.
  double expected_jumps() const {
    double acc = 0.0;
    for (const auto& seg : segments_)
      for (std::size_t di : seg.active_decomps) {
        const auto& d = decomps_[di];
        if (d.profile.constant())
          acc += d.gamma * (seg.t1 - seg.t0);
        else
          acc += d.gamma * 0.5 * (seg.t1 * seg.t1 - seg.t0 * seg.t0);
      }
    return acc;
  }

  TrajectoryResult run_trajectory(const DensityState& initial, std::uint64_t seed,
                                  std::uint64_t stream) const {
    PhiloxRng rng(seed, stream);
    JumpSchedule schedule = sample_jump_schedule(decomps_, segments_, rng);
    Matrix rho = initial.rho;
    auto event = schedule.events.begin();
    for (std::size_t si = 0; si < segments_.size(); ++si) {
      const auto& seg = segments_[si];
      for (const auto& g : segment_gates_[si]) rho = g.sandwich(rho);
      double t = seg.t0;
      while (event != schedule.events.end() && event->time <= seg.t1) {
        seg.stepper->evolve(rho, t, event->time);
        t = event->time;
        apply_event(rho, *event);
        ++event;
      }
      seg.stepper->evolve(rho, t, seg.t1);
    }
    TrajectoryResult res;
    res.alpha = schedule.alpha;
    res.num_jumps = static_cast<int>(schedule.events.size());
    res.raw_observable = (observable_ * rho).trace().real();
    res.trace = rho.trace().real();
    if (ideal_reference_)
      res.fidelity_overlap = (ideal_reference_->adjoint() * rho * (*ideal_reference_))(0).real();
    return res;
  }

  struct Aggregate {
    EstimatorResult estimator;
    double fidelity = 0.0;       // sqrt of the weighted overlap, clipped
    double mean_jumps = 0.0;     // empirical
    double expected_jumps = 0.0;
    std::vector<TrajectoryResult> trajectories;
  };

  Aggregate run(const DensityState& initial, std::uint64_t seed,
                std::uint64_t stream_base, std::size_t num_samples,
                int threads = 0) const {
    if (threads <= 0) threads = worker_count();
    std::vector<TrajectoryResult> results(num_samples);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (;;) {
        const std::size_t m = next.fetch_add(1);
        if (m >= num_samples) return;
        results[m] = run_trajectory(initial, seed, stream_base + m);
      }
    };
    if (threads == 1 || num_samples < 2) {
      work();
    } else {
      std::vector<std::thread> pool;
      for (int i = 0; i < threads; ++i) pool.emplace_back(work);
      for (auto& th : pool) th.join();
    }
    Aggregate agg;
    agg.estimator = estimate(results, overhead_c_);
    agg.expected_jumps = expected_jumps();
    KahanSum jumps, overlap;
    for (const auto& r : results) {
      jumps.add(r.num_jumps);
      overlap.add(overhead_c_ * r.alpha * r.fidelity_overlap);
    }
    agg.mean_jumps = jumps.value() / static_cast<double>(num_samples);
    if (ideal_reference_) {
      const double f2 = overlap.value() / static_cast<double>(num_samples);
      agg.fidelity = std::sqrt(std::clamp(f2, 0.0, 1.0));
    }
    agg.trajectories = std::move(results);
    return agg;
  }

 private:
  struct DecompOps {
    std::vector<EmbeddedKraus> appliers;        // one per decomposition entry
    std::vector<EmbeddedKraus> error_appliers;  // recovery error per support qubit
  };

  double compute_overhead() const {
    double acc = 0.0;
    for (const auto& seg : segments_)
      for (std::size_t di : seg.active_decomps) {
        const auto& d = decomps_[di];
        if (d.profile.constant())
          acc += d.c1 * (seg.t1 - seg.t0);
        else
          acc += d.c1 * 0.5 * (seg.t1 * seg.t1 - seg.t0 * seg.t0);
      }
    return std::exp(acc);
  }

  void apply_event(Matrix& rho, const JumpEvent& ev) const {
    const auto& ops = decomp_ops_[ev.decomp_index];
    rho = ops.appliers[ev.entry_index].apply(rho);
    for (const auto& err : ops.error_appliers) rho = err.apply(rho);
  }

  int n_;
  std::vector<QuasiDecomposition> decomps_;
  std::vector<TimelineSegment> segments_;
  Matrix observable_;
  std::optional<Vector> ideal_reference_;
  std::vector<DecompOps> decomp_ops_;
  std::vector<std::vector<EmbeddedOp>> segment_gates_;
  double overhead_c_ = 1.0;
};

// Single-window timeline helper for continuous-evolution experiments.
inline std::vector<TimelineSegment> single_segment(double t_end,
                                                   const NoisyStepper& stepper,
                                                   std::size_t num_decomps) {
  TimelineSegment seg;
  seg.t0 = 0.0;
  seg.t1 = t_end;
  seg.stepper = &stepper;
  for (std::size_t i = 0; i < num_decomps; ++i) seg.active_decomps.push_back(i);
  return {seg};
}

// ---------------------------------------------------------------------------
// Discretised continuous QEM reference (first-order deterministic expansion)
// ---------------------------------------------------------------------------

inline Matrix continuous_reference_state(const DensityState& initial, const HamiltonianSpec& h,
                                         const NoiseModel& noise_exp, const NoiseModel& noise_est,
                                         double dt, double t_end, double tol = 1e-10) {
  if (dt <= 0.0) throw std::invalid_argument("continuous_reference: dt must be positive");
  const int n = h.num_qubits();
  const RecoveryGenerator rec = recovery_generator(noise_est, n);
  std::vector<EmbeddedSuperOp> recovery_apps;
  std::vector<TimeProfile> profiles;
  for (const auto& sub : rec.subsystems) {
    recovery_apps.emplace_back(Matrix(ptm_to_superop(TransferMatrix{sub.g, static_cast<int>(sub.support.size())})),
                               sub.support, n);
    profiles.push_back(sub.profile);
  }
  Generator gen(h, noise_exp, LindbladConvention::Gksl);
  Matrix rho = initial.rho;
  const auto steps = static_cast<std::size_t>(std::llround(t_end / dt));
  double t = 0.0;
  for (std::size_t k = 0; k < steps; ++k) {
    integrate_dopri5([&gen](double tt, const Matrix& y) { return gen.rhs(tt, y); },
                     rho, t, t + dt, tol, std::numeric_limits<double>::infinity());
    t += dt;
    Matrix corr = Matrix::Zero(rho.rows(), rho.cols());
    for (std::size_t s = 0; s < recovery_apps.size(); ++s)
      corr += profiles[s].value(t) * recovery_apps[s].apply(rho);
    rho += dt * corr;
  }
  return rho;
}

inline double continuous_reference(const DensityState& initial, const HamiltonianSpec& h,
                                   const NoiseModel& noise_exp, const NoiseModel& noise_est,
                                   double dt, double t_end, const Matrix& observable,
                                   double tol = 1e-10) {
  const Matrix rho =
      continuous_reference_state(initial, h, noise_exp, noise_est, dt, t_end, tol);
  return (observable * rho).trace().real();
}

// rho_eff = (C/N_s) sum alpha_m rho_m (Hermitized) and F = sqrt(<psi|rho|psi>).
inline std::pair<Matrix, double> effective_state_and_fidelity(
    const std::vector<Matrix>& states, const std::vector<double>& alphas,
    double overhead_c, const Vector& ideal_psi) {
  if (states.empty() || states.size() != alphas.size())
    throw std::invalid_argument("effective_state_and_fidelity: bad inputs");
  Matrix eff = Matrix::Zero(states.front().rows(), states.front().cols());
  for (std::size_t i = 0; i < states.size(); ++i) eff += alphas[i] * states[i];
  eff *= overhead_c / static_cast<double>(states.size());
  eff = 0.5 * (eff + eff.adjoint()).eval();
  const double overlap = (ideal_psi.adjoint() * eff * ideal_psi)(0).real();
  return {eff, std::sqrt(std::clamp(overlap, 0.0, 1.0))};
}

inline double state_fidelity(const Matrix& rho, const Vector& psi) {
  return std::sqrt(std::clamp((psi.adjoint() * rho * psi)(0).real(), 0.0, 1.0));
}

}  // namespace qemforge
