#pragma once

// Time integration of ideal, noisy, rescaled, and effective master equations
// for Pauli-sum Hamiltonians with local Lindblad terms.
//
// Units: time in us, rates in 1/us, Hamiltonian coefficients in rad/us.
// Canonical dissipator is GKSL: lambda (L rho L^dag - 1/2 {L^dag L, rho});
// the `Doubled` convention multiplies the dissipator by 2.

#include "qemforge/pauli.hpp"
#include "qemforge/ptm.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <optional>

namespace qemforge {

struct IntegrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Closed-form scalar profile g(t): constant 1 or linear t.
struct TimeProfile {
  enum class Kind { Constant, Linear } kind = Kind::Constant;

  double value(double t) const { return kind == Kind::Constant ? 1.0 : t; }
  bool constant() const { return kind == Kind::Constant; }

  static TimeProfile constant_profile() { return {Kind::Constant}; }
  static TimeProfile linear_profile() { return {Kind::Linear}; }
};

struct HamiltonianSpec {
  PauliSum terms;
  TimeProfile profile;      // dimensionless multiplier of the Pauli sum
  double rescale_r = 1.0;   // r >= 1 implements H -> (1/r) H(t/r)

  int num_qubits() const { return terms.num_qubits(); }

  Matrix base_matrix() const { return terms.matrix(); }

  // Effective multiplier at lab time t, including the rescaling.
  double multiplier(double t) const {
    return profile.value(t / rescale_r) / rescale_r;
  }
};

struct LindbladTerm {
  Matrix jump_operator;       // local 2^m operator
  std::vector<int> support;   // qubit ids, m <= 2
  double rate = 0.0;          // 1/us; signed rates only in effective mode
  TimeProfile profile;        // g(t), default constant 1
};

struct NoiseModel {
  std::vector<LindbladTerm> terms;
  std::optional<HamiltonianSpec> coherent_error;  // delta H

  void validate(int n, bool allow_signed_rates = false) const {
    for (const auto& t : terms) {
      if (t.support.empty() || t.support.size() > 2)
        throw std::invalid_argument("Lindblad term must act on 1 or 2 qubits");
      check_support(t.support, n);
      if (!allow_signed_rates && t.rate < 0.0)
        throw std::invalid_argument("negative Lindblad rate");
      if (!std::isfinite(t.rate)) throw std::invalid_argument("non-finite rate");
    }
  }

  bool empty() const { return terms.empty() && !coherent_error; }

  // All profiles constant (needed for the spectral fast path).
  bool time_independent() const {
    for (const auto& t : terms)
      if (!t.profile.constant()) return false;
    if (coherent_error && !coherent_error->profile.constant()) return false;
    return true;
  }
};

// Scale all rates by a factor (used for noise boosting oracles and model
// mismatch construction).
inline NoiseModel scaled(NoiseModel noise, double factor) {
  for (auto& t : noise.terms) t.rate *= factor;
  if (noise.coherent_error)
    for (auto& t : noise.coherent_error->terms.terms) t.coefficient *= factor;
  return noise;
}

// noise_exp - noise_est as a signed-rate term list (exact when both models
// share the same operator structure; general difference otherwise).
inline NoiseModel noise_difference(const NoiseModel& exp_model,
                                   const NoiseModel& est_model) {
  NoiseModel diff = exp_model;
  for (const auto& t : est_model.terms) {
    LindbladTerm neg = t;
    neg.rate = -t.rate;
    diff.terms.push_back(std::move(neg));
  }
  if (est_model.coherent_error) {
    HamiltonianSpec neg = *est_model.coherent_error;
    for (auto& term : neg.terms.terms) term.coefficient = -term.coefficient;
    if (diff.coherent_error) {
      for (auto& term : neg.terms.terms) diff.coherent_error->terms.terms.push_back(term);
    } else {
      diff.coherent_error = neg;
    }
  }
  return diff;
}

enum class LindbladConvention { Gksl, Doubled };

struct EvolutionConfig {
  double t_end = 0.0;     // us
  double tolerance = 1e-10;
  double max_step = std::numeric_limits<double>::infinity();
  LindbladConvention convention = LindbladConvention::Gksl;
};

struct DensityState {
  Matrix rho;
  double time = 0.0;  // us

  int num_qubits() const {
    int n = 0;
    while (pow2(n) < rho.rows()) ++n;
    return n;
  }

  static DensityState pure(const Vector& psi) {
    return DensityState{psi * psi.adjoint(), 0.0};
  }

  // |+>^{(x)n}
  static DensityState plus_state(int n) {
    Vector psi = Vector::Constant(pow2(n), 1.0 / std::sqrt(static_cast<double>(pow2(n))));
    return pure(psi);
  }

  static DensityState zero_state(int n) {
    Vector psi = Vector::Zero(pow2(n));
    psi[0] = 1.0;
    return pure(psi);
  }
};

inline double trace_distance(const Matrix& a, const Matrix& b) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a - b);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

// ---------------------------------------------------------------------------
// Right-hand side assembly
// ---------------------------------------------------------------------------

// Precompiled generator for one (Hamiltonian, noise) pair; owns embedded
// local operators so the RHS costs O(4^n) per Lindblad term.
class Generator {
 public:
  Generator(const HamiltonianSpec& h, const NoiseModel& noise,
            LindbladConvention convention, bool allow_signed = false)
      : h_(h), n_(h.num_qubits()),
        conv_factor_(convention == LindbladConvention::Doubled ? 2.0 : 1.0) {
    noise.validate(n_, allow_signed);
    h0_ = h.base_matrix();
    if (noise.coherent_error) {
      dh_ = noise.coherent_error->terms.matrix();
      dh_profile_ = noise.coherent_error->profile;
    }
    for (const auto& t : noise.terms) {
      Term ct{EmbeddedOp(t.jump_operator, t.support, n_),
              EmbeddedOp(t.jump_operator.adjoint() * t.jump_operator, t.support, n_),
              t.rate, t.profile};
      terms_.push_back(std::move(ct));
    }
  }

  int num_qubits() const { return n_; }

  // d rho / dt at lab time t.
  Matrix rhs(double t, const Matrix& rho) const {
    Matrix h = h_.multiplier(t) * h0_;
    if (dh_) h += dh_profile_.value(t) * (*dh_);
    Matrix out = -kI * (h * rho - rho * h);
    for (const auto& term : terms_) {
      const double g = conv_factor_ * term.rate * term.profile.value(t);
      if (g == 0.0) continue;
      out += g * (term.jump.sandwich(rho) - 0.5 * (term.dagger_product.left(rho) +
                                                   term.dagger_product.right(rho)));
    }
    return out;
  }

  bool time_independent() const {
    if (!h_.profile.constant()) return false;
    if (dh_ && !dh_profile_.constant()) return false;
    for (const auto& t : terms_)
      if (!t.profile.constant()) return false;
    return true;
  }

  // Dense Liouvillian superoperator at time t (column-major vec convention):
  // vec(rhs) = L vec(rho). Intended for n <= 4.
  Matrix liouvillian(double t) const {
    const Eigen::Index d = pow2(n_);
    Matrix h = h_.multiplier(t) * h0_;
    if (dh_) h += dh_profile_.value(t) * (*dh_);
    const Matrix id = Matrix::Identity(d, d);
    Matrix l = -kI * (kron(id, h) - kron(h.transpose(), id));
    for (const auto& term : terms_) {
      const double g = conv_factor_ * term.rate * term.profile.value(t);
      if (g == 0.0) continue;
      const Matrix jf = term.jump.dense();
      const Matrix jdj = jf.adjoint() * jf;
      l += g * (kron(jf.conjugate(), jf) -
                0.5 * (kron(id, jdj) + kron(jdj.transpose(), id)));
    }
    return l;
  }

 private:
  struct Term {
    EmbeddedOp jump;
    EmbeddedOp dagger_product;  // L^dag L
    double rate;
    TimeProfile profile;
  };

  HamiltonianSpec h_;
  int n_;
  double conv_factor_;
  Matrix h0_;
  std::optional<Matrix> dh_;
  TimeProfile dh_profile_;
  std::vector<Term> terms_;
};

// Instantaneous RHS for external inspection.
inline Matrix generator_apply(const DensityState& state, const HamiltonianSpec& h,
                              const NoiseModel& noise,
                              LindbladConvention convention = LindbladConvention::Gksl) {
  Generator gen(h, noise, convention, true);
  return gen.rhs(state.time, state.rho);
}

// ---------------------------------------------------------------------------
// Adaptive Dormand-Prince 5(4) integrator on density matrices
// ---------------------------------------------------------------------------

namespace detail {

inline double error_norm(const Matrix& err, const Matrix& y, double tol) {
  double maxr = 0.0;
  for (Eigen::Index j = 0; j < y.cols(); ++j)
    for (Eigen::Index i = 0; i < y.rows(); ++i) {
      const double scale = tol * (1.0 + std::abs(y(i, j)));
      maxr = std::max(maxr, std::abs(err(i, j)) / scale);
    }
  return maxr;
}

}  // namespace detail

inline void integrate_dopri5(const std::function<Matrix(double, const Matrix&)>& rhs,
                             Matrix& y, double t0, double t1, double tol,
                             double max_step) {
  if (t1 <= t0) return;
  // Dormand-Prince RK5(4) tableau
  static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                      a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                      a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                      b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                      e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  double t = t0;
  double h = std::min({t1 - t0, max_step, 0.1});
  Matrix k1 = rhs(t, y);
  const double hmin = (t1 - t0) * 1e-14;
  int rejected_in_a_row = 0;
  while (t < t1) {
    h = std::min(h, t1 - t);
    if (h < hmin)
      throw IntegrationError("integrator step-size underflow (stiff input?)");
    const Matrix k2 = rhs(t + c2 * h, y + h * (a21 * k1));
    const Matrix k3 = rhs(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
    const Matrix k4 = rhs(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Matrix k5 = rhs(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Matrix k6 = rhs(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Matrix y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Matrix k7 = rhs(t + h, y5);
    const Matrix err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double enorm = detail::error_norm(err, y5, tol);
    if (enorm <= 1.0) {
      t += h;
      y = y5;
      k1 = k7;  // FSAL
      rejected_in_a_row = 0;
    } else if (++rejected_in_a_row > 60) {
      throw IntegrationError("integrator failed to find an acceptable step");
    }
    const double factor =
        std::clamp(0.9 * std::pow(std::max(enorm, 1e-10), -0.2), 0.2, 5.0);
    h = std::min(h * factor, max_step);
  }
}

// ---------------------------------------------------------------------------
// Evolution entry points
// ---------------------------------------------------------------------------

inline DensityState evolve_with_generator(const Generator& gen, DensityState state,
                                          const EvolutionConfig& cfg,
                                          double duration) {
  if (duration < 0.0) throw std::invalid_argument("negative evolution time");
  auto rhs = [&gen](double t, const Matrix& y) { return gen.rhs(t, y); };
  integrate_dopri5(rhs, state.rho, state.time, state.time + duration,
                   cfg.tolerance, cfg.max_step);
  state.time += duration;
  return state;
}

inline DensityState evolve_ideal(const DensityState& state, const HamiltonianSpec& h,
                                 const EvolutionConfig& cfg) {
  Generator gen(h, NoiseModel{}, cfg.convention);
  return evolve_with_generator(gen, state, cfg, cfg.t_end);
}

inline DensityState evolve_noisy(const DensityState& state, const HamiltonianSpec& h,
                                 const NoiseModel& noise, const EvolutionConfig& cfg) {
  Generator gen(h, noise, cfg.convention);
  return evolve_with_generator(gen, state, cfg, cfg.t_end);
}

// Infinite-sample limit of stochastic QEM: d rho/dt = -i[H,rho] + Delta L[rho]
// with Delta L given as a signed-rate term list.
inline DensityState evolve_effective(const DensityState& state, const HamiltonianSpec& h,
                                     const NoiseModel& delta_noise,
                                     const EvolutionConfig& cfg) {
  Generator gen(h, delta_noise, cfg.convention, /*allow_signed=*/true);
  return evolve_with_generator(gen, state, cfg, cfg.t_end);
}

// Evolve under (1/r) H(t/r) for duration r * t_end with unchanged noise,
// which boosts constant-profile noise by r (and linear-profile by r^2).
inline DensityState evolve_rescaled(const DensityState& state, const HamiltonianSpec& h,
                                    const NoiseModel& noise, double r,
                                    const EvolutionConfig& cfg) {
  if (r < 1.0) throw std::invalid_argument("rescale factor must be >= 1");
  HamiltonianSpec hr = h;
  hr.rescale_r = r;
  Generator gen(hr, noise, cfg.convention);
  return evolve_with_generator(gen, state, cfg, r * cfg.t_end);
}

}  // namespace qemforge
