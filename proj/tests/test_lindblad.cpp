#include "qemforge/lindblad.hpp"
#include "qemforge/models.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include <random>

using namespace qemforge;

namespace {

double max_abs_diff(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

DensityState plus1() { return DensityState::plus_state(1); }

NoiseModel dephasing(double rate, int n) {
  NoiseModel m;
  for (int q = 0; q < n; ++q)
    m.terms.push_back({Matrix(pauli_matrix(PauliLabel::Z)), {q}, rate, {}});
  return m;
}

HamiltonianSpec zero_field(int n) {
  HamiltonianSpec h;
  h.terms.terms.push_back(PauliString(std::vector<PauliLabel>(n, PauliLabel::I), 0.0));
  return h;
}

}  // namespace

TEST_CASE("pure dephasing decays <X> as exp(-2 lambda t)") {
  const double lambda = 0.8;
  EvolutionConfig cfg;
  for (double t : {0.3, 1.0, 2.7, 4.0 / lambda}) {
    cfg.t_end = t;
    const DensityState out = evolve_noisy(plus1(), zero_field(1), dephasing(lambda, 1), cfg);
    const double x = (Matrix(pauli_matrix(PauliLabel::X)) * out.rho).trace().real();
    CHECK(x == Catch::Approx(std::exp(-2.0 * lambda * t)).margin(1e-8));
  }
}

TEST_CASE("amplitude damping drives <Z> to 1 - 2 exp(-lambda t)") {
  const double lambda = 0.5;
  Matrix sminus = Matrix::Zero(2, 2);
  sminus(0, 1) = 1.0;
  NoiseModel noise;
  noise.terms.push_back({sminus, {0}, lambda, {}});
  Vector one(2);
  one << 0.0, 1.0;
  EvolutionConfig cfg;
  for (double t : {0.2, 1.5, 4.0 / lambda}) {
    cfg.t_end = t;
    const DensityState out = evolve_noisy(DensityState::pure(one), zero_field(1), noise, cfg);
    const double z = (Matrix(pauli_matrix(PauliLabel::Z)) * out.rho).trace().real();
    CHECK(z == Catch::Approx(1.0 - 2.0 * std::exp(-lambda * t)).margin(1e-8));
  }
}

TEST_CASE("doubled convention doubles the dissipator") {
  const double lambda = 0.6, t = 1.2;
  EvolutionConfig cfg;
  cfg.t_end = t;
  cfg.convention = LindbladConvention::Doubled;
  const DensityState out = evolve_noisy(plus1(), zero_field(1), dephasing(lambda, 1), cfg);
  const double x = (Matrix(pauli_matrix(PauliLabel::X)) * out.rho).trace().real();
  CHECK(x == Catch::Approx(std::exp(-4.0 * lambda * t)).margin(1e-8));
}

TEST_CASE("ideal evolution matches the matrix exponential") {
  HamiltonianSpec h;
  h.terms.terms.push_back(PauliString::parse("XZ", 1.3));
  h.terms.terms.push_back(PauliString::parse("ZY", -0.7));
  h.terms.terms.push_back(PauliString::parse("IX", 0.4));
  EvolutionConfig cfg;
  cfg.t_end = 0.9;
  const DensityState out = evolve_ideal(DensityState::plus_state(2), h, cfg);
  const Matrix u = (-kI * cfg.t_end * h.base_matrix()).exp();
  const Matrix expected = u * DensityState::plus_state(2).rho * u.adjoint();
  CHECK(max_abs_diff(out.rho, expected) < 1e-8);
}

TEST_CASE("noisy evolution matches the Liouvillian exponential") {
  HamiltonianSpec h;
  h.terms.terms.push_back(PauliString::parse("ZZ", 2.0));
  h.terms.terms.push_back(PauliString::parse("XI", 1.0));
  h.terms.terms.push_back(PauliString::parse("IX", 1.0));
  NoiseModel noise = dephasing(0.3, 2);
  Matrix sminus = Matrix::Zero(2, 2);
  sminus(0, 1) = 1.0;
  noise.terms.push_back({sminus, {1}, 0.2, {}});
  Generator gen(h, noise, LindbladConvention::Gksl);
  EvolutionConfig cfg;
  cfg.t_end = 1.1;
  const DensityState out = evolve_noisy(DensityState::plus_state(2), h, noise, cfg);
  const Matrix expl = (cfg.t_end * gen.liouvillian(0.0)).exp();
  const Matrix rho0 = DensityState::plus_state(2).rho;
  const Vector v = expl * Eigen::Map<const Vector>(rho0.data(), 16);
  const Matrix expected = Eigen::Map<const Matrix>(v.data(), 4, 4);
  CHECK(max_abs_diff(out.rho, expected) < 1e-8);
}

TEST_CASE("generator RHS is consistent with its dense Liouvillian") {
  HamiltonianSpec h;
  h.terms.terms.push_back(PauliString::parse("XY", 0.9));
  const NoiseModel noise = dephasing(0.25, 2);
  Generator gen(h, noise, LindbladConvention::Gksl);
  std::mt19937 rng(3);
  std::normal_distribution<double> dist;
  Matrix m(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = Complex(dist(rng), dist(rng));
  m = 0.5 * (m + m.adjoint()).eval();
  const Matrix rhs = gen.rhs(0.0, m);
  const Vector v = gen.liouvillian(0.0) * Eigen::Map<const Vector>(m.data(), 16);
  const Matrix via_l = Eigen::Map<const Matrix>(v.data(), 4, 4);
  CHECK(max_abs_diff(rhs, via_l) < 1e-11);
}

TEST_CASE("rescaled drive reproduces boosted noise") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  HamiltonianSpec h;
  for (const char* s : {"XZ", "YY", "ZI", "IX", "XX"})
    h.terms.terms.push_back(PauliString::parse(s, coeff(rng)));
  const double lambda = 0.15;
  for (double r : {1.5, 2.0}) {
    for (double t : {0.5, 1.0}) {
      EvolutionConfig cfg;
      cfg.t_end = t;
      const DensityState boosted =
          evolve_noisy(DensityState::plus_state(2), h, dephasing(r * lambda, 2), cfg);
      const DensityState rescaled =
          evolve_rescaled(DensityState::plus_state(2), h, dephasing(lambda, 2), r, cfg);
      CHECK(trace_distance(rescaled.rho, boosted.rho) < 1e-8);
    }
  }
}

TEST_CASE("linear-profile dephasing decays <X> as exp(-base t^2)") {
  const double base = 0.3;
  NoiseModel noise;
  noise.terms.push_back(
      {Matrix(pauli_matrix(PauliLabel::Z)), {0}, base, TimeProfile::linear_profile()});
  EvolutionConfig cfg;
  for (double t : {0.7, 1.4, 2.0}) {
    cfg.t_end = t;
    const DensityState out = evolve_noisy(plus1(), zero_field(1), noise, cfg);
    const double x = (Matrix(pauli_matrix(PauliLabel::X)) * out.rho).trace().real();
    CHECK(x == Catch::Approx(std::exp(-base * t * t)).margin(1e-8));
  }
}

TEST_CASE("effective evolution accepts signed rates") {
  NoiseModel diff = dephasing(0.4, 1);
  diff.terms.push_back({Matrix(pauli_matrix(PauliLabel::Z)), {0}, -0.4, {}});
  EvolutionConfig cfg;
  cfg.t_end = 1.0;
  // Exactly cancelling rates leave the state untouched.
  const DensityState out = evolve_effective(plus1(), zero_field(1), diff, cfg);
  CHECK(max_abs_diff(out.rho, plus1().rho) < 1e-9);
  CHECK_THROWS_AS(evolve_noisy(plus1(), zero_field(1), diff, cfg), std::invalid_argument);
}

TEST_CASE("noise model validation") {
  NoiseModel bad;
  bad.terms.push_back({Matrix(pauli_matrix(PauliLabel::Z)), {5}, 0.1, {}});
  CHECK_THROWS_AS(bad.validate(2), std::invalid_argument);
  NoiseModel neg = dephasing(-0.1, 1);
  CHECK_THROWS_AS(neg.validate(1), std::invalid_argument);
  CHECK_NOTHROW(neg.validate(1, /*allow_signed_rates=*/true));
}

TEST_CASE("noise difference carries signed estimated rates") {
  const NoiseModel diff = noise_difference(dephasing(0.44, 1), dephasing(0.4, 1));
  REQUIRE(diff.terms.size() == 2);
  CHECK(diff.terms[0].rate == Catch::Approx(0.44));
  CHECK(diff.terms[1].rate == Catch::Approx(-0.4));
}

TEST_CASE("trace distance of orthogonal pure states is 1") {
  const Matrix z0 = DensityState::zero_state(1).rho;
  Vector one(2);
  one << 0.0, 1.0;
  CHECK(trace_distance(z0, DensityState::pure(one).rho) == Catch::Approx(1.0));
}
