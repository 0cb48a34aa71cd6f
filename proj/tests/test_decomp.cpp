#include "qemforge/decomp.hpp"
#include "qemforge/simplex.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <unsupported/Eigen/MatrixFunctions>

using namespace qemforge;

namespace {

RecoveryGenerator::Subsystem subsystem1(const RealMatrix& g) {
  RecoveryGenerator::Subsystem sub;
  sub.support = {0};
  sub.g = g;
  return sub;
}

double entry_q(const QuasiDecomposition& d, const std::string& name) {
  for (const auto& e : d.entries)
    if (e.name == name) return e.q;
  return 0.0;
}

// PTM of exp(G dt) for a real generator G.
RealMatrix step_ptm(const RealMatrix& g, double dt) {
  const Matrix e = (Matrix(g.cast<Complex>()) * dt).exp();
  return e.real();
}

}  // namespace

TEST_CASE("dephasing recovery: (1 + lambda dt)[I] - lambda dt [sz]") {
  const double lambda = 0.7;
  NoiseModel noise;
  noise.terms.push_back({Matrix(pauli_matrix(PauliLabel::Z)), {0}, lambda, {}});
  const RecoveryGenerator gen = recovery_generator(noise, 1);
  REQUIRE(gen.subsystems.size() == 1);
  const QuasiDecomposition d = decompose_minimal(gen.subsystems[0]);
  CHECK(d.q0 == Catch::Approx(lambda).margin(1e-10));
  CHECK(entry_q(d, "[sz]") == Catch::Approx(-lambda).margin(1e-10));
  CHECK(d.c1 == Catch::Approx(2.0 * lambda).margin(1e-10));
  CHECK(d.gamma == Catch::Approx(lambda).margin(1e-10));
  CHECK(d.reconstruction_residual(gen.subsystems[0].g) < 1e-10);
}

TEST_CASE("depolarizing recovery: (1 + 3/4 lambda dt)[I] - lambda/4 (X + Y + Z) dt") {
  const double lambda = 1.1;
  RealMatrix g = RealMatrix::Zero(4, 4);
  g(1, 1) = g(2, 2) = g(3, 3) = lambda;  // undoes d rho/dt = lambda(I/2 Tr rho - rho)
  const QuasiDecomposition d = decompose_minimal(subsystem1(g));
  CHECK(d.q0 == Catch::Approx(0.75 * lambda).margin(1e-10));
  CHECK(entry_q(d, "[sx]") == Catch::Approx(-0.25 * lambda).margin(1e-10));
  CHECK(entry_q(d, "[sy]") == Catch::Approx(-0.25 * lambda).margin(1e-10));
  CHECK(entry_q(d, "[sz]") == Catch::Approx(-0.25 * lambda).margin(1e-10));
  CHECK(d.c1 == Catch::Approx(1.5 * lambda).margin(1e-10));
}

TEST_CASE("amplitude-damping recovery matches the analytic five-term form") {
  const double lambda = 0.9;
  Matrix sminus = Matrix::Zero(2, 2);
  sminus(0, 1) = 1.0;
  NoiseModel noise;
  noise.terms.push_back({sminus, {0}, lambda, {}});
  const RecoveryGenerator gen = recovery_generator(noise, 1);
  const QuasiDecomposition d = decompose_minimal(gen.subsystems[0]);
  CHECK(d.q0 == Catch::Approx(0.25 * lambda).margin(1e-10));
  CHECK(entry_q(d, "[sx]") == Catch::Approx(-0.5 * lambda).margin(1e-10));
  CHECK(entry_q(d, "[sy]") == Catch::Approx(-0.5 * lambda).margin(1e-10));
  CHECK(entry_q(d, "[sz]") == Catch::Approx(-0.25 * lambda).margin(1e-10));
  CHECK(entry_q(d, "[R_xy]") == Catch::Approx(lambda).margin(1e-10));
  CHECK(entry_q(d, "[pi_xy]") == Catch::Approx(lambda).margin(1e-10));
  CHECK(d.c1 == Catch::Approx(3.5 * lambda).margin(1e-10));
}

TEST_CASE("crosstalk recovery: (1 + lambda dt)[I] + lambda dt [sx] - 2 lambda dt [R_x]") {
  const double lambda = 0.35;  // gamma * Omega
  NoiseModel noise;
  HamiltonianSpec dh;
  dh.terms.terms.push_back(PauliString::single(1, 0, PauliLabel::X, lambda));
  noise.coherent_error = dh;
  const RecoveryGenerator gen = recovery_generator(noise, 1);
  REQUIRE(gen.subsystems.size() == 1);
  const QuasiDecomposition d = decompose_minimal(gen.subsystems[0]);
  CHECK(d.q0 == Catch::Approx(lambda).margin(1e-10));
  CHECK(entry_q(d, "[sx]") == Catch::Approx(lambda).margin(1e-10));
  CHECK(entry_q(d, "[R_x]") == Catch::Approx(-2.0 * lambda).margin(1e-10));
  CHECK(d.c1 == Catch::Approx(4.0 * lambda).margin(1e-10));
}

TEST_CASE("composed recovery cancels one noise step to second order") {
  struct Case {
    std::string name;
    RealMatrix noise_gen;  // G_N, so that E_N(dt) = exp(G_N dt)
  };
  std::vector<Case> cases;
  const double lambda = 1.0;
  cases.push_back(
      {"dephasing", lambda * dissipator_ptm(Matrix(pauli_matrix(PauliLabel::Z)), 1).entries});
  Matrix sminus = Matrix::Zero(2, 2);
  sminus(0, 1) = 1.0;
  cases.push_back({"amp_damping", lambda * dissipator_ptm(sminus, 1).entries});
  RealMatrix depol = RealMatrix::Zero(4, 4);
  depol(1, 1) = depol(2, 2) = depol(3, 3) = -lambda;
  cases.push_back({"depolarizing", depol});
  cases.push_back({"crosstalk",
                   commutator_ptm(Matrix(0.4 * pauli_matrix(PauliLabel::X)), 1).entries});

  for (const auto& c : cases) {
    INFO(c.name);
    const QuasiDecomposition d = decompose_minimal(subsystem1(RealMatrix(-c.noise_gen)));
    // E_Q(dt) = I + G_Q dt from the decomposition itself.
    std::vector<double> errs;
    const std::vector<double> dts = {1e-2, 5e-3, 2.5e-3};
    for (double dt : dts) {
      RealMatrix eq = RealMatrix::Identity(4, 4) * (1.0 + d.q0 * dt);
      for (const auto& e : d.entries) eq += dt * e.q * e.ptm.entries;
      const RealMatrix composed = eq * step_ptm(c.noise_gen, dt);
      errs.push_back((composed - RealMatrix::Identity(4, 4)).cwiseAbs().maxCoeff());
    }
    const double order1 = std::log(errs[0] / errs[1]) / std::log(dts[0] / dts[1]);
    const double order2 = std::log(errs[1] / errs[2]) / std::log(dts[1] / dts[2]);
    CHECK(order1 == Catch::Approx(2.0).margin(0.2));
    CHECK(order2 == Catch::Approx(2.0).margin(0.2));
  }
}

TEST_CASE("LP decomposition reconstructs and never exceeds the exact-solve one-norm") {
  const auto extra = overcomplete_extra_basis();
  std::vector<RealMatrix> gens;
  gens.push_back([] {
    RealMatrix g = RealMatrix::Zero(4, 4);
    g(1, 1) = g(2, 2) = 0.8;
    return g;
  }());
  Matrix sminus = Matrix::Zero(2, 2);
  sminus(0, 1) = 1.0;
  gens.push_back(-0.5 * dissipator_ptm(sminus, 1).entries);
  gens.push_back(-commutator_ptm(Matrix(0.3 * pauli_matrix(PauliLabel::Y)), 1).entries);
  for (const auto& g : gens) {
    const QuasiDecomposition exact = decompose_minimal(subsystem1(g));
    const QuasiDecomposition lp = decompose_lp(subsystem1(g), extra);
    CHECK(lp.reconstruction_residual(g) < 1e-10);
    CHECK(lp.c1 <= exact.c1 + 1e-8);
  }
}

TEST_CASE("pick_entry uses half-open cumulative bins") {
  QuasiDecomposition d;
  QuasiDecomposition::Entry a, b;
  a.q = 0.5;
  b.q = -0.5;
  d.entries = {a, b};
  d.finalize();
  CHECK(d.pick_entry(0.0) == 0);
  CHECK(d.pick_entry(0.499) == 0);
  CHECK(d.pick_entry(0.5) == 1);
  CHECK(d.pick_entry(1.0) == 1);
}

TEST_CASE("simplex solves a small LP") {
  // min -x1 - 2 x2  s.t.  x1 + x2 + s = 4, x1 + 3 x2 + t = 6
  Eigen::MatrixXd a(2, 4);
  a << 1, 1, 1, 0,
       1, 3, 0, 1;
  Eigen::VectorXd b(2);
  b << 4, 6;
  Eigen::VectorXd c(4);
  c << -1, -2, 0, 0;
  const SimplexResult res = simplex_solve(a, b, c);
  CHECK(res.objective == Catch::Approx(-5.0));
  CHECK(res.x[0] == Catch::Approx(3.0));
  CHECK(res.x[1] == Catch::Approx(1.0));
}

TEST_CASE("simplex reports infeasible systems") {
  Eigen::MatrixXd a(2, 1);
  a << 1, 1;
  Eigen::VectorXd b(2);
  b << 1, 2;
  Eigen::VectorXd c(1);
  c << 1;
  CHECK_THROWS_AS(simplex_solve(a, b, c), SimplexError);
}

TEST_CASE("cost: exponential matches the discretised product") {
  const double lambda = 0.4;
  NoiseModel noise;
  noise.terms.push_back({Matrix(pauli_matrix(PauliLabel::Z)), {0}, lambda, {}});
  const auto decomps = decompose_minimal(recovery_generator(noise, 1));
  const double t_end = 2.0;
  const CostReport report = cost_overhead(decomps, t_end, 1, lambda);
  const int steps = 10000;
  double prod = 1.0;
  for (int i = 0; i < steps; ++i) prod *= 1.0 + report.c1_total * t_end / steps;
  CHECK(report.overhead_c == Catch::Approx(prod).epsilon(1e-4));
  CHECK(report.overhead_c == Catch::Approx(std::exp(2.0 * lambda * t_end)).margin(1e-12));
  CHECK(report.total_noise_strength == Catch::Approx(1.0 * t_end * lambda));
}

TEST_CASE("cost: linear profile integrates to T^2/2") {
  const double base = 0.2;
  NoiseModel noise;
  noise.terms.push_back(
      {Matrix(pauli_matrix(PauliLabel::Z)), {0}, base, TimeProfile::linear_profile()});
  const auto decomps = decompose_minimal(recovery_generator(noise, 1));
  const CostReport report = cost_overhead(decomps, 3.0, 1, base);
  CHECK(report.c1_integral == Catch::Approx(2.0 * base * 4.5).margin(1e-12));
}

TEST_CASE("depolarizing inverse at p = 0.5") {
  const DepolarizingInverse inv = invert_depolarizing(0.5);
  CHECK(inv.overhead_c == Catch::Approx(2.5));
  CHECK(inv.p1 == Catch::Approx(0.7));
  CHECK(inv.p2 == Catch::Approx(0.1));
  const RealMatrix prod = inv.ptm.entries * depolarizing_ptm(0.5).entries;
  CHECK((prod - RealMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("two-qubit subsystems decompose over the 256-element product basis") {
  Matrix zz = PauliString::parse("ZZ").matrix();
  NoiseModel noise;
  noise.terms.push_back({zz, {0, 1}, 0.3, {}});
  const RecoveryGenerator gen = recovery_generator(noise, 2);
  REQUIRE(gen.subsystems.size() == 1);
  const QuasiDecomposition d = decompose_minimal(gen.subsystems[0]);
  CHECK(d.reconstruction_residual(gen.subsystems[0].g) < 1e-10);
  CHECK(d.c1 == Catch::Approx(0.6).margin(1e-9));  // correlated dephasing: 2 lambda
}
