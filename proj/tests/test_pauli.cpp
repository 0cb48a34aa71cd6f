#include "qemforge/pauli.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace qemforge;

namespace {

double max_abs_diff(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("single-qubit Pauli matrices") {
  const Matrix x = pauli_matrix(PauliLabel::X);
  const Matrix y = pauli_matrix(PauliLabel::Y);
  const Matrix z = pauli_matrix(PauliLabel::Z);
  CHECK(x(0, 1) == Complex{1.0, 0.0});
  CHECK(y(0, 1) == -kI);
  CHECK(y(1, 0) == kI);
  CHECK(z(1, 1) == Complex{-1.0, 0.0});
  // XY = iZ
  CHECK(max_abs_diff(x * y, kI * z) < 1e-15);
  // involutions
  CHECK(max_abs_diff(x * x, Matrix::Identity(2, 2)) < 1e-15);
  CHECK(max_abs_diff(y * y, Matrix::Identity(2, 2)) < 1e-15);
}

TEST_CASE("string matrix uses qubit 0 as the leftmost tensor factor") {
  const PauliString s = PauliString::parse("XZ");
  const Matrix expected =
      kron(Matrix(pauli_matrix(PauliLabel::X)), Matrix(pauli_matrix(PauliLabel::Z)));
  CHECK(max_abs_diff(s.matrix(), expected) < 1e-15);

  // X on qubit 0 of two flips the most significant bit.
  const Matrix x0 = PauliString::single(2, 0, PauliLabel::X).matrix();
  CHECK(x0(0, 2) == Complex{1.0, 0.0});
  CHECK(x0(1, 3) == Complex{1.0, 0.0});
  const Matrix x1 = PauliString::single(2, 1, PauliLabel::X).matrix();
  CHECK(x1(0, 1) == Complex{1.0, 0.0});
}

TEST_CASE("parse rejects unknown labels") {
  CHECK_THROWS_AS(PauliString::parse("XQ"), std::invalid_argument);
}

TEST_CASE("index digits put qubit 0 in the most significant position") {
  // k = 7 on two qubits: digits (1, 3) -> X on qubit 0, Z on qubit 1.
  const auto labels = pauli_index_labels(7, 2);
  REQUIRE(labels.size() == 2);
  CHECK(labels[0] == PauliLabel::X);
  CHECK(labels[1] == PauliLabel::Z);
  // Round trip through the cached basis.
  const auto& basis = pauli_basis(2);
  REQUIRE(basis.size() == 16);
  CHECK(max_abs_diff(basis[7], PauliString::parse("XZ").matrix()) < 1e-15);
}

TEST_CASE("two-site constructor embeds both factors") {
  const PauliString s = PauliString::two(3, 0, PauliLabel::Z, 2, PauliLabel::X, 2.5);
  CHECK(s.text() == "ZIX");
  CHECK(max_abs_diff(s.matrix(), 2.5 * PauliString::parse("ZIX").matrix()) < 1e-14);
}

TEST_CASE("Pauli sums add term matrices") {
  PauliSum sum;
  sum.terms.push_back(PauliString::parse("XI", 1.0));
  sum.terms.push_back(PauliString::parse("IX", 1.0));
  const Matrix m = sum.matrix();
  CHECK(max_abs_diff(m, PauliString::parse("XI").matrix() +
                            PauliString::parse("IX").matrix()) < 1e-15);
  CHECK(max_abs_diff(m, m.adjoint()) < 1e-15);
}

TEST_CASE("power helpers") {
  CHECK(pow2(0) == 1);
  CHECK(pow2(5) == 32);
  CHECK(pow4(3) == 64);
}
