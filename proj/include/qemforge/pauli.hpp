#pragma once

// Pauli-string algebra and dense matrix realizations.
//
// Conventions (fixed throughout the library):
//  - Pauli labels are base-4 digits with I=0, X=1, Y=2, Z=3.
//  - A length-n Pauli index k in [0, 4^n) stores the digit of qubit 0 in the
//    most significant position.
//  - Qubit 0 is the leftmost tensor factor, i.e. the most significant bit of
//    a computational basis index.

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qemforge {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

enum class PauliLabel : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char pauli_char(PauliLabel p) { return "IXYZ"[static_cast<int>(p)]; }

inline const Eigen::Matrix2cd& pauli_matrix(PauliLabel p) {
  static const std::array<Eigen::Matrix2cd, 4> mats = [] {
    std::array<Eigen::Matrix2cd, 4> m;
    m[0] << 1, 0, 0, 1;
    m[1] << 0, 1, 1, 0;
    m[2] << 0, -kI, kI, 0;
    m[3] << 1, 0, 0, -1;
    return m;
  }();
  return mats[static_cast<int>(p)];
}

// A real-weighted Pauli string acting on n qubits.
struct PauliString {
  std::vector<PauliLabel> labels;
  double coefficient = 1.0;

  PauliString() = default;
  PauliString(std::vector<PauliLabel> l, double c = 1.0)
      : labels(std::move(l)), coefficient(c) {}

  // Construct from a text form like "XXIZ".
  static PauliString parse(const std::string& text, double coeff = 1.0) {
    std::vector<PauliLabel> l;
    l.reserve(text.size());
    for (char ch : text) {
      switch (ch) {
        case 'I': l.push_back(PauliLabel::I); break;
        case 'X': l.push_back(PauliLabel::X); break;
        case 'Y': l.push_back(PauliLabel::Y); break;
        case 'Z': l.push_back(PauliLabel::Z); break;
        default: throw std::invalid_argument("bad Pauli label: " + std::string(1, ch));
      }
    }
    return PauliString(std::move(l), coeff);
  }

  // Single-site string P on qubit `q` of an n-qubit register.
  static PauliString single(int n, int q, PauliLabel p, double coeff = 1.0) {
    std::vector<PauliLabel> l(static_cast<std::size_t>(n), PauliLabel::I);
    l[static_cast<std::size_t>(q)] = p;
    return PauliString(std::move(l), coeff);
  }

  // Two-site string on qubits `a` and `b`.
  static PauliString two(int n, int a, PauliLabel pa, int b, PauliLabel pb,
                         double coeff = 1.0) {
    std::vector<PauliLabel> l(static_cast<std::size_t>(n), PauliLabel::I);
    l[static_cast<std::size_t>(a)] = pa;
    l[static_cast<std::size_t>(b)] = pb;
    return PauliString(std::move(l), coeff);
  }

  int num_qubits() const { return static_cast<int>(labels.size()); }

  std::string text() const {
    std::string s;
    for (auto p : labels) s.push_back(pauli_char(p));
    return s;
  }

  Matrix matrix() const;
};

inline Eigen::Index pow2(int n) { return Eigen::Index{1} << n; }
inline Eigen::Index pow4(int n) { return Eigen::Index{1} << (2 * n); }

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Matrix PauliString::matrix() const {
  Matrix m = Matrix::Identity(1, 1);
  for (auto p : labels) m = kron(m, Matrix(pauli_matrix(p)));
  return m * coefficient;
}

// Labels of the Pauli string with index k on n qubits.
inline std::vector<PauliLabel> pauli_index_labels(Eigen::Index k, int n) {
  std::vector<PauliLabel> l(static_cast<std::size_t>(n));
  for (int q = n - 1; q >= 0; --q) {
    l[static_cast<std::size_t>(q)] = static_cast<PauliLabel>(k & 3);
    k >>= 2;
  }
  return l;
}

// Dense matrices of all 4^n Pauli strings, in index order. Cached per n for
// n <= 2 since those appear in every PTM conversion.
inline const std::vector<Matrix>& pauli_basis(int n) {
  static const std::vector<Matrix> basis1 = [] {
    std::vector<Matrix> b;
    for (Eigen::Index k = 0; k < 4; ++k)
      b.push_back(PauliString(pauli_index_labels(k, 1)).matrix());
    return b;
  }();
  static const std::vector<Matrix> basis2 = [] {
    std::vector<Matrix> b;
    for (Eigen::Index k = 0; k < 16; ++k)
      b.push_back(PauliString(pauli_index_labels(k, 2)).matrix());
    return b;
  }();
  if (n == 1) return basis1;
  if (n == 2) return basis2;
  throw std::invalid_argument("pauli_basis cached only for n <= 2");
}

// A real linear combination of Pauli strings; used for observables and
// Hamiltonian terms.
struct PauliSum {
  std::vector<PauliString> terms;

  int num_qubits() const { return terms.empty() ? 0 : terms.front().num_qubits(); }

  Matrix matrix() const {
    if (terms.empty()) throw std::invalid_argument("empty Pauli sum");
    const Eigen::Index d = pow2(num_qubits());
    Matrix m = Matrix::Zero(d, d);
    for (const auto& t : terms) m += t.matrix();
    return m;
  }
};

}  // namespace qemforge
