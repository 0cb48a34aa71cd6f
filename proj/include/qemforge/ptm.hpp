#pragma once

// Pauli transfer matrix (PTM) representation of states, observables and
// channels, plus machinery to apply local maps to full-system density
// matrices without materializing a 4^n transfer matrix.
//
// Normalization follows E_{k,j} = (1/2^m) Tr(P_k E(P_j)), so a
// trace-preserving map has first row (1, 0, ..., 0).

#include "qemforge/pauli.hpp"

#include <algorithm>
#include <numeric>

namespace qemforge {

enum class VectorKind { State, Observable };

// Real Pauli-basis vector of a state (column) or observable (row).
struct PauliVector {
  RealVector entries;
  VectorKind kind = VectorKind::State;

  int num_qubits() const {
    int n = 0;
    while (pow4(n) < entries.size()) ++n;
    return n;
  }
};

// Real 4^m x 4^m transfer matrix of an m-qubit map.
struct TransferMatrix {
  RealMatrix entries;
  int arity = 0;

  static TransferMatrix identity(int m) {
    return TransferMatrix{RealMatrix::Identity(pow4(m), pow4(m)), m};
  }
};

// Kraus representation of a local map, with the system qubits it acts on.
struct KrausMap {
  std::vector<Matrix> operators;
  std::vector<int> support;  // empty means "local only", qubit ids otherwise

  int arity() const {
    if (operators.empty()) throw std::invalid_argument("empty Kraus map");
    int m = 0;
    while (pow2(m) < operators.front().rows()) ++m;
    return m;
  }

  bool is_trace_preserving(double tol = 1e-12) const {
    const Eigen::Index d = operators.front().rows();
    Matrix sum = Matrix::Zero(d, d);
    for (const auto& a : operators) sum += a.adjoint() * a;
    return (sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() < tol;
  }

  // E(X) = sum_f A_f X A_f^dag, dense.
  Matrix apply(const Matrix& x) const {
    Matrix out = Matrix::Zero(x.rows(), x.cols());
    for (const auto& a : operators) out += a * x * a.adjoint();
    return out;
  }
};

inline void check_hermitian(const Matrix& m, double tol, const char* what) {
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol)
    throw std::invalid_argument(std::string(what) + ": input is not Hermitian");
}

inline PauliVector pauli_vectorize(const Matrix& m, VectorKind kind,
                                   double herm_tol = 1e-10) {
  check_hermitian(m, herm_tol, "pauli_vectorize");
  int n = 0;
  while (pow2(n) < m.rows()) ++n;
  if (pow2(n) != m.rows() || m.rows() != m.cols())
    throw std::invalid_argument("pauli_vectorize: dimension is not 2^n");
  PauliVector v;
  v.kind = kind;
  v.entries.resize(pow4(n));
  const double scale = kind == VectorKind::State ? 1.0 : 1.0 / static_cast<double>(pow2(n));
  // Tr(P_k m) accumulated entry-wise; P_k has one nonzero per row.
  for (Eigen::Index k = 0; k < pow4(n); ++k) {
    const auto labels = pauli_index_labels(k, n);
    Complex tr = 0.0;
    for (Eigen::Index i = 0; i < pow2(n); ++i) {
      // column j and phase such that P_k(i, j) = phase
      Eigen::Index j = 0;
      Complex phase = 1.0;
      for (int q = 0; q < n; ++q) {
        const int bit = static_cast<int>((i >> (n - 1 - q)) & 1);
        int outbit = bit;
        Complex p = 1.0;
        switch (labels[static_cast<std::size_t>(q)]) {
          case PauliLabel::I: break;
          case PauliLabel::X: outbit = 1 - bit; break;
          case PauliLabel::Y: outbit = 1 - bit; p = bit ? -kI : kI; break;
          case PauliLabel::Z: p = bit ? -1.0 : 1.0; break;
        }
        j |= static_cast<Eigen::Index>(outbit) << (n - 1 - q);
        phase *= p;
      }
      tr += phase * m(j, i);
    }
    v.entries[k] = scale * tr.real();
  }
  return v;
}

// Inverse of pauli_vectorize for states: rho = (1/2^n) sum_k rho_k P_k.
inline Matrix pauli_devectorize(const PauliVector& v) {
  const int n = v.num_qubits();
  const Eigen::Index d = pow2(n);
  Matrix m = Matrix::Zero(d, d);
  const double scale =
      v.kind == VectorKind::State ? 1.0 / static_cast<double>(d) : 1.0;
  for (Eigen::Index k = 0; k < v.entries.size(); ++k) {
    if (v.entries[k] == 0.0) continue;
    m += scale * v.entries[k] * PauliString(pauli_index_labels(k, n)).matrix();
  }
  return m;
}

inline TransferMatrix ptm_from_kraus(const KrausMap& map) {
  const int m = map.arity();
  if (m > 2) throw std::invalid_argument("ptm_from_kraus: arity > 2");
  const auto& basis = pauli_basis(m);
  TransferMatrix t;
  t.arity = m;
  t.entries.resize(pow4(m), pow4(m));
  const double inv_d = 1.0 / static_cast<double>(pow2(m));
  for (Eigen::Index j = 0; j < pow4(m); ++j) {
    const Matrix ep = map.apply(basis[static_cast<std::size_t>(j)]);
    for (Eigen::Index k = 0; k < pow4(m); ++k)
      t.entries(k, j) = inv_d * (basis[static_cast<std::size_t>(k)] * ep).trace().real();
  }
  return t;
}

inline double ptm_expectation(const PauliVector& observable,
                              const TransferMatrix& channel,
                              const PauliVector& state) {
  if (observable.entries.size() != channel.entries.rows() ||
      state.entries.size() != channel.entries.cols())
    throw std::invalid_argument("ptm_expectation: dimension mismatch");
  return observable.entries.dot(channel.entries * state.entries);
}

// Superoperator matrix (column-major vec convention) of a local PTM:
// vec(E(X)) = S vec(X) with E(X) = sum_kj E_kj (1/2^m) Tr(P_j X) P_k.
inline Matrix ptm_to_superop(const TransferMatrix& t) {
  const int m = t.arity;
  const auto& basis = pauli_basis(m);
  const Eigen::Index d2 = pow4(m);
  Matrix s = Matrix::Zero(d2, d2);
  const double inv_d = 1.0 / static_cast<double>(pow2(m));
  std::vector<Vector> vecs;
  vecs.reserve(static_cast<std::size_t>(d2));
  for (Eigen::Index k = 0; k < d2; ++k)
    vecs.push_back(Vector(Eigen::Map<const Vector>(
        basis[static_cast<std::size_t>(k)].data(), d2)));
  for (Eigen::Index k = 0; k < d2; ++k)
    for (Eigen::Index j = 0; j < d2; ++j)
      if (t.entries(k, j) != 0.0)
        s += (t.entries(k, j) * inv_d) * vecs[static_cast<std::size_t>(k)] *
             vecs[static_cast<std::size_t>(j)].adjoint();
  return s;
}

// ---------------------------------------------------------------------------
// Local map application on full-system density matrices.
// ---------------------------------------------------------------------------

inline void check_support(const std::vector<int>& support, int n) {
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (support[i] < 0 || support[i] >= n)
      throw std::invalid_argument("support index out of range");
    for (std::size_t j = i + 1; j < support.size(); ++j)
      if (support[i] == support[j])
        throw std::invalid_argument("duplicate support index");
  }
}

// Index permutation that moves `support` qubits to the most significant
// positions. Shared by all local-application routines.
class QubitPermutation {
 public:
  QubitPermutation(const std::vector<int>& support, int n) : n_(n) {
    check_support(support, n);
    std::vector<int> order = support;
    for (int q = 0; q < n; ++q)
      if (std::find(support.begin(), support.end(), q) == support.end())
        order.push_back(q);
    perm_.resize(static_cast<std::size_t>(pow2(n)));
    for (Eigen::Index i = 0; i < pow2(n); ++i) {
      Eigen::Index out = 0;
      for (int pos = 0; pos < n; ++pos) {
        const int bit = static_cast<int>((i >> (n - 1 - order[static_cast<std::size_t>(pos)])) & 1);
        out |= static_cast<Eigen::Index>(bit) << (n - 1 - pos);
      }
      perm_[static_cast<std::size_t>(i)] = out;
    }
  }

  Matrix permute(const Matrix& m) const {
    Matrix out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        out(perm_[static_cast<std::size_t>(i)], perm_[static_cast<std::size_t>(j)]) = m(i, j);
    return out;
  }

  Matrix unpermute(const Matrix& m) const {
    Matrix out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        out(i, j) = m(perm_[static_cast<std::size_t>(i)], perm_[static_cast<std::size_t>(j)]);
    return out;
  }

  int n() const { return n_; }

 private:
  int n_;
  std::vector<Eigen::Index> perm_;
};

// A local operator A on `support`, applicable to 2^n matrices as
// (A (x) I) M or M (A (x) I) without building the embedded matrix.
class EmbeddedOp {
 public:
  EmbeddedOp(Matrix local, std::vector<int> support, int n)
      : a_(std::move(local)), m_(0), perm_(support, n) {
    while (pow2(m_) < a_.rows()) ++m_;
    if (pow2(m_) != a_.rows() || a_.rows() != a_.cols() ||
        static_cast<std::size_t>(m_) != support.size())
      throw std::invalid_argument("EmbeddedOp: operator dimensions inconsistent with support");
    rest_ = pow2(n - m_);
  }

  // (A (x) I) M
  Matrix left(const Matrix& m) const {
    const Matrix mp = perm_.permute(m);
    Matrix out = Matrix::Zero(m.rows(), m.cols());
    const Eigen::Index dl = pow2(m_);
    for (Eigen::Index a = 0; a < dl; ++a)
      for (Eigen::Index b = 0; b < dl; ++b)
        if (a_(a, b) != Complex{0.0, 0.0})
          out.middleRows(a * rest_, rest_) += a_(a, b) * mp.middleRows(b * rest_, rest_);
    return perm_.unpermute(out);
  }

  // M (A (x) I)
  Matrix right(const Matrix& m) const {
    const Matrix mp = perm_.permute(m);
    Matrix out = Matrix::Zero(m.rows(), m.cols());
    const Eigen::Index dl = pow2(m_);
    for (Eigen::Index a = 0; a < dl; ++a)
      for (Eigen::Index b = 0; b < dl; ++b)
        if (a_(a, b) != Complex{0.0, 0.0})
          out.middleCols(b * rest_, rest_) += a_(a, b) * mp.middleCols(a * rest_, rest_);
    return perm_.unpermute(out);
  }

  // A M A^dag
  Matrix sandwich(const Matrix& m) const {
    const Matrix mp = perm_.permute(m);
    const Eigen::Index dl = pow2(m_);
    Matrix tmp = Matrix::Zero(m.rows(), m.cols());
    for (Eigen::Index a = 0; a < dl; ++a)
      for (Eigen::Index b = 0; b < dl; ++b)
        if (a_(a, b) != Complex{0.0, 0.0})
          tmp.middleRows(a * rest_, rest_) += a_(a, b) * mp.middleRows(b * rest_, rest_);
    Matrix out = Matrix::Zero(m.rows(), m.cols());
    for (Eigen::Index a = 0; a < dl; ++a)
      for (Eigen::Index b = 0; b < dl; ++b)
        if (a_(a, b) != Complex{0.0, 0.0})
          out.middleCols(b * rest_, rest_) += std::conj(a_(a, b)) * tmp.middleCols(a * rest_, rest_);
    return perm_.unpermute(out);
  }

  // Dense 2^n embedded matrix; for oracles and small-system fast paths.
  Matrix dense() const {
    const Eigen::Index d = pow2(m_) * rest_;
    Matrix id = Matrix::Identity(d, d);
    Matrix out(d, d);
    for (Eigen::Index j = 0; j < d; ++j) out.col(j) = left(Matrix(id.col(j)));
    return out;
  }

  const Matrix& local() const { return a_; }

 private:
  Matrix a_;
  int m_;
  Eigen::Index rest_;
  QubitPermutation perm_;
};

// Full-system application of a local Kraus map: rho -> sum_f A_f rho A_f^dag.
class EmbeddedKraus {
 public:
  EmbeddedKraus(const KrausMap& map, int n) {
    if (map.support.empty()) throw std::invalid_argument("EmbeddedKraus: no support");
    for (const auto& a : map.operators)
      ops_.emplace_back(a, map.support, n);
  }

  Matrix apply(const Matrix& rho) const {
    Matrix out = Matrix::Zero(rho.rows(), rho.cols());
    for (const auto& op : ops_) out += op.sandwich(rho);
    return out;
  }

 private:
  std::vector<EmbeddedOp> ops_;
};

// Full-system application of a local superoperator S (4^m x 4^m, column-major
// vec convention on the local block). Cost O(4^n * 4^m).
class EmbeddedSuperOp {
 public:
  EmbeddedSuperOp(Matrix superop, std::vector<int> support, int n)
      : s_(std::move(superop)), perm_(support, n) {
    m_ = static_cast<int>(support.size());
    if (s_.rows() != pow4(m_) || s_.cols() != pow4(m_))
      throw std::invalid_argument("EmbeddedSuperOp: superoperator dimension mismatch");
    rest_ = pow2(n - m_);
  }

  Matrix apply(const Matrix& rho) const {
    const Matrix rp = perm_.permute(rho);
    Matrix out = Matrix::Zero(rho.rows(), rho.cols());
    const Eigen::Index dl = pow2(m_);
    for (Eigen::Index a = 0; a < dl; ++a)
      for (Eigen::Index b = 0; b < dl; ++b)
        for (Eigen::Index ap = 0; ap < dl; ++ap)
          for (Eigen::Index bp = 0; bp < dl; ++bp) {
            const Complex c = s_(a + dl * b, ap + dl * bp);
            if (c != Complex{0.0, 0.0})
              out.block(a * rest_, b * rest_, rest_, rest_) +=
                  c * rp.block(ap * rest_, bp * rest_, rest_, rest_);
          }
    return perm_.unpermute(out);
  }

 private:
  Matrix s_;
  int m_;
  Eigen::Index rest_;
  QubitPermutation perm_;
};

// ---------------------------------------------------------------------------
// The 16-element single-qubit basis-operation catalog.
// ---------------------------------------------------------------------------

struct BasisOperation {
  int id = 0;               // 1-16
  std::string name;
  KrausMap kraus;           // single qubit, support unset
  TransferMatrix ptm;
  bool trace_preserving = false;
};

inline const std::vector<BasisOperation>& basis16_table() {
  static const std::vector<BasisOperation> table = [] {
    const Matrix id2 = pauli_matrix(PauliLabel::I);
    const Matrix x = pauli_matrix(PauliLabel::X);
    const Matrix y = pauli_matrix(PauliLabel::Y);
    const Matrix z = pauli_matrix(PauliLabel::Z);
    const double s = 1.0 / std::sqrt(2.0);
    std::vector<std::pair<std::string, Matrix>> defs = {
        {"[I]", id2},
        {"[sx]", x},
        {"[sy]", y},
        {"[sz]", z},
        {"[R_x]", s * (id2 + kI * x)},
        {"[R_y]", s * (id2 + kI * y)},
        {"[R_z]", s * (id2 + kI * z)},
        {"[R_yz]", s * (y + z)},
        {"[R_zx]", s * (z + x)},
        {"[R_xy]", s * (x + y)},
        {"[pi_x]", 0.5 * (id2 + x)},
        {"[pi_y]", 0.5 * (id2 + y)},
        {"[pi_z]", 0.5 * (id2 + z)},
        {"[pi_yz]", 0.5 * (y + kI * z)},
        {"[pi_zx]", 0.5 * (z + kI * x)},
        {"[pi_xy]", 0.5 * (x + kI * y)},
    };
    std::vector<BasisOperation> ops;
    int id = 1;
    for (auto& [name, a] : defs) {
      BasisOperation op;
      op.id = id++;
      op.name = name;
      op.kraus.operators = {a};
      op.ptm = ptm_from_kraus(op.kraus);
      op.trace_preserving = op.kraus.is_trace_preserving();
      ops.push_back(std::move(op));
    }
    return ops;
  }();
  return table;
}

}  // namespace qemforge
