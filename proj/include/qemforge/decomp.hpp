#pragma once

// Construction of the recovery generator E_Q = I + G_Q dt, its
// quasi-probability decomposition over basis operations (exact linear solve
// or one-norm-minimizing LP over an over-complete basis), and sampling-cost
// accounting.

#include "qemforge/lindblad.hpp"
#include "qemforge/ptm.hpp"
#include "qemforge/simplex.hpp"

#include <cmath>
#include <map>

namespace qemforge {

// PTM of a generic local superoperator given its action on matrices.
inline TransferMatrix ptm_of_action(const std::function<Matrix(const Matrix&)>& action,
                                    int m) {
  const auto& basis = pauli_basis(m);
  TransferMatrix t;
  t.arity = m;
  t.entries.resize(pow4(m), pow4(m));
  const double inv_d = 1.0 / static_cast<double>(pow2(m));
  for (Eigen::Index j = 0; j < pow4(m); ++j) {
    const Matrix out = action(basis[static_cast<std::size_t>(j)]);
    for (Eigen::Index k = 0; k < pow4(m); ++k)
      t.entries(k, j) = inv_d * (basis[static_cast<std::size_t>(k)] * out).trace().real();
  }
  return t;
}

// PTM of the unit-rate GKSL dissipator of a local jump operator.
inline TransferMatrix dissipator_ptm(const Matrix& jump, int m) {
  const Matrix jdj = jump.adjoint() * jump;
  return ptm_of_action(
      [&](const Matrix& x) {
        return Matrix(jump * x * jump.adjoint() - 0.5 * (jdj * x + x * jdj));
      },
      m);
}

// PTM of X -> -i [A, X].
inline TransferMatrix commutator_ptm(const Matrix& a, int m) {
  return ptm_of_action([&](const Matrix& x) { return Matrix(-kI * (a * x - x * a)); }, m);
}

// One local generator G_Q per noise-term support: E_Q = I + G_Q dt undoes the
// estimated noise step to first order.
struct RecoveryGenerator {
  struct Subsystem {
    std::vector<int> support;
    RealMatrix g;          // 4^m x 4^m, 1/us (base value; scaled by profile)
    TimeProfile profile;
  };
  std::vector<Subsystem> subsystems;
};

inline RecoveryGenerator recovery_generator(const NoiseModel& estimated, int n) {
  estimated.validate(n);
  RecoveryGenerator out;
  // Group terms acting on the same support with the same time profile.
  std::map<std::pair<std::vector<int>, int>, std::size_t> slot;
  auto subsystem_for = [&](const std::vector<int>& support, TimeProfile profile)
      -> RecoveryGenerator::Subsystem& {
    const auto key = std::make_pair(support, static_cast<int>(profile.kind));
    auto it = slot.find(key);
    if (it == slot.end()) {
      RecoveryGenerator::Subsystem sub;
      sub.support = support;
      sub.profile = profile;
      sub.g = RealMatrix::Zero(pow4(static_cast<int>(support.size())),
                               pow4(static_cast<int>(support.size())));
      out.subsystems.push_back(std::move(sub));
      it = slot.emplace(key, out.subsystems.size() - 1).first;
    }
    return out.subsystems[it->second];
  };
  for (const auto& term : estimated.terms) {
    auto& sub = subsystem_for(term.support, term.profile);
    sub.g -= term.rate *
             dissipator_ptm(term.jump_operator, static_cast<int>(term.support.size())).entries;
  }
  if (estimated.coherent_error) {
    for (const auto& pterm : estimated.coherent_error->terms.terms) {
      std::vector<int> support;
      std::vector<PauliLabel> local;
      for (int q = 0; q < pterm.num_qubits(); ++q)
        if (pterm.labels[static_cast<std::size_t>(q)] != PauliLabel::I) {
          support.push_back(q);
          local.push_back(pterm.labels[static_cast<std::size_t>(q)]);
        }
      if (support.empty()) continue;  // identity term: global phase only
      if (support.size() > 2)
        throw std::invalid_argument("coherent-error term acts on more than 2 qubits");
      const Matrix a = pterm.coefficient * PauliString(local).matrix();
      auto& sub = subsystem_for(support, estimated.coherent_error->profile);
      sub.g -= commutator_ptm(a, static_cast<int>(support.size())).entries;
    }
  }
  return out;
}

// One signed basis-operation coefficient of a decomposition.
struct QuasiDecomposition {
  struct Entry {
    double q = 0.0;          // 1/us
    int id_a = 0;            // Table-I style id of the first factor
    int id_b = -1;           // second factor for 2-qubit supports, -1 otherwise
    std::string name;
    KrausMap kraus;          // local map, support unset
    TransferMatrix ptm;
    bool trace_preserving = false;
  };

  std::vector<int> support;
  TimeProfile profile;       // scales all coefficients by g(t)
  double q0 = 0.0;           // identity coefficient (1/us)
  std::vector<Entry> entries;  // non-identity, nonzero q
  double c1 = 0.0;           // q0 + sum |q_j|
  double gamma = 0.0;        // sum |q_j| = total jump rate
  std::vector<double> s;     // cumulative bins s_j = sum_{i<=j} |q_i| / gamma

  void finalize() {
    c1 = q0;
    gamma = 0.0;
    for (const auto& e : entries) {
      c1 += std::abs(e.q);
      gamma += std::abs(e.q);
    }
    s.clear();
    double acc = 0.0;
    for (const auto& e : entries) {
      acc += std::abs(e.q);
      s.push_back(gamma > 0.0 ? acc / gamma : 0.0);
    }
    if (!s.empty()) s.back() = 1.0;
  }

  // Bin lookup with half-open intervals [s_{j-1}, s_j); u = 1 maps to the
  // last bin.
  std::size_t pick_entry(double u) const {
    for (std::size_t j = 0; j + 1 < s.size(); ++j)
      if (u < s[j]) return j;
    return s.empty() ? 0 : s.size() - 1;
  }

  // Residual of sum_j q_j B_j - (G + q0 I) in max norm.
  double reconstruction_residual(const RealMatrix& g) const {
    RealMatrix acc = q0 * RealMatrix::Identity(g.rows(), g.cols());
    for (const auto& e : entries) acc += e.q * e.ptm.entries;
    return (acc - g).cwiseAbs().maxCoeff();
  }
};

namespace detail {

struct BasisElement {
  int id_a;
  int id_b;  // -1 for single qubit
  std::string name;
  KrausMap kraus;
  TransferMatrix ptm;
  bool trace_preserving;
  bool is_identity;
};

inline std::vector<BasisElement> make_basis(const std::vector<BasisOperation>& single,
                                            int m) {
  std::vector<BasisElement> basis;
  if (m == 1) {
    for (const auto& op : single)
      basis.push_back({op.id, -1, op.name, op.kraus, op.ptm, op.trace_preserving,
                       op.ptm.entries.isIdentity(1e-14)});
  } else if (m == 2) {
    for (const auto& a : single)
      for (const auto& b : single) {
        BasisElement e;
        e.id_a = a.id;
        e.id_b = b.id;
        e.name = a.name + "(x)" + b.name;
        e.kraus.operators = {kron(a.kraus.operators[0], b.kraus.operators[0])};
        TransferMatrix t;
        t.arity = 2;
        t.entries = RealMatrix(kron(Matrix(a.ptm.entries.cast<Complex>()),
                                    Matrix(b.ptm.entries.cast<Complex>()))
                                   .real());
        e.ptm = std::move(t);
        e.trace_preserving = a.trace_preserving && b.trace_preserving;
        e.is_identity = e.ptm.entries.isIdentity(1e-14);
        basis.push_back(std::move(e));
      }
  } else {
    throw std::invalid_argument("decomposition basis supports m <= 2");
  }
  return basis;
}

inline QuasiDecomposition assemble(const RecoveryGenerator::Subsystem& sub,
                                   const std::vector<BasisElement>& basis,
                                   const Eigen::VectorXd& q, double drop_tol) {
  QuasiDecomposition d;
  d.support = sub.support;
  d.profile = sub.profile;
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const double qj = q[static_cast<Eigen::Index>(j)];
    if (basis[j].is_identity) {
      d.q0 += qj;
    } else if (std::abs(qj) > drop_tol) {
      QuasiDecomposition::Entry e;
      e.q = qj;
      e.id_a = basis[j].id_a;
      e.id_b = basis[j].id_b;
      e.name = basis[j].name;
      e.kraus = basis[j].kraus;
      e.ptm = basis[j].ptm;
      e.trace_preserving = basis[j].trace_preserving;
      d.entries.push_back(std::move(e));
    }
  }
  d.finalize();
  return d;
}

}  // namespace detail

// Exact linear solve over the 16 (single-qubit) or 256 (tensor-product)
// Table-I basis PTMs.
inline QuasiDecomposition decompose_minimal(const RecoveryGenerator::Subsystem& sub) {
  const int m = static_cast<int>(sub.support.size());
  const auto basis = detail::make_basis(basis16_table(), m);
  const Eigen::Index dim = pow4(m) * pow4(m);
  RealMatrix mat(dim, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t j = 0; j < basis.size(); ++j)
    mat.col(static_cast<Eigen::Index>(j)) =
        Eigen::Map<const RealVector>(basis[j].ptm.entries.data(), dim);
  const RealVector rhs = Eigen::Map<const RealVector>(sub.g.data(), dim);
  Eigen::FullPivLU<RealMatrix> lu(mat);
  if (!lu.isInvertible())
    throw std::logic_error("basis-operation PTMs are singular (catalog corrupted)");
  const Eigen::VectorXd q = lu.solve(rhs);
  QuasiDecomposition d = detail::assemble(sub, basis, q, 1e-12);
  if (d.reconstruction_residual(sub.g) > 1e-10)
    throw std::logic_error("minimal decomposition failed to reconstruct the generator");
  return d;
}

inline std::vector<QuasiDecomposition> decompose_minimal(const RecoveryGenerator& gen) {
  std::vector<QuasiDecomposition> out;
  out.reserve(gen.subsystems.size());
  for (const auto& sub : gen.subsystems) out.push_back(decompose_minimal(sub));
  return out;
}

// Deterministic over-complete extra basis: rotations exp(-i theta n.sigma/2)
// with theta in {pi/3, 2pi/3} and axes from a Fibonacci sphere.
inline std::vector<BasisOperation> overcomplete_extra_basis(int count = 16) {
  std::vector<BasisOperation> ops;
  const int axes = count / 2;
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  int id = 101;
  for (int i = 0; i < axes; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / axes;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    const Eigen::Vector3d axis(r * std::cos(phi), r * std::sin(phi), z);
    const Matrix ns = axis.x() * pauli_matrix(PauliLabel::X) +
                      axis.y() * pauli_matrix(PauliLabel::Y) +
                      axis.z() * pauli_matrix(PauliLabel::Z);
    for (double theta : {M_PI / 3.0, 2.0 * M_PI / 3.0}) {
      BasisOperation op;
      op.id = id++;
      op.name = "[rot" + std::to_string(op.id) + "]";
      op.kraus.operators = {std::cos(theta / 2) * Matrix::Identity(2, 2) -
                            kI * std::sin(theta / 2) * ns};
      op.ptm = ptm_from_kraus(op.kraus);
      op.trace_preserving = true;
      ops.push_back(std::move(op));
    }
  }
  return ops;
}

// One-norm-minimizing decomposition over Table I plus an optional extra
// basis, via linear programming (split q = q+ - q-, minimize
// q0 + sum_{j>=1} (q_j+ + q_j-)).
inline QuasiDecomposition decompose_lp(const RecoveryGenerator::Subsystem& sub,
                                       const std::vector<BasisOperation>& extra_basis) {
  const int m = static_cast<int>(sub.support.size());
  std::vector<BasisOperation> single = basis16_table();
  single.insert(single.end(), extra_basis.begin(), extra_basis.end());
  const auto basis = detail::make_basis(single, m);
  const Eigen::Index dim = pow4(m) * pow4(m);
  const auto k = static_cast<Eigen::Index>(basis.size());
  RealMatrix a(dim, 2 * k);
  RealVector c(2 * k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const RealVector col =
        Eigen::Map<const RealVector>(basis[static_cast<std::size_t>(j)].ptm.entries.data(), dim);
    a.col(j) = col;
    a.col(k + j) = -col;
    if (basis[static_cast<std::size_t>(j)].is_identity) {
      c[j] = 1.0;       // q0 enters the cost with its sign
      c[k + j] = -1.0;
    } else {
      c[j] = 1.0;
      c[k + j] = 1.0;
    }
  }
  const RealVector rhs = Eigen::Map<const RealVector>(sub.g.data(), dim);
  const SimplexResult res = simplex_solve(a, rhs, c);
  Eigen::VectorXd q(k);
  for (Eigen::Index j = 0; j < k; ++j) q[j] = res.x[j] - res.x[k + j];
  QuasiDecomposition d = detail::assemble(sub, basis, q, 1e-12);
  if (d.reconstruction_residual(sub.g) > 1e-10)
    throw std::logic_error("LP decomposition failed to reconstruct the generator");
  return d;
}

// ---------------------------------------------------------------------------
// Cost accounting
// ---------------------------------------------------------------------------

struct CostReport {
  double c1_total = 0.0;     // sum over subsystems of the base C1 (1/us)
  double c1_integral = 0.0;  // sum_S int_0^T C1^(S)(t) dt
  double overhead_c = 1.0;   // C(T) = exp(c1_integral)
  double overhead_c2 = 1.0;
  double total_noise_strength = 0.0;  // Lambda = N T (sum of per-qubit rates)
  double mean_jumps = 0.0;   // int Gamma_total dt
};

inline double profile_integral(TimeProfile profile, double t_end) {
  return profile.constant() ? t_end : 0.5 * t_end * t_end;
}

inline CostReport cost_overhead(const std::vector<QuasiDecomposition>& decomps,
                                double t_end, int num_qubits,
                                double per_qubit_rate_sum) {
  if (t_end < 0.0) throw std::invalid_argument("negative evolution time");
  CostReport r;
  for (const auto& d : decomps) {
    r.c1_total += d.c1;
    r.c1_integral += d.c1 * profile_integral(d.profile, t_end);
    r.mean_jumps += d.gamma * profile_integral(d.profile, t_end);
  }
  r.overhead_c = std::exp(r.c1_integral);
  r.overhead_c2 = r.overhead_c * r.overhead_c;
  r.total_noise_strength = num_qubits * t_end * per_qubit_rate_sum;
  return r;
}

// ---------------------------------------------------------------------------
// Discrete-gate depolarizing inverse (quasi-probability over {I, X, Y, Z})
// ---------------------------------------------------------------------------

struct DepolarizingInverse {
  double overhead_c = 1.0;  // C_{D^-1}
  double p1 = 1.0;
  double p2 = 0.0;
  TransferMatrix ptm;       // C (p1 I - p2 (X + Y + Z)) as a PTM
};

inline DepolarizingInverse invert_depolarizing(double p) {
  if (p < 0.0 || p >= 1.0) throw std::invalid_argument("depolarizing p must be in [0, 1)");
  DepolarizingInverse inv;
  inv.overhead_c = (p + 2.0) / (2.0 - 2.0 * p);
  inv.p1 = (4.0 - p) / (2.0 * p + 4.0);
  inv.p2 = p / (2.0 * p + 4.0);
  const auto& ops = basis16_table();
  RealMatrix e = inv.p1 * ops[0].ptm.entries;
  for (int j = 1; j <= 3; ++j) e -= inv.p2 * ops[static_cast<std::size_t>(j)].ptm.entries;
  inv.ptm = TransferMatrix{inv.overhead_c * e, 1};
  return inv;
}

inline TransferMatrix depolarizing_ptm(double p) {
  const auto& ops = basis16_table();
  RealMatrix e = (1.0 - 0.75 * p) * ops[0].ptm.entries;
  for (int j = 1; j <= 3; ++j) e += 0.25 * p * ops[static_cast<std::size_t>(j)].ptm.entries;
  return TransferMatrix{e, 1};
}

}  // namespace qemforge
