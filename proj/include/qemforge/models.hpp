#pragma once

// Benchmark Hamiltonians (anisotropic Heisenberg, transverse-field Ising,
// J1-J2 with field), noise presets, correlation observables, and the
// cross-resonance random-circuit builder.

#include "qemforge/lindblad.hpp"
#include "qemforge/rng.hpp"
#include "qemforge/stochastic.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace qemforge {

// ---------------------------------------------------------------------------
// Lattices
// ---------------------------------------------------------------------------

struct LatticeSpec {
  int rows = 1;
  int cols = 1;
  std::vector<std::pair<int, int>> nn;   // nearest neighbours, open boundary
  std::vector<std::pair<int, int>> nnn;  // next-nearest neighbours (diagonals
                                         // on grids, (i, i+2) on chains)

  int num_sites() const { return rows * cols; }

  static LatticeSpec grid(int rows, int cols) {
    if (rows < 1 || cols < 1 || rows * cols < 2)
      throw std::invalid_argument("lattice needs at least 2 sites");
    LatticeSpec lat;
    lat.rows = rows;
    lat.cols = cols;
    auto site = [cols](int r, int c) { return r * cols + c; };
    std::set<std::pair<int, int>> nn_set, nnn_set;
    auto ordered = [](int a, int b) { return std::make_pair(std::min(a, b), std::max(a, b)); };
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) {
        if (c + 1 < cols) nn_set.insert(ordered(site(r, c), site(r, c + 1)));
        if (r + 1 < rows) nn_set.insert(ordered(site(r, c), site(r + 1, c)));
        if (r + 1 < rows && c + 1 < cols) nnn_set.insert(ordered(site(r, c), site(r + 1, c + 1)));
        if (r + 1 < rows && c >= 1) nnn_set.insert(ordered(site(r, c), site(r + 1, c - 1)));
      }
    if (rows == 1 || cols == 1) {
      // Chain: next-nearest means distance 2 along the chain.
      nnn_set.clear();
      const int n = rows * cols;
      for (int i = 0; i + 2 < n; ++i) nnn_set.insert({i, i + 2});
    }
    lat.nn.assign(nn_set.begin(), nn_set.end());
    lat.nnn.assign(nnn_set.begin(), nnn_set.end());
    return lat;
  }

  static LatticeSpec chain(int n) { return grid(1, n); }

  void validate() const {
    const int n = num_sites();
    if (n < 2) throw std::invalid_argument("lattice needs at least 2 sites");
    auto check_pairs = [n](const std::vector<std::pair<int, int>>& pairs) {
      std::set<std::pair<int, int>> seen;
      for (auto [a, b] : pairs) {
        if (a < 0 || b < 0 || a >= n || b >= n || a == b)
          throw std::invalid_argument("invalid lattice pair");
        if (!seen.insert({std::min(a, b), std::max(a, b)}).second)
          throw std::invalid_argument("duplicate lattice pair");
      }
    };
    check_pairs(nn);
    check_pairs(nnn);
  }
};

// ---------------------------------------------------------------------------
// Hamiltonians
// ---------------------------------------------------------------------------

// H = J sum_<ij> [(1+g) XX + (1-g) YY + ZZ] - g h sum_i Y_i
inline HamiltonianSpec build_heisenberg2d(double j, double h, double gamma_anis,
                                          const LatticeSpec& lattice) {
  lattice.validate();
  const int n = lattice.num_sites();
  HamiltonianSpec spec;
  for (auto [a, b] : lattice.nn) {
    spec.terms.terms.push_back(
        PauliString::two(n, a, PauliLabel::X, b, PauliLabel::X, j * (1.0 + gamma_anis)));
    spec.terms.terms.push_back(
        PauliString::two(n, a, PauliLabel::Y, b, PauliLabel::Y, j * (1.0 - gamma_anis)));
    spec.terms.terms.push_back(PauliString::two(n, a, PauliLabel::Z, b, PauliLabel::Z, j));
  }
  if (gamma_anis * h != 0.0)
    for (int q = 0; q < n; ++q)
      spec.terms.terms.push_back(PauliString::single(n, q, PauliLabel::Y, -gamma_anis * h));
  return spec;
}

// H = J sum Z_i Z_{i+1} + h sum X_i on an open chain
inline HamiltonianSpec build_tfim(double j, double h, int n) {
  if (n < 2) throw std::invalid_argument("tfim needs n >= 2");
  HamiltonianSpec spec;
  for (int i = 0; i + 1 < n; ++i)
    spec.terms.terms.push_back(PauliString::two(n, i, PauliLabel::Z, i + 1, PauliLabel::Z, j));
  if (h != 0.0)
    for (int q = 0; q < n; ++q)
      spec.terms.terms.push_back(PauliString::single(n, q, PauliLabel::X, h));
  return spec;
}

// H = J1 sum_<ij> ZZ + J2 sum_<<ij>> ZZ - h sum X_i
inline HamiltonianSpec build_j1j2(double j1, double j2, double h,
                                  const LatticeSpec& lattice) {
  lattice.validate();
  if (lattice.nnn.empty()) throw std::invalid_argument("j1j2 lattice has no NNN pairs");
  const int n = lattice.num_sites();
  HamiltonianSpec spec;
  for (auto [a, b] : lattice.nn)
    spec.terms.terms.push_back(PauliString::two(n, a, PauliLabel::Z, b, PauliLabel::Z, j1));
  for (auto [a, b] : lattice.nnn)
    spec.terms.terms.push_back(PauliString::two(n, a, PauliLabel::Z, b, PauliLabel::Z, j2));
  if (h != 0.0)
    for (int q = 0; q < n; ++q)
      spec.terms.terms.push_back(PauliString::single(n, q, PauliLabel::X, -h));
  return spec;
}

// ---------------------------------------------------------------------------
// Observables
// ---------------------------------------------------------------------------

// sum_<ij> X_i X_j / normalization
inline PauliSum observable_nn_correlation(const LatticeSpec& lattice,
                                          double normalization) {
  lattice.validate();
  if (normalization == 0.0) throw std::invalid_argument("zero normalization");
  const int n = lattice.num_sites();
  PauliSum obs;
  for (auto [a, b] : lattice.nn)
    obs.terms.push_back(
        PauliString::two(n, a, PauliLabel::X, b, PauliLabel::X, 1.0 / normalization));
  return obs;
}

// sum_<<ij>> X_i X_j / normalization
inline PauliSum observable_nnn_correlation(const LatticeSpec& lattice,
                                           double normalization) {
  lattice.validate();
  if (normalization == 0.0) throw std::invalid_argument("zero normalization");
  if (lattice.nnn.empty()) throw std::invalid_argument("lattice has no NNN pairs");
  const int n = lattice.num_sites();
  PauliSum obs;
  for (auto [a, b] : lattice.nnn)
    obs.terms.push_back(
        PauliString::two(n, a, PauliLabel::X, b, PauliLabel::X, 1.0 / normalization));
  return obs;
}

// ---------------------------------------------------------------------------
// Noise presets
// ---------------------------------------------------------------------------

// Energy relaxation (sigma-) and dephasing (sigma_z) on every qubit.
inline NoiseModel preset_relax_dephase(double lambda1, double lambda2, int n) {
  if (lambda1 < 0.0 || lambda2 < 0.0) throw std::invalid_argument("negative rate");
  Matrix sminus = Matrix::Zero(2, 2);
  sminus(0, 1) = 1.0;  // |0><1|
  const Matrix sz = pauli_matrix(PauliLabel::Z);
  NoiseModel model;
  for (int q = 0; q < n; ++q) {
    if (lambda1 > 0.0) model.terms.push_back({sminus, {q}, lambda1, TimeProfile::constant_profile()});
    if (lambda2 > 0.0) model.terms.push_back({sz, {q}, lambda2, TimeProfile::constant_profile()});
  }
  return model;
}

// Single-qubit inhomogeneous Pauli channel (1 - sum p) I + px X + py Y + pz Z,
// used as the recovery-operation error, not as a Lindblad term.
inline KrausMap preset_inhomogeneous_pauli(double px, double py, double pz) {
  if (px < 0.0 || py < 0.0 || pz < 0.0 || px + py + pz > 1.0)
    throw std::invalid_argument("invalid Pauli error probabilities");
  KrausMap km;
  km.operators.push_back(std::sqrt(1.0 - px - py - pz) * Matrix::Identity(2, 2));
  if (px > 0.0) km.operators.push_back(std::sqrt(px) * pauli_matrix(PauliLabel::X));
  if (py > 0.0) km.operators.push_back(std::sqrt(py) * pauli_matrix(PauliLabel::Y));
  if (pz > 0.0) km.operators.push_back(std::sqrt(pz) * pauli_matrix(PauliLabel::Z));
  return km;
}

// Low-frequency dephasing: rate profile g(t) = 2 lambda'^2 t, encoded as a
// linear-profile term with base rate 2 lambda'^2.
inline NoiseModel preset_lowfreq(double lambda_prime, int n) {
  if (lambda_prime < 0.0) throw std::invalid_argument("negative rate");
  const Matrix sz = pauli_matrix(PauliLabel::Z);
  NoiseModel model;
  const double base = 2.0 * lambda_prime * lambda_prime;
  for (int q = 0; q < n; ++q)
    if (base > 0.0) model.terms.push_back({sz, {q}, base, TimeProfile::linear_profile()});
  return model;
}

inline NoiseModel noise_presets(const std::string& name, const std::vector<double>& rates,
                                int n) {
  if (name == "relax_dephase") {
    if (rates.size() != 2) throw std::invalid_argument("relax_dephase needs 2 rates");
    return preset_relax_dephase(rates[0], rates[1], n);
  }
  if (name == "lowfreq") {
    if (rates.size() != 1) throw std::invalid_argument("lowfreq needs 1 rate");
    return preset_lowfreq(rates[0], n);
  }
  throw std::invalid_argument("unknown noise preset: " + name);
}

// ---------------------------------------------------------------------------
// Cross-resonance random circuit
// ---------------------------------------------------------------------------

struct CircuitSpec {
  struct Rotation {
    int qubit = 0;
    PauliLabel axis = PauliLabel::X;
    double angle = 0.0;  // radians, [0, 2pi)
  };
  struct Layer {
    std::vector<Rotation> rotations;
    std::vector<std::pair<int, int>> cnots;  // (control, target), disjoint
  };

  int num_qubits = 0;
  int depth = 0;
  double omega = 2.0 * M_PI;   // rad/us
  double gamma = 0.0;          // crosstalk fraction
  double segment_time = 0.0;   // pi / (4 omega), us
  std::uint64_t seed = 0;
  std::vector<Layer> layers;
};

inline Matrix rotation_matrix(PauliLabel axis, double angle) {
  const Matrix sigma = pauli_matrix(axis);
  return std::cos(0.5 * angle) * Matrix::Identity(2, 2) -
         kI * std::sin(0.5 * angle) * sigma;
}

inline Matrix cnot_matrix() {
  Matrix u = Matrix::Zero(4, 4);
  u(0, 0) = u(1, 1) = u(2, 3) = u(3, 2) = 1.0;
  return u;
}

// Alternating brickwork: even layers pair (0,1),(2,3),...; odd layers
// (1,2),(3,4),.... Controls are the even slot of each pair.
inline CircuitSpec build_cr_circuit(int depth, std::uint64_t seed, int num_qubits,
                                    double omega, double gamma) {
  if (depth < 1) throw std::invalid_argument("circuit depth must be >= 1");
  if (num_qubits < 2) throw std::invalid_argument("circuit needs >= 2 qubits");
  if (omega <= 0.0) throw std::invalid_argument("omega must be positive");
  CircuitSpec spec;
  spec.num_qubits = num_qubits;
  spec.depth = depth;
  spec.omega = omega;
  spec.gamma = gamma;
  spec.segment_time = M_PI / (4.0 * omega);
  spec.seed = seed;
  PhiloxRng rng(seed, 0);
  for (int layer = 0; layer < depth; ++layer) {
    CircuitSpec::Layer l;
    for (int q = 0; q < num_qubits; ++q) {
      CircuitSpec::Rotation rot;
      rot.qubit = q;
      const double u = rng.uniform();
      rot.axis = u < 1.0 / 3 ? PauliLabel::X : (u < 2.0 / 3 ? PauliLabel::Y : PauliLabel::Z);
      rot.angle = rng.uniform() * 2.0 * M_PI;
      l.rotations.push_back(rot);
    }
    const int first = layer % 2 == 0 ? 0 : 1;
    for (int c = first; c + 1 < num_qubits; c += 2) l.cnots.emplace_back(c, c + 1);
    if (l.cnots.empty()) l.cnots.emplace_back(0, 1);  // 2-qubit odd layers
    spec.layers.push_back(std::move(l));
  }
  return spec;
}

// Full-register unitary of a local gate.
inline Matrix embed_unitary(const Matrix& local, const std::vector<int>& support, int n) {
  return EmbeddedOp(local, support, n).left(Matrix::Identity(pow2(n), pow2(n)));
}

// Ideal circuit output |psi> = U_d ... U_1 |0...0> with exact CNOTs.
inline Vector ideal_circuit_state(const CircuitSpec& spec) {
  Vector psi = Vector::Zero(pow2(spec.num_qubits));
  psi[0] = 1.0;
  for (const auto& layer : spec.layers) {
    for (const auto& rot : layer.rotations)
      psi = embed_unitary(rotation_matrix(rot.axis, rot.angle), {rot.qubit},
                          spec.num_qubits) * psi;
    for (auto [c, t] : layer.cnots)
      psi = embed_unitary(cnot_matrix(), {c, t}, spec.num_qubits) * psi;
  }
  return psi;
}

// CR drive Hamiltonian for one layer's simultaneous gates:
// H = sum_pairs Omega (-sigma_z (x) sigma_x); the crosstalk term
// gamma Omega I (x) sigma_x goes into the noise model as a coherent error.
inline HamiltonianSpec cr_layer_drive(const CircuitSpec& spec,
                                      const CircuitSpec::Layer& layer) {
  HamiltonianSpec h;
  for (auto [c, t] : layer.cnots)
    h.terms.terms.push_back(PauliString::two(spec.num_qubits, c, PauliLabel::Z, t,
                                             PauliLabel::X, -spec.omega));
  return h;
}

inline HamiltonianSpec cr_layer_crosstalk(const CircuitSpec& spec,
                                          const CircuitSpec::Layer& layer) {
  HamiltonianSpec dh;
  for (auto [c, t] : layer.cnots)
    dh.terms.terms.push_back(PauliString::single(spec.num_qubits, t, PauliLabel::X,
                                                 spec.gamma * spec.omega));
  return dh;
}

}  // namespace qemforge
