#pragma once

// Richardson extrapolation over noise-boosted runs, with the amplification
// factor gamma_n and the truncation/shot error budget used to pick the
// hybrid operating point.

#include <cmath>
#include <stdexcept>
#include <vector>

namespace qemforge {

// Lagrange-at-zero weights: beta_j = prod_{l != j} r_l / (r_l - r_j).
inline std::vector<double> richardson_coefficients(const std::vector<double>& nodes) {
  if (nodes.empty() || nodes.size() > 5)
    throw std::invalid_argument("richardson: need 1 to 5 boost nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i] < 1.0) throw std::invalid_argument("richardson: boost factors must be >= 1");
    for (std::size_t j = i + 1; j < nodes.size(); ++j)
      if (nodes[i] == nodes[j]) throw std::invalid_argument("richardson: repeated boost factor");
  }
  std::vector<double> beta(nodes.size());
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    double prod = 1.0;
    for (std::size_t l = 0; l < nodes.size(); ++l)
      if (l != j) prod *= nodes[l] / (nodes[l] - nodes[j]);
    beta[j] = prod;
  }
  return beta;
}

struct ExtrapolationResult {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::vector<double> beta;
  double gamma_amplification = 0.0;  // sum_j |beta_j|
};

inline ExtrapolationResult extrapolate(const std::vector<double>& nodes,
                                       const std::vector<double>& means,
                                       const std::vector<double>& stderrs = {}) {
  if (means.size() != nodes.size())
    throw std::invalid_argument("extrapolate: nodes and means must align");
  if (!stderrs.empty() && stderrs.size() != nodes.size())
    throw std::invalid_argument("extrapolate: stderr list must align with nodes");
  ExtrapolationResult res;
  res.beta = richardson_coefficients(nodes);
  double var = 0.0;
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    res.mean += res.beta[j] * means[j];
    res.gamma_amplification += std::abs(res.beta[j]);
    if (!stderrs.empty()) var += res.beta[j] * res.beta[j] * stderrs[j] * stderrs[j];
  }
  res.stderr_ = std::sqrt(var);
  return res;
}

// One boosted run of the hybrid scheme: rescale the drive to (1/r) H(t/r)
// over duration r * T so the run behaves like the original circuit with the
// residual noise scaled by the boost.
struct BoostedRun {
  double node = 1.0;         // boost factor r
  double rescale = 1.0;      // Hamiltonian rescale parameter
  double duration = 0.0;     // wall-clock evolution time r * T
  double residual_boost = 1.0;  // effective noise multiplier (r, or r^2 for
                                // noise rates growing linearly in t)
};

inline std::vector<BoostedRun> plan_boosted_runs(const std::vector<double>& nodes,
                                                 double t_end,
                                                 bool linear_in_time_noise = false) {
  richardson_coefficients(nodes);  // validates
  std::vector<BoostedRun> runs;
  for (double r : nodes) {
    BoostedRun run;
    run.node = r;
    run.rescale = r;
    run.duration = r * t_end;
    run.residual_boost = linear_in_time_noise ? r * r : r;
    runs.push_back(run);
  }
  return runs;
}

// Upper bound on |extrapolated - ideal|:
//   gamma_n * ( C r_max^{n+1} Delta_max / sqrt(N)
//               + ||O|| (r_max lambda T ||dL||_1)^{n+1} / (n+1)! )
// with n + 1 the number of nodes.
inline double truncation_bound(const std::vector<double>& nodes, double overhead_c,
                               double delta_max, double shots,
                               double observable_norm, double residual_strength) {
  const auto beta = richardson_coefficients(nodes);
  double gamma_n = 0.0, r_max = 0.0;
  for (std::size_t j = 0; j < beta.size(); ++j) {
    gamma_n += std::abs(beta[j]);
    r_max = std::max(r_max, nodes[j]);
  }
  const auto order = nodes.size();  // n + 1
  double factorial = 1.0;
  for (std::size_t k = 2; k <= order; ++k) factorial *= static_cast<double>(k);
  const double shot_term =
      overhead_c * std::pow(r_max, static_cast<double>(order)) * delta_max / std::sqrt(shots);
  const double series_term =
      observable_norm * std::pow(r_max * residual_strength, static_cast<double>(order)) / factorial;
  return gamma_n * (shot_term + series_term);
}

}  // namespace qemforge
