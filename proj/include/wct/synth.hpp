#pragma once
#include <cstdint>
#include <vector>

#include "wct/core.hpp"
#include "wct/wcopt.hpp"

namespace wct {

/// Configuration of the synthetic ranking-robustness experiment: pairs of
/// ground-truth distributions (p1 better than p2 by exactly `gap`), noisy
/// simulator approximations q, and a divergence budget for the worst-case
/// indicator.
struct EnsembleConfig {
  std::size_t n_pairs = 1000;
  std::size_t support_size = 50;
  double gap = 0.1;     // enforced E_p1[psi] - E_p2[psi]
  double noise = 1.0;   // Dirichlet concentration of the p -> q perturbation;
                        // 0 disables the perturbation (q = p)
  double k = 1.0;
  std::uint64_t seed = 0;
  Direction direction = Direction::minimize;

  void validate() const;
};

struct SynthPair {
  MetricVector psi;
  std::vector<double> p1, p2;  // ground truth, E_p1 - E_p2 == gap
  std::vector<double> q1, q2;  // perturbed approximations
};

struct PairOutcome {
  bool q_correct = false;
  bool rho_correct = false;
  double var_q = 0.0;
  double var_rho = 0.0;
};

struct EnsembleResult {
  double p_correct_q = 0.0;    // fraction ranked correctly by E_q
  double p_correct_rho = 0.0;  // fraction ranked correctly by the worst case
  std::size_t n_pairs = 0;
  double mean_var_q = 0.0;
  double mean_var_rho = 0.0;
};

/// One synthetic pair, reproducible from (config.seed, pair_index).
SynthPair generate_pair(const EnsembleConfig& config, std::size_t pair_index);

/// Index-grid distribution over {0, .., n-1} for solver input.
DiscreteDistribution index_distribution(const std::vector<double>& probs);

EnsembleResult run_theorem1_experiment(const EnsembleConfig& config,
                                       std::vector<PairOutcome>* outcomes = nullptr);

}  // namespace wct
