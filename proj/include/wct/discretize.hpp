#pragma once
#include <cstdint>
#include <map>
#include <utility>

#include "wct/core.hpp"

namespace wct {

enum class StateSpace { reward_scalar, reward_terms };

struct DiscretizeConfig {
  int decimals = 2;
  StateSpace space = StateSpace::reward_scalar;
  std::size_t burn_in = 0;  // steps skipped at the start of each episode

  void validate() const;
};

/// Raw histogram counts before normalization; shards with equal decimals
/// can be merged with mix_counts.
struct CountMap {
  int decimals = 0;
  std::map<SupportPoint, std::uint64_t> counts;
};

CountMap count_steps(const EvalLog& log, const RewardConfig& reward,
                     const DiscretizeConfig& disc);

/// Pointwise sum of two count maps over the same discretization.
CountMap mix_counts(const CountMap& a, const CountMap& b);

std::pair<DiscreteDistribution, MetricVector> distribution_from_counts(
    const CountMap& counts, const RewardConfig& reward,
    const DiscretizeConfig& disc);

/// Empirical stationary distribution of the discretized reward state, pooled
/// over all episodes, plus psi evaluated at each support point.
std::pair<DiscreteDistribution, MetricVector> empirical_distribution(
    const EvalLog& log, const RewardConfig& reward,
    const DiscretizeConfig& disc);

}  // namespace wct
