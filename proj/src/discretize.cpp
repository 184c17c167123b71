#include "wct/discretize.hpp"

namespace wct {

void DiscretizeConfig::validate() const {
  if (decimals < 0 || decimals > 12)
    throw ConfigError("DiscretizeConfig: decimals must be in [0, 12]");
}

CountMap count_steps(const EvalLog& log, const RewardConfig& reward,
                     const DiscretizeConfig& disc) {
  disc.validate();
  reward.validate();
  log.validate(reward.n_terms());

  CountMap out;
  out.decimals = disc.decimals;
  for (const auto& episode : log.episodes) {
    for (std::size_t t = disc.burn_in; t < episode.size(); ++t) {
      const auto& features = episode[t];
      SupportPoint point;
      if (disc.space == StateSpace::reward_scalar) {
        point.coords.push_back(quantize(reward_of_step(features, reward),
                                        disc.decimals));
      } else {
        for (std::size_t i = 0; i < features.size(); ++i) {
          if (reward.mask[i])
            point.coords.push_back(quantize(features[i], disc.decimals));
        }
      }
      ++out.counts[std::move(point)];
    }
  }
  if (out.counts.empty())
    throw InputError("count_steps: no steps remain after burn-in");
  return out;
}

CountMap mix_counts(const CountMap& a, const CountMap& b) {
  if (a.decimals != b.decimals)
    throw ConfigError("mix_counts: decimals mismatch");
  CountMap out = a;
  for (const auto& [point, c] : b.counts) out.counts[point] += c;
  return out;
}

std::pair<DiscreteDistribution, MetricVector> distribution_from_counts(
    const CountMap& counts, const RewardConfig& reward,
    const DiscretizeConfig& disc) {
  auto dist = DiscreteDistribution::from_counts(counts.decimals, counts.counts);
  MetricVector psi;
  psi.values.reserve(dist.size());
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const auto values = dist.point_values(i);
    if (disc.space == StateSpace::reward_scalar) {
      psi.values.push_back(values[0]);
    } else {
      double r = 0.0;
      std::size_t pos = 0;
      for (std::size_t j = 0; j < reward.n_terms(); ++j) {
        if (reward.mask[j]) r += reward.weights[j] * values[pos++];
      }
      psi.values.push_back(r);
    }
  }
  return {std::move(dist), std::move(psi)};
}

std::pair<DiscreteDistribution, MetricVector> empirical_distribution(
    const EvalLog& log, const RewardConfig& reward,
    const DiscretizeConfig& disc) {
  return distribution_from_counts(count_steps(log, reward, disc), reward, disc);
}

}  // namespace wct
