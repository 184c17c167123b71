#include "wct/synth.hpp"

#include <algorithm>
#include <cmath>

#include "wct/estimate.hpp"
#include "wct/parallel.hpp"
#include "wct/rng.hpp"

namespace wct {

void EnsembleConfig::validate() const {
  if (n_pairs == 0) throw ConfigError("EnsembleConfig: n_pairs must be positive");
  if (support_size < 2)
    throw ConfigError("EnsembleConfig: support_size must be >= 2");
  if (support_size > 10000)
    throw ConfigError("EnsembleConfig: support_size capped at 10^4");
  if (!(gap > 0.0)) throw ConfigError("EnsembleConfig: gap must be positive");
  if (noise < 0.0) throw ConfigError("EnsembleConfig: noise must be >= 0");
  if (k < 0.0) throw ConfigError("EnsembleConfig: k must be >= 0");
}

namespace {

std::vector<double> tilt(const std::vector<double>& p,
                         const std::vector<double>& psi, double lambda) {
  double shift = -std::numeric_limits<double>::infinity();
  for (double v : psi) shift = std::max(shift, lambda * v);
  std::vector<double> out(p.size());
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    out[i] = p[i] * std::exp(lambda * psi[i] - shift);
    total += out[i];
  }
  for (double& x : out) x /= total;
  return out;
}

double mean_of(const std::vector<double>& p, const std::vector<double>& psi) {
  return expectation(p, psi);
}

}  // namespace

SynthPair generate_pair(const EnsembleConfig& config, std::size_t pair_index) {
  config.validate();
  Rng rng(config.seed, pair_index);
  const std::size_t n = config.support_size;

  SynthPair pair;
  pair.psi.values.resize(n);
  for (double& v : pair.psi.values) v = rng.normal();
  std::sort(pair.psi.values.begin(), pair.psi.values.end());
  const auto& psi = pair.psi.values;
  const double range = psi.back() - psi.front();
  if (!(config.gap < range))
    throw ConfigError("generate_pair: gap exceeds the range of psi");

  std::vector<double> base1 = rng.dirichlet(1.0, n);
  std::vector<double> base2 = rng.dirichlet(1.0, n);

  // Minimal symmetric exponential tilt so the ground-truth expectations
  // differ by exactly `gap`.
  auto diff_at = [&](double lambda) {
    return mean_of(tilt(base1, psi, lambda), psi) -
           mean_of(tilt(base2, psi, -lambda), psi);
  };
  double lo = -1.0, hi = 1.0;
  int guard = 0;
  while (diff_at(hi) < config.gap) {
    hi *= 2.0;
    if (++guard > 200) throw ConfigError("generate_pair: gap not attainable");
  }
  guard = 0;
  while (diff_at(lo) > config.gap) {
    lo *= 2.0;
    if (++guard > 200) throw ConfigError("generate_pair: gap not attainable");
  }
  for (int it = 0; it < 500; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double d = diff_at(mid);
    if (std::fabs(d - config.gap) <= 1e-12) {
      lo = hi = mid;
      break;
    }
    if (d < config.gap)
      lo = mid;
    else
      hi = mid;
  }
  const double lambda = 0.5 * (lo + hi);
  pair.p1 = tilt(base1, psi, lambda);
  pair.p2 = tilt(base2, psi, -lambda);

  if (config.noise == 0.0) {
    pair.q1 = pair.p1;
    pair.q2 = pair.p2;
  } else {
    auto perturb = [&](const std::vector<double>& p) {
      const auto w = rng.dirichlet(config.noise, n);
      std::vector<double> q(n);
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        q[i] = p[i] * w[i];
        total += q[i];
      }
      for (double& x : q) x /= total;
      return q;
    };
    pair.q1 = perturb(pair.p1);
    pair.q2 = perturb(pair.p2);
  }
  return pair;
}

DiscreteDistribution index_distribution(const std::vector<double>& probs) {
  std::vector<SupportPoint> support;
  support.reserve(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i)
    support.push_back(SupportPoint{{static_cast<std::int64_t>(i)}});
  return DiscreteDistribution::from_sorted(0, std::move(support),
                                           std::vector<double>(probs));
}

EnsembleResult run_theorem1_experiment(const EnsembleConfig& config,
                                       std::vector<PairOutcome>* outcomes) {
  config.validate();
  std::vector<PairOutcome> results(config.n_pairs);

  parallel_for(config.n_pairs, [&](std::size_t i) {
    const SynthPair pair = generate_pair(config, i);
    const auto& psi = pair.psi;

    const double eq1 = expectation(pair.q1, psi.values);
    const double eq2 = expectation(pair.q2, psi.values);

    const auto d1 = index_distribution(pair.q1);
    const auto d2 = index_distribution(pair.q2);
    const auto wc1 = solve_worst_case(d1, psi, config.k, config.direction);
    const auto wc2 = solve_worst_case(d2, psi, config.k, config.direction);

    PairOutcome& out = results[i];
    // Ground truth has E_p1 > E_p2 by construction.
    out.q_correct = eq1 > eq2;
    out.rho_correct = wc1.value > wc2.value;
    out.var_q =
        0.5 * (variance(pair.q1, psi.values) + variance(pair.q2, psi.values));
    out.var_rho =
        0.5 * (variance(wc1.rho, psi.values) + variance(wc2.rho, psi.values));
  });

  EnsembleResult agg;
  agg.n_pairs = config.n_pairs;
  for (const auto& out : results) {
    agg.p_correct_q += out.q_correct ? 1.0 : 0.0;
    agg.p_correct_rho += out.rho_correct ? 1.0 : 0.0;
    agg.mean_var_q += out.var_q;
    agg.mean_var_rho += out.var_rho;
  }
  const auto n = static_cast<double>(config.n_pairs);
  agg.p_correct_q /= n;
  agg.p_correct_rho /= n;
  agg.mean_var_q /= n;
  agg.mean_var_rho /= n;
  if (outcomes) *outcomes = std::move(results);
  return agg;
}

}  // namespace wct
