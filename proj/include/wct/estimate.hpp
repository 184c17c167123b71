#pragma once
#include <functional>
#include <optional>
#include <span>

#include "wct/core.hpp"

namespace wct {

/// Sequential stopping rule: stop once the relative half-width of the
/// confidence interval drops below rhw_threshold, subject to sample bounds.
struct StoppingRule {
  double confidence = 0.05;  // c; CI level is 1 - c
  double rhw_threshold = 0.01;
  std::size_t min_samples = 100;
  std::size_t max_samples = 1000000;

  void validate() const;
};

using SampleSource = std::function<std::optional<double>()>;

struct WeightedSample {
  double psi;
  double p;
  double q;
};
using WeightedSource = std::function<std::optional<WeightedSample>()>;

/// Inverse standard normal CDF (Acklam's rational approximation).
double normal_quantile(double p);

/// Streaming sample-mean estimate with normal-approximation CI and RHW
/// stopping. Welford accumulation, single pass.
EstimateResult mc_estimate(const SampleSource& next, const StoppingRule& rule);
EstimateResult mc_estimate(std::span<const double> samples,
                           const StoppingRule& rule);

/// Importance-sampling estimate: sample mean of psi * p/q under q-samples.
EstimateResult is_estimate(const WeightedSource& next, const StoppingRule& rule);

/// Exact expectation sum(psi * prob) with compensated accumulation.
double expectation(const DiscreteDistribution& dist, const MetricVector& psi);
double expectation(std::span<const double> probs, std::span<const double> psi);

/// Variance of psi under the given probability vector.
double variance(std::span<const double> probs, std::span<const double> psi);

}  // namespace wct
