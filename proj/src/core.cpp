#include "wct/core.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>

namespace wct {

std::int64_t pow10_i64(int d) {
  if (d < 0 || d > 18) throw ConfigError("pow10_i64: exponent out of range");
  std::int64_t v = 1;
  for (int i = 0; i < d; ++i) v *= 10;
  return v;
}

std::int64_t quantize(double x, int decimals) {
  if (decimals < 0 || decimals > 12)
    throw ConfigError("quantize: decimals must be in [0, 12]");
  if (!std::isfinite(x)) throw DomainError("quantize: non-finite value");
  const double scaled = x * static_cast<double>(pow10_i64(decimals));
  if (std::fabs(scaled) >= 9.2e18)
    throw DomainError("quantize: scaled value overflows 64-bit range");
  return std::llround(scaled);  // llround rounds half away from zero
}

double dequantize(std::int64_t scaled, int decimals) {
  return static_cast<double>(scaled) / static_cast<double>(pow10_i64(decimals));
}

DiscreteDistribution::DiscreteDistribution(
    int decimals, const std::map<SupportPoint, double>& mass) {
  decimals_ = decimals;
  support_.reserve(mass.size());
  probs_.reserve(mass.size());
  for (const auto& [point, m] : mass) {
    support_.push_back(point);
    probs_.push_back(m);
  }
  validate_and_normalize();
}

DiscreteDistribution DiscreteDistribution::from_counts(
    int decimals, const std::map<SupportPoint, std::uint64_t>& counts) {
  DiscreteDistribution d;
  d.decimals_ = decimals;
  d.support_.reserve(counts.size());
  d.probs_.reserve(counts.size());
  for (const auto& [point, c] : counts) {
    d.support_.push_back(point);
    d.probs_.push_back(static_cast<double>(c));
  }
  d.validate_and_normalize();
  return d;
}

DiscreteDistribution DiscreteDistribution::from_sorted(
    int decimals, std::vector<SupportPoint> support, std::vector<double> probs) {
  DiscreteDistribution d;
  d.decimals_ = decimals;
  d.support_ = std::move(support);
  d.probs_ = std::move(probs);
  for (std::size_t i = 1; i < d.support_.size(); ++i) {
    if (!(d.support_[i - 1] < d.support_[i]))
      throw InputError("from_sorted: support not sorted/unique");
  }
  d.validate_and_normalize();
  return d;
}

void DiscreteDistribution::validate_and_normalize() {
  if (support_.empty())
    throw InputError("DiscreteDistribution: support must be non-empty");
  if (support_.size() != probs_.size())
    throw DimensionError("DiscreteDistribution: support/probs length mismatch");
  const std::size_t dim = support_.front().coords.size();
  double total = 0.0;
  for (std::size_t i = 0; i < support_.size(); ++i) {
    if (support_[i].coords.size() != dim)
      throw DimensionError("DiscreteDistribution: inconsistent point dimension");
    const double p = probs_[i];
    if (!std::isfinite(p) || p < 0.0)
      throw DomainError("DiscreteDistribution: negative or non-finite mass");
    total += p;
  }
  if (total <= 0.0)
    throw DomainError("DiscreteDistribution: total mass must be positive");
  for (double& p : probs_) p /= total;
}

std::vector<double> DiscreteDistribution::point_values(std::size_t i) const {
  std::vector<double> out;
  out.reserve(support_[i].coords.size());
  for (std::int64_t c : support_[i].coords) out.push_back(dequantize(c, decimals_));
  return out;
}

bool DiscreteDistribution::same_support(const DiscreteDistribution& other) const {
  return decimals_ == other.decimals_ && support_ == other.support_;
}

void RewardConfig::validate() const {
  if (weights.size() != term_names.size() || mask.size() != term_names.size())
    throw DimensionError("RewardConfig: weights/mask must match term_names");
  bool any = false;
  for (bool m : mask) any = any || m;
  if (!any) throw ConfigError("RewardConfig: at least one term must be active");
}

double reward_of_step(const std::vector<double>& features,
                      const RewardConfig& config) {
  if (features.size() != config.term_names.size())
    throw DimensionError("reward_of_step: feature length mismatch");
  double r = 0.0;
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (config.mask[i]) r += config.weights[i] * features[i];
  }
  return r;
}

void EvalLog::validate(std::size_t n_terms) const {
  bool any_step = false;
  for (const auto& ep : episodes) {
    for (const auto& step : ep) {
      any_step = true;
      if (step.size() != n_terms)
        throw DimensionError("EvalLog: step feature length mismatch");
    }
  }
  if (!any_step) throw InputError("EvalLog: no steps");
}

std::size_t EvalLog::n_steps() const {
  std::size_t n = 0;
  for (const auto& ep : episodes) n += ep.size();
  return n;
}

}  // namespace wct
