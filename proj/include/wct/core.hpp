#pragma once
#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wct/errors.hpp"

namespace wct {

/// 10^d as an exact 64-bit integer, d in [0, 18].
std::int64_t pow10_i64(int d);

/// Quantize x to d decimal places, rounding half away from zero.
/// Returns the scaled-integer representation x * 10^d.
std::int64_t quantize(double x, int decimals);

/// Inverse of quantize: scaled integer back to a double value.
double dequantize(std::int64_t scaled, int decimals);

/// A discretized point of the reward state space. Coordinates are stored as
/// scaled integers (value * 10^d) so equality and ordering are exact.
struct SupportPoint {
  std::vector<std::int64_t> coords;

  auto operator<=>(const SupportPoint&) const = default;
};

/// Metric values psi(s), aligned index-for-index with a distribution support.
struct MetricVector {
  std::vector<double> values;
};

/// Probability vector over a finite, canonically sorted support.
/// Immutable after construction; probabilities are normalized exactly once.
class DiscreteDistribution {
 public:
  /// Build from (point -> nonnegative mass); mass is normalized to sum 1.
  DiscreteDistribution(int decimals, const std::map<SupportPoint, double>& mass);

  static DiscreteDistribution from_counts(
      int decimals, const std::map<SupportPoint, std::uint64_t>& counts);

  /// Build from an already sorted, unique support. Probs are normalized.
  static DiscreteDistribution from_sorted(int decimals,
                                          std::vector<SupportPoint> support,
                                          std::vector<double> probs);

  int decimals() const { return decimals_; }
  std::size_t size() const { return support_.size(); }
  const std::vector<SupportPoint>& support() const { return support_; }
  const std::vector<double>& probs() const { return probs_; }

  /// Dequantized coordinates of support point i.
  std::vector<double> point_values(std::size_t i) const;

  bool same_support(const DiscreteDistribution& other) const;

 private:
  DiscreteDistribution() = default;
  void validate_and_normalize();

  int decimals_ = 0;
  std::vector<SupportPoint> support_;
  std::vector<double> probs_;
};

/// Weights omega and term mask defining the scalar reward psi = omega^T r.
struct RewardConfig {
  std::vector<std::string> term_names;
  std::vector<double> weights;
  std::vector<bool> mask;

  void validate() const;
  std::size_t n_terms() const { return term_names.size(); }
};

/// omega^T r over the masked terms. Masked-out terms contribute zero.
double reward_of_step(const std::vector<double>& features,
                      const RewardConfig& config);

/// Per-policy stream of per-step reward-feature vectors.
struct EvalLog {
  std::string policy_id;
  // episodes[e][t] is the feature vector of step t in episode e.
  std::vector<std::vector<std::vector<double>>> episodes;

  void validate(std::size_t n_terms) const;
  std::size_t n_steps() const;
};

/// Outcome of a Monte-Carlo / importance-sampling estimation run.
struct EstimateResult {
  double mean = 0.0;
  double half_width = 0.0;
  double rhw = 0.0;        // half_width / |mean|; meaningless if !rhw_defined
  bool rhw_defined = true;  // false when mean == 0 (absolute fallback used)
  std::size_t n_samples = 0;
  double confidence = 0.0;  // the c in the 1-c confidence level
  bool converged = false;
};

}  // namespace wct
