#include "wct/estimate.hpp"

#include <cmath>

namespace wct {

void StoppingRule::validate() const {
  if (!(confidence > 0.0 && confidence < 1.0))
    throw ConfigError("StoppingRule: confidence must be in (0, 1)");
  if (!(rhw_threshold > 0.0))
    throw ConfigError("StoppingRule: rhw_threshold must be positive");
  if (min_samples == 0 || min_samples > max_samples)
    throw ConfigError("StoppingRule: need 0 < min_samples <= max_samples");
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw DomainError("normal_quantile: p must be in (0, 1)");
  // Acklam's approximation, |relative error| < 1.15e-9.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    const double u = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
        ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0);
  } else if (p <= 1.0 - plow) {
    const double u = p - 0.5;
    const double r = u * u;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        u /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double u = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
        ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0);
  }
  return x;
}

namespace {

// Welford running mean/variance with RHW stopping.
class StreamingEstimator {
 public:
  explicit StreamingEstimator(const StoppingRule& rule) : rule_(rule) {
    rule.validate();
    z_ = normal_quantile(1.0 - rule.confidence / 2.0);
  }

  void add(double x) {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
  }

  EstimateResult result(bool converged) const {
    EstimateResult r;
    r.mean = mean_;
    r.n_samples = n_;
    r.confidence = rule_.confidence;
    r.half_width = half_width();
    r.rhw_defined = mean_ != 0.0;
    r.rhw = r.rhw_defined ? r.half_width / std::fabs(mean_) : 0.0;
    r.converged = converged;
    return r;
  }

  // Stopping criterion; falls back to the absolute half-width when mean == 0.
  bool criterion_met() const {
    const double hw = half_width();
    if (mean_ == 0.0) return hw <= rule_.rhw_threshold;
    return hw / std::fabs(mean_) <= rule_.rhw_threshold;
  }

  std::size_t n() const { return n_; }

 private:
  double half_width() const {
    if (n_ < 2) return 0.0;
    const double var = m2_ / static_cast<double>(n_ - 1);
    return z_ * std::sqrt(var / static_cast<double>(n_));
  }

  StoppingRule rule_;
  double z_ = 0.0;
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

template <typename Source, typename Extract>
EstimateResult run_stream(const Source& next, const StoppingRule& rule,
                          Extract&& extract) {
  StreamingEstimator est(rule);
  while (est.n() < rule.max_samples) {
    auto sample = next();
    if (!sample) break;
    est.add(extract(*sample));
    if (est.n() >= rule.min_samples && est.criterion_met())
      return est.result(true);
  }
  if (est.n() < rule.min_samples)
    throw InputError("estimate: stream exhausted before min_samples");
  return est.result(est.criterion_met());
}

}  // namespace

EstimateResult mc_estimate(const SampleSource& next, const StoppingRule& rule) {
  return run_stream(next, rule, [](double x) { return x; });
}

EstimateResult mc_estimate(std::span<const double> samples,
                           const StoppingRule& rule) {
  std::size_t i = 0;
  return mc_estimate(
      [&]() -> std::optional<double> {
        if (i >= samples.size()) return std::nullopt;
        return samples[i++];
      },
      rule);
}

EstimateResult is_estimate(const WeightedSource& next,
                           const StoppingRule& rule) {
  return run_stream(next, rule, [](const WeightedSample& s) {
    if (!(s.q > 0.0))
      throw DomainError("is_estimate: sample with zero importance probability");
    return s.psi * (s.p / s.q);
  });
}

double expectation(std::span<const double> probs, std::span<const double> psi) {
  if (probs.size() != psi.size())
    throw DimensionError("expectation: length mismatch");
  // Neumaier compensated summation.
  double sum = 0.0, comp = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double term = probs[i] * psi[i];
    const double t = sum + term;
    if (std::fabs(sum) >= std::fabs(term))
      comp += (sum - t) + term;
    else
      comp += (term - t) + sum;
    sum = t;
  }
  return sum + comp;
}

double expectation(const DiscreteDistribution& dist, const MetricVector& psi) {
  return expectation(dist.probs(), psi.values);
}

double variance(std::span<const double> probs, std::span<const double> psi) {
  const double mean = expectation(probs, psi);
  double var = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double d = psi[i] - mean;
    var += probs[i] * d * d;
  }
  return var;
}

}  // namespace wct
