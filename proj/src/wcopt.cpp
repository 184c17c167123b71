#include "wct/wcopt.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "wct/estimate.hpp"

namespace wct {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxSupport = 10000000;  // solver capacity guard
}  // namespace

double chi_square_divergence(std::span<const double> rho,
                             std::span<const double> q) {
  if (rho.size() != q.size())
    throw DimensionError("chi_square_divergence: length mismatch");
  double div = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] > 0.0) {
      div += rho[i] * rho[i] / q[i] - rho[i];
    } else if (rho[i] != 0.0) {
      return kInf;
    }
  }
  return div;
}

double chi_square_divergence(const DiscreteDistribution& rho,
                             const DiscreteDistribution& q) {
  if (!rho.same_support(q))
    throw DimensionError("chi_square_divergence: support mismatch");
  return chi_square_divergence(rho.probs(), q.probs());
}

namespace {

// Maximize sum(psi * rho) over the positive-q states. q must be normalized.
// Returns rho over the full index range (zero where q is zero).
WorstCaseSolution solve_max(std::span<const double> q,
                            std::span<const double> psi, double k) {
  const std::size_t n = q.size();
  WorstCaseSolution sol;
  sol.rho.assign(n, 0.0);

  // Compact to positive-q states.
  std::vector<std::size_t> idx;
  idx.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (q[i] > 0.0) idx.push_back(i);
  }
  const std::size_t m = idx.size();
  if (m == 0) throw DomainError("solve_worst_case: q has no positive mass");

  if (k == 0.0 || m == 1) {
    for (std::size_t i : idx) sol.rho[i] = q[i];
    sol.value = expectation(q, psi);
    sol.active = (k == 0.0);
    sol.kkt_residual = 0.0;
    return sol;
  }

  // Saturation: mass on the argmax set, proportional to q (minimum-divergence
  // optimal solution under ties).
  double psi_max = -kInf;
  for (std::size_t i : idx) psi_max = std::max(psi_max, psi[i]);
  double q_top = 0.0;
  for (std::size_t i : idx) {
    if (psi[i] == psi_max) q_top += q[i];
  }
  const double sat_div = 1.0 / q_top - 1.0;
  if (sat_div <= k + 1e-10) {
    for (std::size_t i : idx) {
      if (psi[i] == psi_max) sol.rho[i] = q[i] / q_top;
    }
    sol.value = psi_max;
    sol.active = std::fabs(sat_div - k) <= 1e-9;
    sol.kkt_residual = 0.0;
    return sol;
  }

  // Active-constraint branch. KKT form: rho = q * max(0, psi - alpha)/(2 beta)
  // with alpha fixed by sum(rho) = 1 and beta by divergence = k.
  std::vector<std::size_t> ord(idx);
  std::sort(ord.begin(), ord.end(),
            [&](std::size_t a, std::size_t b) { return psi[a] > psi[b]; });
  std::vector<double> sq(m + 1, 0.0), sqp(m + 1, 0.0), sqp2(m + 1, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    const double qi = q[ord[j]];
    const double pi = psi[ord[j]];
    sq[j + 1] = sq[j] + qi;
    sqp[j + 1] = sqp[j] + qi * pi;
    sqp2[j + 1] = sqp2[j] + qi * pi * pi;
  }

  // For a given beta, the active set is a prefix of the sorted order; the
  // simplex multiplier alpha follows in closed form.
  auto resolve_alpha = [&](double beta, std::size_t& j_out) -> double {
    std::size_t j_best = 1;
    double alpha_best = (sqp[1] - 2.0 * beta) / sq[1];
    for (std::size_t j = 2; j <= m; ++j) {
      const double alpha_j = (sqp[j] - 2.0 * beta) / sq[j];
      if (psi[ord[j - 1]] > alpha_j) {
        j_best = j;
        alpha_best = alpha_j;
      } else {
        break;
      }
    }
    j_out = j_best;
    return alpha_best;
  };

  auto divergence_at = [&](double beta) -> double {
    std::size_t j;
    const double alpha = resolve_alpha(beta, j);
    const double num = sqp2[j] - 2.0 * alpha * sqp[j] + alpha * alpha * sq[j];
    return num / (4.0 * beta * beta) - 1.0;
  };

  // Divergence decreases monotonically in beta: bracket then bisect.
  double beta_hi = 1.0;
  int guard = 0;
  while (divergence_at(beta_hi) > k) {
    beta_hi *= 2.0;
    if (++guard > 2000)
      throw NumericalError("solve_worst_case: multiplier bracket failed");
  }
  double beta_lo = beta_hi;
  guard = 0;
  while (divergence_at(beta_lo) <= k) {
    beta_lo *= 0.5;
    if (++guard > 2000)
      throw NumericalError("solve_worst_case: multiplier bracket failed");
  }
  for (int it = 0; it < 200 && (beta_hi - beta_lo) > 1e-15 * beta_hi; ++it) {
    const double mid = 0.5 * (beta_lo + beta_hi);
    if (divergence_at(mid) <= k)
      beta_hi = mid;
    else
      beta_lo = mid;
  }
  const double beta = beta_hi;  // feasible side of the bracket
  std::size_t j_active;
  const double alpha = resolve_alpha(beta, j_active);

  double total = 0.0;
  for (std::size_t t = 0; t < j_active; ++t) {
    const std::size_t i = ord[t];
    const double r = q[i] * std::max(0.0, psi[i] - alpha) / (2.0 * beta);
    sol.rho[i] = r;
    total += r;
  }
  for (double& r : sol.rho) r /= total;

  sol.value = expectation(sol.rho, psi);
  sol.active = true;
  const double achieved = chi_square_divergence(sol.rho, q);
  sol.kkt_residual =
      std::max(std::fabs(total - 1.0), std::fabs(achieved - k));
  return sol;
}

}  // namespace

WorstCaseSolution solve_worst_case(const DiscreteDistribution& q,
                                   const MetricVector& psi, double k,
                                   Direction direction) {
  const std::size_t n = q.size();
  if (psi.values.size() != n)
    throw DimensionError("solve_worst_case: psi/support length mismatch");
  if (k < 0.0) throw DomainError("solve_worst_case: k must be non-negative");
  if (n > kMaxSupport)
    throw CapacityError("solve_worst_case: support exceeds 10^7 states");
  for (double v : psi.values) {
    if (!std::isfinite(v))
      throw DomainError("solve_worst_case: psi must be finite");
  }

  if (direction == Direction::maximize)
    return solve_max(q.probs(), psi.values, k);

  std::vector<double> neg(psi.values);
  for (double& v : neg) v = -v;
  WorstCaseSolution sol = solve_max(q.probs(), neg, k);
  sol.value = -sol.value;
  return sol;
}

WorstCaseSolution solve_worst_case(const WorstCaseProblem& problem) {
  return solve_worst_case(problem.q, problem.psi, problem.k, problem.direction);
}

namespace {

// Exhaustive grid search state; mass units throughout (objective and masses
// scaled by m so the grid is integral).
struct GridSearch {
  std::vector<double> psis;   // sorted descending
  std::vector<double> qs;     // matching order
  std::vector<double> q_rem;  // suffix sums of qs
  std::int64_t m = 0;
  double limit = 0.0;  // feasibility: sum(x^2/q) <= limit
  double best = -kInf;

  void final_two(std::size_t i, std::int64_t rest, double obj, double cost) {
    const double qa = qs[i], qb = qs[i + 1];
    const double a = 1.0 / qa + 1.0 / qb;
    const double b = -2.0 * static_cast<double>(rest) / qb;
    const double c =
        static_cast<double>(rest) * static_cast<double>(rest) / qb + cost -
        limit;
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return;
    const double s = std::sqrt(disc);
    const auto lo = std::max<std::int64_t>(
        0, static_cast<std::int64_t>(std::ceil((-b - s) / (2.0 * a) - 1e-9)));
    auto t = std::min<std::int64_t>(
        rest, static_cast<std::int64_t>(std::floor((-b + s) / (2.0 * a) + 1e-9)));
    // psis sorted descending, so the largest feasible t is optimal here.
    while (t >= lo) {
      const double tt = static_cast<double>(t);
      const double rr = static_cast<double>(rest - t);
      if (cost + tt * tt / qa + rr * rr / qb <= limit) break;
      --t;
    }
    if (t < lo) return;
    best = std::max(best, obj + psis[i] * static_cast<double>(t) +
                              psis[i + 1] * static_cast<double>(rest - t));
  }

  void recurse(std::size_t i, std::int64_t rest, double obj, double cost) {
    const std::size_t n = psis.size();
    if (i == n - 1) {
      const double x = static_cast<double>(rest);
      if (cost + x * x / qs[i] <= limit)
        best = std::max(best, obj + psis[i] * x);
      return;
    }
    if (i == n - 2) {
      final_two(i, rest, obj, cost);
      return;
    }
    for (std::int64_t x = rest; x >= 0; --x) {
      const double xd = static_cast<double>(x);
      const double rd = static_cast<double>(rest - x);
      const double ub = obj + psis[i] * xd + psis[i + 1] * rd;
      if (ub <= best) break;  // ub shrinks as x decreases
      const double cost_x = cost + xd * xd / qs[i];
      if (cost_x + rd * rd / q_rem[i + 1] > limit) continue;
      recurse(i + 1, rest - x, obj + psis[i] * xd, cost_x);
    }
  }
};

double oracle_max(std::span<const double> q, std::span<const double> psi,
                  double k, std::int64_t m) {
  GridSearch gs;
  gs.m = m;
  const double md = static_cast<double>(m);
  gs.limit = (k + 1.0) * md * md * (1.0 + 1e-12) + 1e-7;

  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] > 0.0) idx.push_back(i);
  }
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return psi[a] > psi[b]; });
  for (std::size_t i : idx) {
    gs.psis.push_back(psi[i]);
    gs.qs.push_back(q[i]);
  }
  const std::size_t n = gs.qs.size();
  if (n == 1) return gs.psis[0];
  gs.q_rem.assign(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) gs.q_rem[i] = gs.q_rem[i + 1] + gs.qs[i];

  // Seed with simple feasible grid points: q rounded by largest remainder,
  // and the extremal point mass if it fits the budget.
  std::vector<std::int64_t> rounded(n);
  std::vector<std::pair<double, std::size_t>> fracs(n);
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double target = gs.qs[i] * md;
    rounded[i] = static_cast<std::int64_t>(std::floor(target));
    assigned += rounded[i];
    fracs[i] = {target - std::floor(target), i};
  }
  std::sort(fracs.rbegin(), fracs.rend());
  for (std::int64_t r = m - assigned; r > 0; --r)
    ++rounded[fracs[static_cast<std::size_t>(r - 1)].second];
  double seed_obj = 0.0, seed_cost = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(rounded[i]);
    seed_obj += gs.psis[i] * x;
    seed_cost += x * x / gs.qs[i];
  }
  double fallback = seed_obj;
  if (seed_cost <= gs.limit) gs.best = seed_obj;
  if (md * md / gs.qs[0] <= gs.limit)
    gs.best = std::max(gs.best, gs.psis[0] * md);

  gs.recurse(0, m, 0.0, 0.0);
  if (!std::isfinite(gs.best)) return fallback / md;  // nothing on-grid fits
  return gs.best / md;
}

}  // namespace

double oracle_worst_case(const DiscreteDistribution& q, const MetricVector& psi,
                         double k, Direction direction, double resolution) {
  if (q.size() > 6)
    throw CapacityError("oracle_worst_case: support must be <= 6");
  if (psi.values.size() != q.size())
    throw DimensionError("oracle_worst_case: psi/support length mismatch");
  if (k < 0.0) throw DomainError("oracle_worst_case: k must be non-negative");
  if (!(resolution > 0.0 && resolution <= 0.5))
    throw ConfigError("oracle_worst_case: resolution must be in (0, 0.5]");
  const auto m = static_cast<std::int64_t>(std::llround(1.0 / resolution));

  if (direction == Direction::maximize)
    return oracle_max(q.probs(), psi.values, k, m);
  std::vector<double> neg(psi.values);
  for (double& v : neg) v = -v;
  return -oracle_max(q.probs(), neg, k, m);
}

std::vector<std::pair<double, double>> worst_case_curve(
    const DiscreteDistribution& q, const MetricVector& psi,
    const std::vector<double>& ks, Direction direction) {
  if (ks.empty()) throw InputError("worst_case_curve: empty k grid");
  std::vector<std::pair<double, double>> curve;
  curve.reserve(ks.size());
  for (double k : ks)
    curve.emplace_back(k, solve_worst_case(q, psi, k, direction).value);
  return curve;
}

}  // namespace wct
