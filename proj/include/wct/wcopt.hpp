#pragma once
#include <span>
#include <utility>
#include <vector>

#include "wct/core.hpp"

namespace wct {

enum class Direction { maximize, minimize };

struct WorstCaseProblem {
  DiscreteDistribution q;
  MetricVector psi;
  double k = 0.0;
  Direction direction = Direction::maximize;
};

struct WorstCaseSolution {
  std::vector<double> rho;  // same support order as q
  double value = 0.0;
  bool active = false;  // divergence constraint tight at the optimum
  double kkt_residual = 0.0;
};

/// Quadratic KL upper bound sum(rho^2/q - rho) over states with q > 0.
/// Returns +infinity if rho puts mass where q has none.
double chi_square_divergence(std::span<const double> rho,
                             std::span<const double> q);
double chi_square_divergence(const DiscreteDistribution& rho,
                             const DiscreteDistribution& q);

/// Globally optimal solution of the divergence-constrained linear program:
/// extremize sum(psi * rho) over the simplex with sum(rho^2/q - rho) <= k.
/// Saturation (point mass on the extremal psi states) is detected first;
/// otherwise the clipped-tilt KKT form is resolved by nested bisection on
/// the two multipliers.
WorstCaseSolution solve_worst_case(const DiscreteDistribution& q,
                                   const MetricVector& psi, double k,
                                   Direction direction);
WorstCaseSolution solve_worst_case(const WorstCaseProblem& problem);

/// Independent verification oracle: exhaustive search over the simplex grid
/// with the given step (branch-and-bound pruned, exact over the grid).
/// Support size must be <= 6.
double oracle_worst_case(const DiscreteDistribution& q, const MetricVector& psi,
                         double k, Direction direction, double resolution);

/// Pointwise solve per divergence budget; monotone in k.
std::vector<std::pair<double, double>> worst_case_curve(
    const DiscreteDistribution& q, const MetricVector& psi,
    const std::vector<double>& ks, Direction direction);

}  // namespace wct
