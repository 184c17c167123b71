#include <doctest.h>

#include <cmath>

#include "wct/estimate.hpp"
#include "wct/rng.hpp"
#include "wct/synth.hpp"
#include "wct/wcopt.hpp"

using namespace wct;

namespace {

DiscreteDistribution dist_of(const std::vector<double>& probs) {
  return index_distribution(probs);
}

void check_feasible(const WorstCaseSolution& sol,
                    const DiscreteDistribution& q, double k) {
  double total = 0.0;
  for (double r : sol.rho) {
    total += r;
    CHECK(r >= -1e-12);
  }
  CHECK(std::fabs(total - 1.0) <= 1e-9);
  CHECK(chi_square_divergence(sol.rho, q.probs()) <= k + 1e-9);
}

std::vector<double> random_simplex(Rng& rng, std::size_t n, double floor) {
  auto p = rng.dirichlet(1.0, n);
  double total = 0.0;
  for (double& x : p) {
    x += floor;
    total += x;
  }
  for (double& x : p) x /= total;
  return p;
}

}  // namespace

TEST_CASE("chi-square divergence identities") {
  const auto q = dist_of({0.5, 0.5});
  CHECK(chi_square_divergence(q, q) == doctest::Approx(0.0));

  const auto rho = dist_of({0.6, 0.4});
  CHECK(chi_square_divergence(rho, q) == doctest::Approx(0.04).epsilon(1e-12));

  const auto uniform5 = dist_of({0.2, 0.2, 0.2, 0.2, 0.2});
  const auto point = dist_of({0.0, 0.0, 1.0, 0.0, 0.0});
  CHECK(chi_square_divergence(point, uniform5) ==
        doctest::Approx(4.0).epsilon(1e-12));

  CHECK(std::isinf(
      chi_square_divergence(std::vector<double>{0.5, 0.5},
                            std::vector<double>{1.0, 0.0})));
  CHECK_THROWS_AS(chi_square_divergence(dist_of({1.0}), q), DimensionError);
}

TEST_CASE("k=0 pins rho to q") {
  const auto q = dist_of({0.5, 0.3, 0.2});
  const MetricVector psi{{1.0, 2.0, 3.0}};
  const auto sol = solve_worst_case(q, psi, 0.0, Direction::maximize);
  for (std::size_t i = 0; i < q.size(); ++i)
    CHECK(std::fabs(sol.rho[i] - q.probs()[i]) <= 1e-12);
  CHECK(sol.value == doctest::Approx(expectation(q, psi)).epsilon(1e-12));
}

TEST_CASE("constant metric gives constant value") {
  const auto q = dist_of({0.4, 0.35, 0.25});
  const MetricVector psi{{2.5, 2.5, 2.5}};
  for (double k : {0.0, 0.1, 1.0, 10.0}) {
    CHECK(solve_worst_case(q, psi, k, Direction::maximize).value ==
          doctest::Approx(2.5).epsilon(1e-12));
  }
}

TEST_CASE("saturation at the point-mass feasibility boundary") {
  const auto q = dist_of({0.5, 0.5});
  const MetricVector psi{{0.0, 1.0}};
  const auto sol = solve_worst_case(q, psi, 1.0, Direction::maximize);
  CHECK(sol.value == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(sol.rho[0] == doctest::Approx(0.0));
  CHECK(sol.rho[1] == doctest::Approx(1.0));
  check_feasible(sol, q, 1.0);
}

TEST_CASE("three-point instance agrees with the grid oracle") {
  const auto q = dist_of({0.5, 0.3, 0.2});
  const MetricVector psi{{1.0, 2.0, 3.0}};
  const double res = 1e-3;
  const double tol = 1e-4 + 3.0 * res * 3.0;  // combined solver + grid error

  const auto hi = solve_worst_case(q, psi, 0.5, Direction::maximize);
  check_feasible(hi, q, 0.5);
  CHECK(std::fabs(hi.value - oracle_worst_case(q, psi, 0.5,
                                               Direction::maximize, res)) <=
        tol);

  const auto lo = solve_worst_case(q, psi, 0.5, Direction::minimize);
  check_feasible(lo, q, 0.5);
  CHECK(std::fabs(lo.value - oracle_worst_case(q, psi, 0.5,
                                               Direction::minimize, res)) <=
        tol);

  // Negation duality.
  const MetricVector neg{{-1.0, -2.0, -3.0}};
  const auto neg_max = solve_worst_case(q, neg, 0.5, Direction::maximize);
  CHECK(lo.value == doctest::Approx(-neg_max.value).epsilon(1e-10));
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(lo.rho[i] == doctest::Approx(neg_max.rho[i]).epsilon(1e-9));
}

TEST_CASE("translation and scale equivariance") {
  Rng rng(81);
  for (int rep = 0; rep < 20; ++rep) {
    const auto q = dist_of(random_simplex(rng, 5, 0.02));
    MetricVector psi{{}};
    for (int i = 0; i < 5; ++i) psi.values.push_back(rng.normal());
    const double k = 0.3 + rng.uniform();
    const auto base = solve_worst_case(q, psi, k, Direction::maximize);

    const double c = 2.5, a = 3.0;
    MetricVector shifted = psi, scaled = psi;
    for (double& v : shifted.values) v += c;
    for (double& v : scaled.values) v *= a;
    CHECK(solve_worst_case(q, shifted, k, Direction::maximize).value ==
          doctest::Approx(base.value + c).epsilon(1e-8));
    CHECK(solve_worst_case(q, scaled, k, Direction::maximize).value ==
          doctest::Approx(a * base.value).epsilon(1e-8));
  }
}

TEST_CASE("zero-mass states stay excluded") {
  const auto q = dist_of({0.6, 0.0, 0.4});
  const MetricVector psi{{0.0, 100.0, 1.0}};
  const auto sol = solve_worst_case(q, psi, 0.5, Direction::maximize);
  CHECK(sol.rho[1] == 0.0);
  CHECK(sol.value <= 1.0 + 1e-9);
}

TEST_CASE("degenerate single-point support") {
  const auto q = dist_of({1.0});
  const MetricVector psi{{7.0}};
  const auto sol = solve_worst_case(q, psi, 2.0, Direction::maximize);
  CHECK(sol.value == doctest::Approx(7.0));
  CHECK(sol.rho[0] == doctest::Approx(1.0));
}

TEST_CASE("value stays within the metric range") {
  Rng rng(4242);
  for (int rep = 0; rep < 50; ++rep) {
    const auto q = dist_of(random_simplex(rng, 6, 0.01));
    MetricVector psi{{}};
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i < 6; ++i) {
      psi.values.push_back(rng.normal());
      lo = std::min(lo, psi.values.back());
      hi = std::max(hi, psi.values.back());
    }
    const double k = 3.0 * rng.uniform();
    for (auto dir : {Direction::maximize, Direction::minimize}) {
      const auto sol = solve_worst_case(q, psi, k, dir);
      CHECK(sol.value >= lo - 1e-9);
      CHECK(sol.value <= hi + 1e-9);
      check_feasible(sol, q, k);
    }
  }
}

TEST_CASE("worst-case curve endpoints and monotonicity") {
  const auto q = dist_of({0.25, 0.25, 0.25, 0.25});
  const MetricVector psi{{-1.0, 0.0, 0.5, 2.0}};

  const auto single = worst_case_curve(q, psi, {0.0}, Direction::maximize);
  CHECK(single[0].second ==
        doctest::Approx(expectation(q, psi)).epsilon(1e-12));

  std::vector<double> ks;
  for (int i = 0; i <= 30; ++i) ks.push_back(0.1 * i);
  const auto curve = worst_case_curve(q, psi, ks, Direction::maximize);
  for (std::size_t i = 1; i < curve.size(); ++i)
    CHECK(curve[i].second >= curve[i - 1].second - 1e-8);
  CHECK(curve.back().second == doctest::Approx(2.0).epsilon(1e-8));

  const auto down = worst_case_curve(q, psi, ks, Direction::minimize);
  for (std::size_t i = 1; i < down.size(); ++i)
    CHECK(down[i].second <= down[i - 1].second + 1e-8);
  CHECK(down.back().second == doctest::Approx(-1.0).epsilon(1e-8));

  CHECK_THROWS_AS(worst_case_curve(q, psi, {}, Direction::maximize),
                  InputError);
}

TEST_CASE("tied extrema split saturation mass proportionally to q") {
  const auto q = dist_of({0.2, 0.3, 0.5});
  const MetricVector psi{{0.0, 1.0, 1.0}};
  const auto sol = solve_worst_case(q, psi, 10.0, Direction::maximize);
  CHECK(sol.value == doctest::Approx(1.0));
  CHECK(sol.rho[0] == doctest::Approx(0.0));
  CHECK(sol.rho[1] == doctest::Approx(0.3 / 0.8).epsilon(1e-12));
  CHECK(sol.rho[2] == doctest::Approx(0.5 / 0.8).epsilon(1e-12));
}

TEST_CASE("solver error paths") {
  const auto q = dist_of({0.5, 0.5});
  const MetricVector psi{{0.0, 1.0}};
  CHECK_THROWS_AS(solve_worst_case(q, psi, -0.1, Direction::maximize),
                  DomainError);
  CHECK_THROWS_AS(solve_worst_case(q, MetricVector{{1.0}}, 0.5,
                                   Direction::maximize),
                  DimensionError);
  CHECK_THROWS_AS(
      oracle_worst_case(dist_of(std::vector<double>(7, 1.0 / 7)),
                        MetricVector{std::vector<double>(7, 0.0)}, 0.5,
                        Direction::maximize, 1e-2),
      CapacityError);
}

TEST_CASE("oracle saturation hits the exact maximum") {
  const auto q = dist_of({0.25, 0.25, 0.25, 0.25});
  const MetricVector psi{{0.0, 0.5, 1.0, 3.0}};
  CHECK(oracle_worst_case(q, psi, 3.0, Direction::maximize, 1e-2) ==
        doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("random instances: solver matches oracle") {
  Rng rng(777);
  const double res = 2e-3;
  int done = 0;
  while (done < 60) {
    const std::size_t n = 3 + static_cast<std::size_t>(rng.uniform() * 2.999);
    const auto q = dist_of(random_simplex(rng, n, 0.03));
    MetricVector psi{{}};
    for (std::size_t i = 0; i < n; ++i) psi.values.push_back(rng.normal());
    const double k = 0.05 + 2.0 * rng.uniform();
    for (auto dir : {Direction::maximize, Direction::minimize}) {
      const auto sol = solve_worst_case(q, psi, k, dir);
      check_feasible(sol, q, k);
      double amax = 0.0;
      for (double v : psi.values) amax = std::max(amax, std::fabs(v));
      const double tol = 1e-4 + static_cast<double>(n) * res * amax;
      CHECK(std::fabs(sol.value - oracle_worst_case(q, psi, k, dir, res)) <=
            tol);
    }
    ++done;
  }
}
