#include <doctest.h>

#include <random>

#include "wct/core.hpp"
#include "wct/io.hpp"

using namespace wct;

namespace {

RewardConfig six_terms(std::vector<double> weights, std::vector<bool> mask) {
  return RewardConfig{{"r_x", "r_xdot", "r_j", "r_jdot", "r_h", "r_a"},
                      std::move(weights),
                      std::move(mask)};
}

}  // namespace

TEST_CASE("reward_of_step unit case") {
  const auto config = six_terms({1, 1, 1, 1, 1, 1}, std::vector<bool>(6, true));
  CHECK(reward_of_step({1, 1, 1, 1, 1, 1}, config) == doctest::Approx(6.0));
}

TEST_CASE("reward_of_step selector weights") {
  const auto config = six_terms({1, 0, 0, 0, 0, 0}, std::vector<bool>(6, true));
  CHECK(reward_of_step({2, 3, 5, 7, 11, 13}, config) == doctest::Approx(2.0));
}

TEST_CASE("reward_of_step stability mask keeps r_x + r_xdot") {
  const auto config = six_terms({1, 1, 1, 1, 1, 1},
                                {true, true, false, false, false, false});
  CHECK(reward_of_step({2, 3, 5, 7, 11, 13}, config) == doctest::Approx(5.0));
}

TEST_CASE("reward_of_step rejects length mismatch") {
  const auto config = six_terms({1, 1, 1, 1, 1, 1}, std::vector<bool>(6, true));
  CHECK_THROWS_AS(reward_of_step({1, 2, 3}, config), DimensionError);
}

TEST_CASE("reward_of_step is linear") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const auto config =
      six_terms({0.5, -1.0, 2.0, 0.0, 3.0, 1.0},
                {true, true, false, true, true, true});
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> f1(6), f2(6), combo(6);
    const double a = u(gen), b = u(gen);
    for (int i = 0; i < 6; ++i) {
      f1[i] = u(gen);
      f2[i] = u(gen);
      combo[i] = a * f1[i] + b * f2[i];
    }
    CHECK(reward_of_step(combo, config) ==
          doctest::Approx(a * reward_of_step(f1, config) +
                          b * reward_of_step(f2, config))
              .epsilon(1e-12));
  }
}

TEST_CASE("quantize rounds half away from zero") {
  CHECK(quantize(0.05, 1) == 1);
  CHECK(quantize(-0.05, 1) == -1);
  CHECK(quantize(0.04999, 1) == 0);
  CHECK(quantize(2.5, 0) == 3);
  CHECK(quantize(-2.5, 0) == -3);
  CHECK(dequantize(quantize(1.23, 2), 2) == doctest::Approx(1.23));
}

TEST_CASE("distribution construction is order independent") {
  std::vector<std::pair<SupportPoint, double>> pairs = {
      {SupportPoint{{3}}, 0.2},
      {SupportPoint{{1}}, 0.5},
      {SupportPoint{{2}}, 0.3},
  };
  std::mt19937_64 gen(11);
  std::string first;
  for (int rep = 0; rep < 10; ++rep) {
    std::shuffle(pairs.begin(), pairs.end(), gen);
    std::map<SupportPoint, double> mass(pairs.begin(), pairs.end());
    const DiscreteDistribution dist(1, mass);
    const std::string serialized = dump_json17(dist_to_json(dist));
    if (first.empty())
      first = serialized;
    else
      CHECK(serialized == first);
  }
}

TEST_CASE("distribution normalizes and validates") {
  std::map<SupportPoint, double> mass;
  mass[SupportPoint{{0}}] = 2.0;
  mass[SupportPoint{{1}}] = 2.0;
  const DiscreteDistribution dist(0, mass);
  CHECK(dist.probs()[0] == doctest::Approx(0.5));
  double total = 0.0;
  for (double p : dist.probs()) total += p;
  CHECK(std::fabs(total - 1.0) <= 1e-12);

  CHECK_THROWS_AS(DiscreteDistribution(0, {}), InputError);
  std::map<SupportPoint, double> bad;
  bad[SupportPoint{{0}}] = -1.0;
  CHECK_THROWS_AS(DiscreteDistribution(0, bad), DomainError);
}

TEST_CASE("reward config validation") {
  RewardConfig config{{"a", "b"}, {1.0, 2.0}, {false, false}};
  CHECK_THROWS_AS(config.validate(), ConfigError);
  config.mask = {true, false};
  CHECK_NOTHROW(config.validate());
  config.weights = {1.0};
  CHECK_THROWS_AS(config.validate(), DimensionError);
}
