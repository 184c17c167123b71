#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "wct/discretize.hpp"

using namespace wct;

namespace {

RewardConfig scalar_reward() {
  return RewardConfig{{"r"}, {1.0}, {true}};
}

EvalLog log_of(std::vector<double> rewards) {
  EvalLog log{"pi", {{}}};
  for (double r : rewards) log.episodes[0].push_back({r});
  return log;
}

}  // namespace

TEST_CASE("empirical_distribution counts frequencies") {
  const auto [dist, psi] = empirical_distribution(
      log_of({1.0, 1.0, 2.0, 3.0}), scalar_reward(),
      DiscretizeConfig{1, StateSpace::reward_scalar});
  REQUIRE(dist.size() == 3);
  CHECK(dist.probs()[0] == doctest::Approx(0.5));
  CHECK(dist.probs()[1] == doctest::Approx(0.25));
  CHECK(dist.probs()[2] == doctest::Approx(0.25));
  CHECK(psi.values[0] == doctest::Approx(1.0));
  CHECK(psi.values[1] == doctest::Approx(2.0));
  CHECK(psi.values[2] == doctest::Approx(3.0));
}

TEST_CASE("quantization collapses nearby rewards") {
  const auto [dist, psi] = empirical_distribution(
      log_of({0.04, 0.04999}), scalar_reward(),
      DiscretizeConfig{1, StateSpace::reward_scalar});
  REQUIRE(dist.size() == 1);
  CHECK(dist.support()[0].coords[0] == 0);
  CHECK(dist.probs()[0] == doctest::Approx(1.0));
}

TEST_CASE("uniform rewards recover uniform frequencies") {
  std::mt19937_64 gen(123);
  std::uniform_int_distribution<int> pick(1, 10);
  std::vector<double> rewards;
  rewards.reserve(100000);
  for (int i = 0; i < 100000; ++i)
    rewards.push_back(static_cast<double>(pick(gen)) / 10.0);
  const auto [dist, psi] = empirical_distribution(
      log_of(rewards), scalar_reward(),
      DiscretizeConfig{1, StateSpace::reward_scalar});
  REQUIRE(dist.size() == 10);
  for (double p : dist.probs()) CHECK(std::fabs(p - 0.1) < 0.01);
}

TEST_CASE("empty log is rejected") {
  EvalLog empty{"pi", {{}}};
  CHECK_THROWS_AS(empirical_distribution(empty, scalar_reward(),
                                         DiscretizeConfig{}),
                  InputError);
}

TEST_CASE("mix_counts merges pointwise") {
  CountMap a{1, {{SupportPoint{{1}}, 1}}};
  CountMap b{1, {{SupportPoint{{2}}, 1}}};
  const auto ab = mix_counts(a, b);
  CHECK(ab.counts.size() == 2);

  CountMap c{1, {{SupportPoint{{1}}, 2}}};
  CountMap d{1, {{SupportPoint{{1}}, 3}}};
  CHECK(mix_counts(c, d).counts.at(SupportPoint{{1}}) == 5);

  CountMap other{2, {}};
  CHECK_THROWS_AS(mix_counts(a, other), ConfigError);
}

TEST_CASE("shard merge equals pooled ingestion") {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> rewards(5000);
  for (double& r : rewards) r = u(gen);

  const DiscretizeConfig disc{2, StateSpace::reward_scalar};
  const auto reward = scalar_reward();
  const auto pooled = count_steps(log_of(rewards), reward, disc);

  for (int rep = 0; rep < 5; ++rep) {
    std::uniform_int_distribution<std::size_t> cut(1, rewards.size() - 1);
    const std::size_t split = cut(gen);
    const auto merged = mix_counts(
        count_steps(log_of({rewards.begin(), rewards.begin() +
                                                 static_cast<long>(split)}),
                    reward, disc),
        count_steps(log_of({rewards.begin() + static_cast<long>(split),
                            rewards.end()}),
                    reward, disc));
    CHECK(merged.counts == pooled.counts);
  }
}

TEST_CASE("permutation invariance of the empirical distribution") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  std::vector<double> rewards(2000);
  for (double& r : rewards) r = u(gen);
  const DiscretizeConfig disc{1, StateSpace::reward_scalar};
  const auto base =
      empirical_distribution(log_of(rewards), scalar_reward(), disc);
  std::shuffle(rewards.begin(), rewards.end(), gen);
  const auto shuffled =
      empirical_distribution(log_of(rewards), scalar_reward(), disc);
  CHECK(base.first.support() == shuffled.first.support());
  CHECK(base.first.probs() == shuffled.first.probs());
}

// Refinement holds for inputs already on the d+1 grid; off-grid values can
// legitimately land in different bins after double rounding.
TEST_CASE("refinement consistency on grid-aligned inputs") {
  std::mt19937_64 gen(17);
  std::uniform_int_distribution<int> m(-500, 500);
  const int d = 1;
  std::vector<double> rewards(4000);
  for (double& r : rewards) r = static_cast<double>(m(gen)) / 100.0;  // d+1 grid
  const auto reward = scalar_reward();

  const auto coarse = empirical_distribution(
      log_of(rewards), reward, DiscretizeConfig{d, StateSpace::reward_scalar});
  const auto fine = empirical_distribution(
      log_of(rewards), reward,
      DiscretizeConfig{d + 1, StateSpace::reward_scalar});
  CHECK(fine.first.size() >= coarse.first.size());

  // Marginalize fine back to d with half-away-from-zero integer division.
  std::map<SupportPoint, double> marginal;
  for (std::size_t i = 0; i < fine.first.size(); ++i) {
    const std::int64_t c = fine.first.support()[i].coords[0];
    const std::int64_t sign = c < 0 ? -1 : 1;
    const std::int64_t down = sign * ((sign * c + 5) / 10);
    marginal[SupportPoint{{down}}] += fine.first.probs()[i];
  }
  const DiscreteDistribution remade(d, marginal);
  REQUIRE(remade.size() == coarse.first.size());
  CHECK(remade.support() == coarse.first.support());
  for (std::size_t i = 0; i < remade.size(); ++i)
    CHECK(remade.probs()[i] ==
          doctest::Approx(coarse.first.probs()[i]).epsilon(1e-12));
}

TEST_CASE("probabilities sum to one") {
  std::mt19937_64 gen(31);
  std::normal_distribution<double> n(0.0, 3.0);
  std::vector<double> rewards(10000);
  for (double& r : rewards) r = n(gen);
  const auto [dist, psi] = empirical_distribution(
      log_of(rewards), scalar_reward(),
      DiscretizeConfig{2, StateSpace::reward_scalar});
  double total = 0.0;
  for (double p : dist.probs()) total += p;
  CHECK(std::fabs(total - 1.0) <= 1e-12);
}

TEST_CASE("burn-in drops episode prefixes") {
  EvalLog log{"pi", {{{1.0}, {2.0}, {2.0}}, {{1.0}, {2.0}}}};
  DiscretizeConfig disc{1, StateSpace::reward_scalar, 1};
  const auto [dist, psi] = empirical_distribution(log, scalar_reward(), disc);
  REQUIRE(dist.size() == 1);
  CHECK(psi.values[0] == doctest::Approx(2.0));
}

TEST_CASE("reward_terms space uses masked term vectors") {
  RewardConfig reward{{"a", "b", "c"}, {2.0, 1.0, 5.0}, {true, true, false}};
  EvalLog log{"pi", {{{1.0, 2.0, 9.0}, {1.0, 2.0, 7.0}, {3.0, 4.0, 9.0}}}};
  const auto [dist, psi] = empirical_distribution(
      log, reward, DiscretizeConfig{1, StateSpace::reward_terms});
  REQUIRE(dist.size() == 2);  // the unmasked third term is ignored
  CHECK(dist.support()[0].coords == std::vector<std::int64_t>{10, 20});
  CHECK(psi.values[0] == doctest::Approx(2.0 * 1.0 + 1.0 * 2.0));
  CHECK(psi.values[1] == doctest::Approx(2.0 * 3.0 + 1.0 * 4.0));
}
