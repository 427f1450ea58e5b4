#include <catch2/catch_amalgamated.hpp>

#include <stdexcept>
#include <vector>

#include "facmech/model.hpp"
#include "facmech/search.hpp"

namespace fm = facmech;

namespace {

fm::Agent agent(std::vector<int> ids, fm::Rat x) {
  return fm::Agent{std::move(x), fm::Preference::from_ids(ids)};
}

}  // namespace

TEST_CASE("preferences are non-empty facility sets", "[model]") {
  fm::Preference p = fm::Preference::from_ids({2, 1, 2});
  CHECK(p.count() == 2);
  CHECK(p.approves(1));
  CHECK(p.approves(2));
  CHECK_FALSE(p.approves(3));
  CHECK(p.mask() == 0b11u);
  CHECK(p.ids() == std::vector<int>{1, 2});
  CHECK(p.max_id() == 2);

  CHECK_THROWS_AS(fm::Preference::from_ids({}), std::invalid_argument);
  CHECK_THROWS_AS(fm::Preference::from_mask(0), std::invalid_argument);
  CHECK_THROWS_AS(fm::Preference::from_ids({0}), std::invalid_argument);
  CHECK(fm::Preference::from_mask(0b101u).ids() == std::vector<int>{1, 3});
}

TEST_CASE("instance creation validates every field", "[model]") {
  std::vector<fm::Agent> agents = {agent({1}, fm::Rat(1, 2))};
  CHECK_NOTHROW(fm::Instance::create(agents, 2, 1));
  CHECK_THROWS_AS(fm::Instance::create({}, 2, 1), std::invalid_argument);
  CHECK_THROWS_AS(fm::Instance::create(agents, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(fm::Instance::create(agents, 2, 0), std::invalid_argument);
  CHECK_THROWS_AS(fm::Instance::create(agents, 2, 3), std::invalid_argument);
  CHECK_THROWS_AS(fm::Instance::create({agent({1}, fm::Rat(3, 2))}, 2, 1), std::invalid_argument);
  CHECK_THROWS_AS(fm::Instance::create({agent({1}, fm::Rat(-1, 2))}, 2, 1), std::invalid_argument);
  CHECK_THROWS_AS(fm::Instance::create({agent({3}, fm::Rat(0))}, 2, 1), std::invalid_argument);
}

TEST_CASE("outcomes keep distinct facilities sorted", "[model]") {
  fm::Outcome o = fm::Outcome::of({{2, fm::Rat(1)}, {1, fm::Rat(0)}});
  REQUIRE(o.size() == 2);
  CHECK(o.placements()[0].facility == 1);
  CHECK(o.placements()[1].facility == 2);
  CHECK_THROWS_AS(fm::Outcome::of({{1, fm::Rat(0)}, {1, fm::Rat(1)}}), std::invalid_argument);
  CHECK_THROWS_AS(fm::Outcome::of({{1, fm::Rat(2)}}), std::invalid_argument);
  CHECK_THROWS_AS(fm::Outcome::of({}), std::invalid_argument);
}

TEST_CASE("utility classes combine per-facility terms differently", "[model]") {
  std::vector<fm::Agent> agents = {agent({1, 2}, fm::Rat(0)), agent({1}, fm::Rat(1, 2)),
                                   agent({3}, fm::Rat(1))};
  fm::Outcome placed = fm::Outcome::of({{1, fm::Rat(0)}, {2, fm::Rat(1, 4)}});

  fm::Instance sum = fm::Instance::create(agents, 3, 2, fm::UtilityClass::Sum);
  CHECK(fm::agent_utility(sum, 0, placed) == fm::Rat(1) + fm::Rat(3, 4));
  CHECK(fm::agent_utility(sum, 1, placed) == fm::Rat(1, 2));
  CHECK(fm::agent_utility(sum, 2, placed) == 0);

  fm::Instance min_dist = fm::Instance::create(agents, 3, 2, fm::UtilityClass::MinDist);
  CHECK(fm::agent_utility(min_dist, 0, placed) == 1);
  CHECK(fm::agent_utility(min_dist, 1, placed) == fm::Rat(1, 2));
  CHECK(fm::agent_utility(min_dist, 2, placed) == 0);

  fm::Instance max_dist = fm::Instance::create(agents, 3, 2, fm::UtilityClass::MaxDist);
  CHECK(fm::agent_utility(max_dist, 0, placed) == fm::Rat(3, 4));
  CHECK(fm::agent_utility(max_dist, 1, placed) == 0);
  CHECK(fm::agent_utility(max_dist, 2, placed) == 0);

  CHECK(fm::social_welfare(sum, placed) == fm::Rat(9, 4));
  CHECK_THROWS_AS(fm::agent_utility(sum, 0, fm::Outcome::of({{1, fm::Rat(0)}})),
                  std::invalid_argument);
}

TEST_CASE("the three classes coincide when one of two facilities is placed", "[model]") {
  std::uint64_t state = fm::mix_seed(11, 0);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + static_cast<int>(fm::splitmix_next(state) % 6);
    fm::Instance base = fm::random_instance(state, n, 2, 1, fm::UtilityClass::Sum, 12);
    fm::Instance as_min = base;
    as_min.utility_class = fm::UtilityClass::MinDist;
    fm::Instance as_max = base;
    as_max.utility_class = fm::UtilityClass::MaxDist;
    int facility = 1 + static_cast<int>(fm::splitmix_next(state) % 2);
    fm::Rat y(static_cast<long long>(fm::splitmix_next(state) % 13), 12);
    fm::Outcome outcome = fm::Outcome::of({{facility, y}});
    for (int i = 0; i < n; ++i) {
      fm::Rat u = fm::agent_utility(base, i, outcome);
      REQUIRE(fm::agent_utility(as_min, i, outcome) == u);
      REQUIRE(fm::agent_utility(as_max, i, outcome) == u);
    }
  }
}

TEST_CASE("lotteries merge duplicate outcomes and drop zeros", "[model]") {
  fm::Outcome a = fm::Outcome::of({{1, fm::Rat(0)}});
  fm::Outcome b = fm::Outcome::of({{2, fm::Rat(1)}});
  fm::Lottery lottery;
  lottery.add(fm::Rat(1, 4), b);
  lottery.add(fm::Rat(1, 2), a);
  lottery.add(fm::Rat(1, 4), b);
  lottery.add(fm::Rat(0), a);
  REQUIRE(lottery.entries().size() == 2);
  CHECK(lottery.entries()[0].probability == fm::Rat(1, 2));
  CHECK(lottery.entries()[0].outcome.placements()[0].facility == 1);
  CHECK(lottery.entries()[1].probability == fm::Rat(1, 2));
  CHECK(lottery.sums_to_one());

  fm::Lottery point = fm::Lottery::point_mass(a);
  REQUIRE(point.entries().size() == 1);
  CHECK(point.entries()[0].probability == 1);
}

TEST_CASE("expected utilities weight the lottery support", "[model]") {
  fm::Instance instance =
      fm::Instance::create({agent({1}, fm::Rat(0)), agent({2}, fm::Rat(1))}, 2, 1);
  fm::Lottery lottery;
  lottery.add(fm::Rat(1, 3), fm::Outcome::of({{1, fm::Rat(0)}}));
  lottery.add(fm::Rat(2, 3), fm::Outcome::of({{2, fm::Rat(1, 2)}}));
  CHECK(fm::expected_agent_utility(instance, 0, lottery) == fm::Rat(1, 3));
  CHECK(fm::expected_agent_utility(instance, 1, lottery) == fm::Rat(1, 3));
  CHECK(fm::expected_welfare(instance, lottery) == fm::Rat(2, 3));
}

TEST_CASE("lower median picks the left of the two middles", "[model]") {
  CHECK(fm::lower_median({fm::Rat(1, 2)}) == fm::Rat(1, 2));
  CHECK(fm::lower_median({fm::Rat(1), fm::Rat(0)}) == 0);
  CHECK(fm::lower_median({fm::Rat(3, 4), fm::Rat(0), fm::Rat(1, 4)}) == fm::Rat(1, 4));
  CHECK(fm::lower_median({fm::Rat(1), fm::Rat(0), fm::Rat(1, 2), fm::Rat(1, 4)}) == fm::Rat(1, 4));

  fm::Instance instance = fm::Instance::create(
      {agent({1}, fm::Rat(1)), agent({1}, fm::Rat(0)), agent({2}, fm::Rat(1, 3))}, 2, 1);
  CHECK(fm::median_of_approvers(instance, 1) == fm::Rat(0));
  CHECK(fm::median_of_approvers(instance, 2) == fm::Rat(1, 3));
  fm::Instance lone = fm::Instance::create({agent({1}, fm::Rat(1, 2))}, 2, 1);
  CHECK_FALSE(fm::median_of_approvers(lone, 2).has_value());
}

TEST_CASE("optimal choice places one facility at an approver median", "[model]") {
  fm::Instance instance = fm::Instance::create(
      {agent({1}, fm::Rat(0)), agent({1}, fm::Rat(1)), agent({2}, fm::Rat(1, 2))}, 2, 1);
  fm::OptimalResult best = fm::optimal_choice(instance);
  CHECK(best.welfare == 1);
  REQUIRE(best.outcome.size() == 1);
  CHECK(best.outcome.placements()[0].facility == 1);
  CHECK(best.outcome.placements()[0].location == 0);
}

TEST_CASE("optimal choice decomposes additively across facilities", "[model]") {
  fm::Instance instance = fm::Instance::create(
      {agent({1}, fm::Rat(0)), agent({1}, fm::Rat(0)), agent({2}, fm::Rat(1)),
       agent({3}, fm::Rat(1, 2))},
      3, 2, fm::UtilityClass::Sum);
  fm::OptimalResult best = fm::optimal_choice(instance);
  CHECK(best.welfare == 3);
  REQUIRE(best.outcome.size() == 2);
  CHECK(best.outcome.placements()[0].facility == 1);
  CHECK(best.outcome.placements()[0].location == 0);
}

TEST_CASE("optimal choice can split facilities between agent groups", "[model]") {
  // Two slots; serving the paired approvers with one facility frees the other
  // for a singleton group.
  fm::Instance instance = fm::Instance::create(
      {agent({1, 2}, fm::Rat(0)), agent({1, 2}, fm::Rat(0)), agent({3}, fm::Rat(0)),
       agent({4}, fm::Rat(0))},
      4, 2, fm::UtilityClass::MinDist);
  fm::OptimalResult best = fm::optimal_choice(instance);
  CHECK(best.welfare == 3);
}

TEST_CASE("optimal choice for worst-term utilities collapses to one point", "[model]") {
  fm::Instance instance = fm::Instance::create(
      {agent({1, 2}, fm::Rat(0)), agent({1, 2}, fm::Rat(1, 4)), agent({3}, fm::Rat(1))}, 3, 2,
      fm::UtilityClass::MaxDist);
  fm::OptimalResult best = fm::optimal_choice(instance);
  // Both chosen facilities sit at the lower median 0 of the two full approvers.
  CHECK(best.welfare == fm::Rat(7, 4));
  REQUIRE(best.outcome.size() == 2);
  CHECK(best.outcome.placements()[0].location == 0);
  CHECK(best.outcome.placements()[1].location == 0);
}

TEST_CASE("optimal choice agrees with the grid oracle off the main path", "[model]") {
  std::uint64_t state = fm::mix_seed(5, 3);
  for (int trial = 0; trial < 60; ++trial) {
    int m = 3 + static_cast<int>(fm::splitmix_next(state) % 2);
    int k = 2 + static_cast<int>(fm::splitmix_next(state) % (m - 1));
    int n = 1 + static_cast<int>(fm::splitmix_next(state) % 5);
    auto klass = static_cast<fm::UtilityClass>(trial % 3);
    fm::Instance instance = fm::random_instance(state, n, m, k, klass, 6);
    fm::OptimalResult exact = fm::optimal_choice(instance);
    fm::OptimalResult grid = fm::optimal_welfare_bruteforce(instance, 6);
    REQUIRE(exact.welfare == grid.welfare);
  }
}

TEST_CASE("with_agent swaps exactly one report", "[model]") {
  fm::Instance instance = fm::Instance::create(
      {agent({1}, fm::Rat(0)), agent({2}, fm::Rat(1))}, 2, 1);
  fm::Instance swapped = instance.with_agent(1, agent({1}, fm::Rat(1, 2)));
  CHECK(swapped.agents[1].x == fm::Rat(1, 2));
  CHECK(swapped.agents[1].approve.approves(1));
  CHECK(instance.agents[1].approve.approves(2));
  CHECK(swapped.agents[0].x == instance.agents[0].x);
  CHECK_THROWS_AS(instance.with_agent(2, agent({1}, fm::Rat(0))), std::out_of_range);
}
