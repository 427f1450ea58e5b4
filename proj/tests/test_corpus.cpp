#include <catch2/catch_amalgamated.hpp>

#include <stdexcept>

#include "facmech/corpus.hpp"
#include "facmech/io.hpp"
#include "facmech/model.hpp"

namespace fm = facmech;

TEST_CASE("the two-approvals-each pair differs in one report", "[corpus]") {
  fm::InstancePair pair = fm::fig1_pair(fm::Rat(1, 100));
  REQUIRE(pair.base.n() == 4);
  CHECK(pair.base.agents[0].approve.mask() == 0b10u);
  CHECK(pair.base.agents[0].x == fm::Rat(1, 100));
  CHECK(pair.base.agents[1].approve.mask() == 0b01u);
  CHECK(pair.base.agents[1].x == fm::Rat(1, 100));
  CHECK(pair.base.agents[2].approve.mask() == 0b10u);
  CHECK(pair.base.agents[2].x == 1);
  CHECK(pair.base.agents[3].approve.mask() == 0b01u);
  CHECK(pair.base.agents[3].x == 1);

  CHECK(pair.variant.agents[1].approve.mask() == 0b01u);
  CHECK(pair.variant.agents[1].x == 1);
  CHECK(pair.variant.agents[0].x == pair.base.agents[0].x);

  CHECK_THROWS_AS(fm::fig1_pair(fm::Rat(0)), std::invalid_argument);
  CHECK_THROWS_AS(fm::fig1_pair(fm::Rat(1, 2)), std::invalid_argument);
}

TEST_CASE("the middle-gap pair pins its published welfare numbers", "[corpus]") {
  fm::InstancePair pair = fm::fig2_pair();
  REQUIRE(pair.base.n() == 4);
  CHECK(pair.base.agents[0].x == 0);
  CHECK(pair.base.agents[1].x == fm::Rat(1, 6));
  CHECK(pair.base.agents[1].approve.mask() == 0b11u);
  CHECK(pair.base.agents[2].x == fm::Rat(5, 6));
  CHECK(pair.base.agents[3].x == 1);
  CHECK(fm::optimal_choice(pair.base).welfare == fm::Rat(13, 6));
  CHECK(pair.variant.agents[1].approve.mask() == 0b10u);
  CHECK(pair.variant.agents[1].x == fm::Rat(1, 6));
}

TEST_CASE("the clustered-ends pair keeps both clusters near the edges", "[corpus]") {
  fm::Rat eps(1, 100);
  fm::InstancePair pair = fm::random_median_lb_pair(eps);
  REQUIRE(pair.base.n() == 4);
  CHECK(pair.base.agents[2].x == 1 - eps);
  CHECK(pair.base.agents[3].x == 1 - eps);
  CHECK(pair.variant.agents[3].approve.mask() == 0b01u);
  CHECK(pair.variant.agents[3].x == eps);
}

TEST_CASE("the dictatorship-gap family scales with n", "[corpus]") {
  fm::Rat eps(1, 10);
  fm::InstancePair pair = fm::fig3_pair(6, eps);
  REQUIRE(pair.base.n() == 6);
  CHECK(pair.base.agents[0].approve.mask() == 0b01u);
  CHECK(pair.base.agents[0].x == 0);
  for (int i = 1; i <= 4; ++i) {
    CHECK(pair.base.agents[static_cast<std::size_t>(i)].approve.mask() == 0b11u);
    CHECK(pair.base.agents[static_cast<std::size_t>(i)].x == fm::Rat(1, 2) - eps);
  }
  CHECK(pair.base.agents[5].approve.mask() == 0b10u);
  CHECK(pair.base.agents[5].x == 1);
  CHECK(pair.variant.agents[5].approve.mask() == 0b10u);
  CHECK(pair.variant.agents[5].x == fm::Rat(1, 2) - eps);

  CHECK_THROWS_AS(fm::fig3_pair(3, eps), std::invalid_argument);
}

TEST_CASE("the fixed-p stress instance weighs fifty agents", "[corpus]") {
  fm::Instance prd = fm::prd_instance();
  REQUIRE(prd.n() == 50);
  CHECK(prd.approver_count(1) == 40);
  CHECK(prd.approver_count(2) == 25);
  int duals = 0;
  for (const fm::Agent& a : prd.agents) duals += a.approve.count() == 2 ? 1 : 0;
  CHECK(duals == 15);
}

TEST_CASE("the coalition instance gives every facility one fan at the center", "[corpus]") {
  fm::Instance instance = fm::km_nongsp_instance(5, 2);
  REQUIRE(instance.n() == 5);
  REQUIRE(instance.m == 5);
  REQUIRE(instance.k == 2);
  for (int i = 0; i < 5; ++i) {
    CHECK(instance.agents[static_cast<std::size_t>(i)].x == fm::Rat(1, 2));
    CHECK(instance.agents[static_cast<std::size_t>(i)].approve.ids() ==
          std::vector<int>{i + 1});
  }
  CHECK_THROWS_AS(fm::km_nongsp_instance(3, 1), std::invalid_argument);
  CHECK_THROWS_AS(fm::km_nongsp_instance(4, 3), std::invalid_argument);
}

TEST_CASE("the drifting sequence moves one fan per step", "[corpus]") {
  fm::Rat eps(1, 100);
  std::vector<fm::Instance> steps = fm::km_lb_sequence(6, 2, eps);
  REQUIRE(steps.size() == 5);
  const fm::Instance& first = steps.front();
  REQUIRE(first.n() == 12);
  for (int f = 1; f <= 6; ++f) {
    std::size_t near = static_cast<std::size_t>(2 * (f - 1));
    CHECK(first.agents[near].x == eps);
    CHECK(first.agents[near].approve.ids() == std::vector<int>{f});
    CHECK(first.agents[near + 1].x == 1);
    CHECK(first.agents[near + 1].approve.ids() == std::vector<int>{f});
  }
  // Step j relocates the near fan of facility k+j to 1, cumulatively.
  for (std::size_t j = 1; j < steps.size(); ++j) {
    for (std::size_t f = 3; f <= 6; ++f) {
      std::size_t near = 2 * (f - 1);
      fm::Rat expected = f <= 2 + j ? fm::Rat(1) : eps;
      CHECK(steps[j].agents[near].x == expected);
    }
  }
  CHECK_THROWS_AS(fm::km_lb_sequence(3, 2, eps), std::invalid_argument);
  CHECK_THROWS_AS(fm::km_lb_sequence(4, 0, eps), std::invalid_argument);
}

TEST_CASE("the dictatorship worst case is three against one and two", "[corpus]") {
  fm::Instance instance = fm::rd_worst_case_instance();
  REQUIRE(instance.n() == 6);
  CHECK(instance.approver_count(1) == 4);
  CHECK(instance.approver_count(2) == 2);
  int at_zero = 0;
  for (const fm::Agent& a : instance.agents) at_zero += a.x == 0 ? 1 : 0;
  CHECK(at_zero == 4);
}

TEST_CASE("corpus names resolve with defaults and suffixes", "[corpus]") {
  SECTION("bare names use the default parameters") {
    std::optional<fm::Instance> fig1 = fm::lookup_instance("fig1");
    REQUIRE(fig1);
    CHECK(fig1->agents[0].x == fm::Rat(1, 100));
    REQUIRE(fm::lookup_instance("fig2"));
    REQUIRE(fm::lookup_instance("random-median-lb"));
    REQUIRE(fm::lookup_instance("fig3"));
    REQUIRE(fm::lookup_instance("prd"));
    REQUIRE(fm::lookup_instance("km-nongsp"));
    REQUIRE(fm::lookup_instance("km-lb"));
    REQUIRE(fm::lookup_instance("rd-worst-case"));
  }
  SECTION("an eps suffix reparameterizes the family") {
    std::optional<fm::Instance> tight = fm::lookup_instance("fig1:1/1000");
    REQUIRE(tight);
    CHECK(tight->agents[0].x == fm::Rat(1, 1000));
  }
  SECTION("a prime suffix selects the deviated twin") {
    std::optional<fm::Instance> base = fm::lookup_instance("fig1");
    std::optional<fm::Instance> prime = fm::lookup_instance("fig1:prime");
    REQUIRE(base);
    REQUIRE(prime);
    CHECK(base->agents[1].x != prime->agents[1].x);
    std::optional<fm::Instance> both = fm::lookup_instance("fig3:5:1/8:prime");
    REQUIRE(both);
    CHECK(both->n() == 5);
    CHECK(both->agents[4].x == fm::Rat(3, 8));
  }
  SECTION("the sequence family exposes one step at a time") {
    std::optional<fm::Instance> step = fm::lookup_instance("km-lb:4:2:1/100:2");
    REQUIRE(step);
    CHECK(step->agents[4].x == 1);
    CHECK_THROWS_AS(fm::lookup_instance("km-lb:4:2:1/100:3"), std::invalid_argument);
  }
  SECTION("unknown names and bad tokens are not instances") {
    CHECK_FALSE(fm::lookup_instance(""));
    CHECK_FALSE(fm::lookup_instance("bogus"));
    CHECK_FALSE(fm::lookup_instance("fig1:xyz"));
    CHECK_FALSE(fm::lookup_instance("fig3:four"));
    CHECK_FALSE(fm::lookup_instance("prd:1/2"));
  }
  SECTION("in-range parameters that violate a family's shape still throw") {
    CHECK_THROWS_AS(fm::lookup_instance("km-nongsp:3:1"), std::invalid_argument);
    CHECK_THROWS_AS(fm::lookup_instance("fig1:1/2"), std::invalid_argument);
  }
  SECTION("every published name is listed") {
    std::vector<std::string> names = fm::corpus_names();
    CHECK(names.size() == 8);
    for (const std::string& name : names) {
      CAPTURE(name);
      CHECK(fm::lookup_instance(name).has_value());
    }
  }
}
