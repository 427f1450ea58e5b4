#include <catch2/catch_amalgamated.hpp>

#include <stdexcept>
#include <string>
#include <vector>

#include "facmech/corpus.hpp"
#include "facmech/io.hpp"
#include "facmech/mechanisms.hpp"
#include "facmech/model.hpp"

namespace fm = facmech;

namespace {

fm::Agent agent(std::vector<int> ids, fm::Rat x) {
  return fm::Agent{std::move(x), fm::Preference::from_ids(ids)};
}

}  // namespace

TEST_CASE("class and setting names round trip", "[io]") {
  for (fm::UtilityClass klass :
       {fm::UtilityClass::Sum, fm::UtilityClass::MinDist, fm::UtilityClass::MaxDist}) {
    CHECK(fm::utility_class_from_string(fm::to_string(klass)) == klass);
  }
  for (fm::InformationSetting setting :
       {fm::InformationSetting::General, fm::InformationSetting::KnownPreferences,
        fm::InformationSetting::KnownPositions}) {
    CHECK(fm::setting_from_string(fm::to_string(setting)) == setting);
  }
  CHECK_FALSE(fm::utility_class_from_string("SUM"));
  CHECK_FALSE(fm::setting_from_string("private"));
}

TEST_CASE("instances survive a serialization round trip", "[io]") {
  fm::Instance original = fm::Instance::create(
      {agent({1, 3}, fm::Rat(2, 7)), agent({2}, fm::Rat(1))}, 3, 2, fm::UtilityClass::MinDist);
  std::string text = fm::instance_to_json(original);
  fm::Instance parsed = fm::instance_from_json(text);
  CHECK(parsed.m == 3);
  CHECK(parsed.k == 2);
  CHECK(parsed.utility_class == fm::UtilityClass::MinDist);
  REQUIRE(parsed.n() == 2);
  CHECK(parsed.agents[0].x == fm::Rat(2, 7));
  CHECK(parsed.agents[0].approve.ids() == std::vector<int>{1, 3});
  CHECK(fm::instance_to_json(parsed) == text);
}

TEST_CASE("the canonical form is stable and fraction-valued", "[io]") {
  fm::Instance instance = fm::Instance::create({agent({1}, fm::Rat(1, 2))}, 2, 1);
  std::string text = fm::instance_to_json(instance);
  CHECK(text.find("\"m\": 2") != std::string::npos);
  CHECK(text.find("\"utility_class\": \"sum\"") != std::string::npos);
  CHECK(text.find("\"x\": \"1/2\"") != std::string::npos);
  CHECK(text.back() == '\n');
  CHECK(text.find("0.5") == std::string::npos);
}

TEST_CASE("instance parsing rejects malformed documents", "[io]") {
  CHECK_THROWS_AS(fm::instance_from_json("not json"), std::invalid_argument);
  CHECK_THROWS_AS(fm::instance_from_json("[]"), std::invalid_argument);
  CHECK_THROWS_AS(fm::instance_from_json("{\"m\":2,\"k\":1,\"agents\":[]}"),
                  std::invalid_argument);

  std::string good = fm::instance_to_json(fm::Instance::create({agent({1}, fm::Rat(0))}, 2, 1));
  SECTION("a position outside the segment fails instance validation") {
    std::string bad = good;
    bad.replace(bad.find("0/1"), 3, "3/2");
    CHECK_THROWS_AS(fm::instance_from_json(bad), std::invalid_argument);
  }
  SECTION("decimal positions are not part of the format") {
    std::string bad = good;
    bad.replace(bad.find("\"0/1\""), 5, "0.0");
    CHECK_THROWS_AS(fm::instance_from_json(bad), std::invalid_argument);
  }
  SECTION("empty approval arrays are rejected") {
    std::string bad = good;
    std::string needle = "[\n        1\n      ]";
    REQUIRE(bad.find(needle) != std::string::npos);
    bad.replace(bad.find(needle), needle.size(), "[]");
    CHECK_THROWS_AS(fm::instance_from_json(bad), std::invalid_argument);
  }
}

TEST_CASE("digests identify instances, not labels", "[io]") {
  fm::InstancePair pair = fm::fig1_pair();
  std::string base_digest = fm::instance_digest(pair.base);
  CHECK(base_digest.size() == 16);
  CHECK(base_digest == fm::instance_digest(pair.base));
  CHECK(base_digest != fm::instance_digest(pair.variant));
}

TEST_CASE("evaluation reports carry the lottery and its expected welfare", "[io]") {
  fm::Instance prd = fm::prd_instance();
  std::optional<fm::MechanismSpec> rd = fm::parse_mechanism("rd:fixed:1/2");
  REQUIRE(rd);
  std::string report = fm::eval_report_to_json(fm::to_string(*rd), "prd", prd,
                                               fm::apply_mechanism(*rd, prd));
  CHECK(report.find("\"kind\": \"eval\"") != std::string::npos);
  CHECK(report.find("\"mechanism\": \"rd:fixed:1/2\"") != std::string::npos);
  CHECK(report.find("\"instance_id\": \"prd\"") != std::string::npos);
  CHECK(report.find("\"expected_welfare\": \"79/4\"") != std::string::npos);
  CHECK(report.find("\"schema_version\": 1") != std::string::npos);
}

TEST_CASE("optimum reports pin the argmax placement", "[io]") {
  fm::Instance fig2 = fm::fig2_pair().base;
  fm::OptimalResult best = fm::optimal_choice(fig2);
  std::string report = fm::opt_report_to_json("fig2", fig2, best);
  CHECK(report.find("\"kind\": \"opt\"") != std::string::npos);
  CHECK(report.find("\"welfare\": \"13/6\"") != std::string::npos);
  // Both facilities reach 13/6 here; ties keep the lower facility id.
  CHECK(report.find("\"facility\": 1") != std::string::npos);
  CHECK(report.find("\"location\": \"5/6\"") != std::string::npos);
}
