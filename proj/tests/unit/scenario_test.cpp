#include "qnum/scenario.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

namespace qnum {
namespace {

std::string message_of(const std::string& text, bool strict = false) {
  try {
    parse_scenario(text, "input.json", strict);
  } catch (const ScenarioError& e) {
    return e.what();
  }
  return {};
}

TEST(Scenario, LoadsSurfnet) {
  const auto sc = load_scenario(testing::scenario_path("surfnet.json"));
  EXPECT_EQ(sc.links.size(), 18u);
  EXPECT_EQ(sc.routes.size(), 4u);
  EXPECT_DOUBLE_EQ(sc.links[0].d, 89.84);
  EXPECT_EQ(sc.routes[0].link_ids.size(), 7u);
  EXPECT_TRUE(sc.warnings.empty());
}

TEST(Scenario, RoundTripKeepsIncidence) {
  for (const char* name : {"surfnet.json", "custom_poly.json", "physical_links.json"}) {
    const auto sc = load_scenario(testing::scenario_path(name));
    const auto again = parse_scenario(scenario_to_json(sc).dump());
    EXPECT_EQ(scenario_network(sc).incidence(), scenario_network(again).incidence()) << name;
    EXPECT_EQ(scenario_network(sc).rate_constants(), scenario_network(again).rate_constants()) << name;
    EXPECT_EQ(scenario_to_json(again), scenario_to_json(sc)) << name;
  }
}

TEST(Scenario, PhysicalLinksDeriveD) {
  const auto net = scenario_network(load_scenario(testing::scenario_path("physical_links.json")));
  EXPECT_NEAR(net.rate_constants()(0), 150.0, 1e-12);
  EXPECT_NEAR(net.rate_constants()(1), 15.0, 1e-12);
}

TEST(Scenario, ParseErrorHasLineAndColumn) {
  const auto msg = message_of("{\n  \"links\": [\n    {\"id\": \"L1\" \"d\": 1}\n  ]\n}");
  EXPECT_EQ(msg.rfind("input.json:3:", 0), 0u) << msg;
}

TEST(Scenario, ValidationErrorsCarryPointers) {
  EXPECT_NE(message_of(R"({"links":[{"id":"L1","d":1}],"routes":[{"id":"R","measure":"sk","links":["L1","L9"]}]})")
                .find("/routes/0/links/1: unknown link id \"L9\""),
            std::string::npos);
  EXPECT_NE(message_of(R"({"links":[{"id":"L1","d":-1}],"routes":[]})").find("/links/0/d"),
            std::string::npos);
  EXPECT_NE(message_of(R"({"links":[{"id":"L1","d":1}],"routes":[{"id":"R","measure":"zz","links":["L1"]}]})")
                .find("/routes/0/measure"),
            std::string::npos);
  EXPECT_NE(message_of(R"({"links":[{"id":"L1"}],"routes":[]})").find("/links/0"), std::string::npos);
  EXPECT_NE(message_of(R"({"routes":[]})").find("/links"), std::string::npos);
  EXPECT_NE(message_of(R"({"links":[],"routes":[],"solver":{"backtrack_beta":2}})").find("/solver"),
            std::string::npos);
  EXPECT_NE(message_of(R"({"links":[],"routes":[],"measures":[{"id":"sk","polynomial":[1]}]})")
                .find("/measures/0/id"),
            std::string::npos);
}

TEST(Scenario, UnknownFieldsWarnOrFail) {
  const std::string text = R"({"links":[{"id":"L1","d":1,"colour":"red"}],"routes":[{"id":"R","measure":"sk","links":["L1"]}],"note":1})";
  const auto sc = parse_scenario(text);
  EXPECT_EQ(sc.warnings.size(), 2u);
  EXPECT_NE(message_of(text, true).find("/note"), std::string::npos);
  const std::string nested = R"({"links":[{"id":"L1","d":1,"colour":"red"}],"routes":[{"id":"R","measure":"sk","links":["L1"]}]})";
  EXPECT_NE(message_of(nested, true).find("/links/0/colour"), std::string::npos);
}

TEST(Scenario, SolverOverrides) {
  const auto sc = parse_scenario(
      R"({"links":[{"id":"L1","d":1}],"routes":[{"id":"R","measure":"sk","links":["L1"]}],
          "solver":{"tol":1e-7,"seed":9,"multistart_count":3}})");
  EXPECT_DOUBLE_EQ(sc.solver.tol, 1e-7);
  EXPECT_EQ(sc.solver.seed, 9u);
  EXPECT_EQ(sc.solver.multistart_count, 3);
  EXPECT_DOUBLE_EQ(sc.solver.barrier_mu, 10.0);
}

}  // namespace
}  // namespace qnum
