#include "qnum/network.hpp"

#include "qnum/errors.hpp"

#include <gtest/gtest.h>

#include <random>

namespace qnum {
namespace {

LinkSpec link(const std::string& id, double d) { return {id, d, std::nullopt}; }
RouteSpec route(const std::string& id, std::vector<std::string> links,
                const std::string& measure = "sk") {
  return {id, std::move(links), measure};
}

TEST(RateConstant, ZeroLengthGivesUnitTransmissivity) {
  EXPECT_NEAR(derive_rate_constant({0.0, 0.1, 1e-3}), 150.0, 1e-12);
}

TEST(RateConstant, FiftyKilometresIsOneDecade) {
  EXPECT_NEAR(derive_rate_constant({50.0, 0.1, 1e-3}), 15.0, 1e-12);
}

TEST(RateConstant, SurfnetLinkOneFromFormula) {
  // Differs from the tabulated 89.84; tabulated values are taken as input.
  EXPECT_NEAR(derive_rate_constant({30.6, 0.1, 1e-3}), 36.65145829040958, 1e-9);
}

TEST(RateConstant, RejectsInvalidParameters) {
  EXPECT_THROW(derive_rate_constant({10.0, 0.0, 1e-3}), ValidationError);
  EXPECT_THROW(derive_rate_constant({10.0, 1.0, 1e-3}), ValidationError);
  EXPECT_THROW(derive_rate_constant({10.0, 0.1, 0.0}), ValidationError);
  EXPECT_THROW(derive_rate_constant({-1.0, 0.1, 1e-3}), ValidationError);
}

TEST(RateConstant, MonotoneInLengthAndKappa) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> len(0.0, 200.0);
  std::uniform_real_distribution<double> kap(0.01, 0.99);
  for (int k = 0; k < 200; ++k) {
    const double l1 = len(rng), l2 = len(rng), k1 = kap(rng), k2 = kap(rng);
    if (l1 != l2) {
      EXPECT_EQ(l1 < l2, derive_rate_constant({l1, 0.1, 1e-3}) > derive_rate_constant({l2, 0.1, 1e-3}));
    }
    if (k1 != k2) {
      EXPECT_EQ(k1 < k2, derive_rate_constant({20.0, k1, 1e-3}) < derive_rate_constant({20.0, k2, 1e-3}));
    }
  }
}

TEST(LinkCapacity, Examples) {
  EXPECT_DOUBLE_EQ(link_capacity(150.0, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(link_capacity(150.0, 0.0), 150.0);
  EXPECT_NEAR(link_capacity(89.84, 0.5), 44.92, 1e-12);
  EXPECT_THROW(link_capacity(150.0, 1.5), DomainError);
  EXPECT_THROW(link_capacity(150.0, -0.1), DomainError);
}

TEST(BuildNetwork, SingleLinkSingleRoute) {
  const auto net = build_network({link("L1", 5.0)}, {route("R1", {"L1"})});
  ASSERT_EQ(net.incidence().rows(), 1);
  ASSERT_EQ(net.incidence().cols(), 1);
  EXPECT_EQ(net.incidence()(0, 0), 1.0);
}

TEST(BuildNetwork, DisjointRoutesGiveIdentity) {
  const auto net = build_network({link("A", 1.0), link("B", 2.0)},
                                 {route("R1", {"A"}), route("R2", {"B"})});
  EXPECT_TRUE(net.incidence().isApprox(Eigen::MatrixXd::Identity(2, 2)));
}

TEST(BuildNetwork, SurfnetRouteOneColumn) {
  std::vector<LinkSpec> links;
  for (int j = 1; j <= 18; ++j) links.push_back(link("L" + std::to_string(j), 50.0 + j));
  const auto net = build_network(
      links, {route("R1", {"L1", "L2", "L3", "L4", "L5", "L11", "L10"}),
              route("R2", {"L18", "L15", "L16", "L4", "L5", "L6"}),
              route("R3", {"L14", "L13", "L12", "L8", "L7"}),
              route("R4", {"L17", "L15", "L14", "L13", "L12", "L9"})});
  ASSERT_EQ(net.num_links(), 18u);
  const std::vector<int> expected{1, 2, 3, 4, 5, 10, 11};
  for (int j = 1; j <= 18; ++j) {
    const bool on = std::find(expected.begin(), expected.end(), j) != expected.end();
    EXPECT_EQ(net.incidence()(j - 1, 0), on ? 1.0 : 0.0) << "link " << j;
  }
  for (std::size_t i = 0; i < net.num_routes(); ++i) {
    EXPECT_EQ(net.incidence().col(static_cast<Eigen::Index>(i)).sum(),
              static_cast<double>(net.routes()[i].link_ids.size()));
  }
}

TEST(BuildNetwork, DropsUnreferencedLinks) {
  const auto net = build_network({link("A", 1.0), link("unused", 2.0), link("B", 3.0)},
                                 {route("R1", {"A", "B"})});
  ASSERT_EQ(net.num_links(), 2u);
  EXPECT_EQ(net.links()[1].id, "B");
  EXPECT_EQ(net.rate_constants()(1), 3.0);
  EXPECT_FALSE(net.find_link("unused"));
}

TEST(BuildNetwork, AdjacencyListsMatchIncidence) {
  const auto net = build_network({link("A", 1.0), link("S", 1.0), link("B", 1.0)},
                                 {route("R1", {"S", "A"}), route("R2", {"S", "B"})});
  const auto s = *net.find_link("S");
  ASSERT_EQ(net.link_routes(s).size(), 2u);
  EXPECT_EQ(net.route_links(0)[0], s);
  EXPECT_EQ(*net.find_route("R2"), 1u);
}

TEST(BuildNetwork, ErrorsNameOffendingIds) {
  try {
    build_network({link("L1", 1.0)}, {route("R1", {"L1", "ghost"})});
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("ghost"), std::string::npos);
  }
  EXPECT_THROW(build_network({link("L1", 1.0), link("L1", 2.0)}, {route("R1", {"L1"})}),
               ValidationError);
  EXPECT_THROW(build_network({link("L1", 1.0)}, {route("R1", {"L1"}), route("R1", {"L1"})}),
               ValidationError);
  EXPECT_THROW(build_network({link("L1", 1.0)}, {route("R1", {})}), ValidationError);
  EXPECT_THROW(build_network({link("L1", 1.0)}, {route("R1", {"L1", "L1"})}), ValidationError);
  EXPECT_THROW(build_network({link("L1", -1.0)}, {route("R1", {"L1"})}), ValidationError);
  EXPECT_THROW(build_network({}, {}), ValidationError);
}

TEST(BuildNetwork, PhysicalParametersDeriveOrConfirmD) {
  LinkSpec derived{"L1", 0.0, PhysicalLinkParams{50.0, 0.1, 1e-3}};
  auto net = build_network({derived}, {route("R1", {"L1"})});
  EXPECT_NEAR(net.rate_constants()(0), 15.0, 1e-12);

  LinkSpec agreeing{"L1", 15.0 * (1.0 + 5e-7), PhysicalLinkParams{50.0, 0.1, 1e-3}};
  EXPECT_NO_THROW(build_network({agreeing}, {route("R1", {"L1"})}));

  LinkSpec clashing{"L1", 89.84, PhysicalLinkParams{30.6, 0.1, 1e-3}};
  EXPECT_THROW(build_network({clashing}, {route("R1", {"L1"})}), ValidationError);
}

}  // namespace
}  // namespace qnum
