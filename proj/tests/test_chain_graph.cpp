#include <gtest/gtest.h>

#include "rsp/chain_graph.hpp"
#include "rsp/lowerbound.hpp"
#include "rsp/oracle.hpp"
#include "rsp/plan.hpp"
#include "support.hpp"

using namespace rsp;

namespace {

// Crowded instance: stores scattered around a tight template, kept only when
// every pair of chains is satisfiable. Both answers occur often.
Instance crowded_instance(Rng& rng, int n, int m) {
  for (;;) {
    const Chain tmpl = rsp_test::random_chain(rng, m, 3.0, 0.5);
    Instance inst;
    inst.delta = 1.0;
    for (int i = 0; i < n; ++i) {
      Chain c;
      for (const Point& p : tmpl) c.push_back({p.x + rsp_test::grid(rng, -1.5, 1.5, 0.5), p.y + rsp_test::grid(rng, -1.5, 1.5, 0.5)});
      inst.chains.push_back(c);
    }
    if (validate_pairwise(inst).ok) return inst;
  }
}

void expect_sound(const Instance& inst, const SingleDecision& d) {
  EXPECT_EQ(check_partition(build_restaurant_graph(inst), d.partition), "");
  const PlanCheck c = verify_plan(inst, d.plan);
  EXPECT_TRUE(c.ok) << c.message;
  EXPECT_EQ(d.plan.k(), 1u);
}

}  // namespace

TEST(RestaurantGraph, SingleChainHasNoEdges) {
  const Instance inst{1.0, {{{0, 0}, {0.5, 0}, {1, 1}}}};
  const RestaurantGraph g = build_restaurant_graph(inst);
  EXPECT_EQ(g.vertex_count(), 3);
  EXPECT_EQ(g.edge_count(), 0u);
}

TEST(RestaurantGraph, CoincidentStoresGiveCompleteBipartite) {
  const Instance inst{1.0, {{{0, 0}, {0, 0}, {0, 0}}, {{0, 0}, {0, 0}, {0, 0}}}};
  const RestaurantGraph g = build_restaurant_graph(inst);
  EXPECT_EQ(g.edge_count(), 9u);
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      EXPECT_TRUE(g.adjacent({0, a}, {1, b}));
      if (a != b) EXPECT_FALSE(g.adjacent({0, a}, {0, b}));
    }
  }
}

TEST(RestaurantGraph, CityTripleIsASixCycle) {
  const Instance inst = rsp_test::city_instance({0, 1, 2});
  const RestaurantGraph g = build_restaurant_graph(inst);
  // Chain i holds city points i and i + 3; the six points form one hexagon.
  EXPECT_EQ(g.edge_count(), 6u);
  for (int v = 0; v < g.vertex_count(); ++v) EXPECT_EQ(g.adj[static_cast<std::size_t>(v)].size(), 2u);
  auto point_of = [](const Vertex& v) { return v.chain + 3 * v.store; };
  for (int u = 0; u < g.vertex_count(); ++u) {
    for (int v : g.adj[static_cast<std::size_t>(u)]) {
      EXPECT_TRUE(city_neighbors(point_of(g.vertex(u)), point_of(g.vertex(v))));
    }
  }
}

TEST(RestaurantGraph, EdgesMatchBallIntersection) {
  Rng rng(31);
  for (int t = 0; t < 50; ++t) {
    const Instance inst = crowded_instance(rng, 3, 3);
    const RestaurantGraph g = build_restaurant_graph(inst);
    for (int u = 0; u < g.vertex_count(); ++u) {
      for (int v = 0; v < g.vertex_count(); ++v) {
        const Vertex a = g.vertex(u);
        const Vertex b = g.vertex(v);
        const bool want = a.chain != b.chain &&
                          boxes_intersect(ball(inst.chains[static_cast<std::size_t>(a.chain)][static_cast<std::size_t>(a.store)], 1.0),
                                          ball(inst.chains[static_cast<std::size_t>(b.chain)][static_cast<std::size_t>(b.store)], 1.0));
        EXPECT_EQ(g.adjacent(u, v), want);
      }
    }
  }
}

TEST(ValidatePairwise, Examples) {
  EXPECT_TRUE(validate_pairwise({1.0, {{{0, 0}}}}).ok);
  const PairwiseReport r = validate_pairwise({1.0, {{{0, 0}}, {{100, 0}}}});
  EXPECT_FALSE(r.ok);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations[0], (std::pair<int, int>{0, 1}));
}

TEST(DecideSingleBacktracking, OneChainUsesItsOwnStores) {
  const Instance inst{1.0, {{{0, 0}, {7, 3}}}};
  const auto d = decide_single_backtracking(inst);
  ASSERT_TRUE(d);
  expect_sound(inst, *d);
  EXPECT_EQ(d->plan.supermarkets[0], inst.chains[0]);
}

TEST(DecideSingleBacktracking, DistinctCityPairsHaveNoPlan) {
  EXPECT_FALSE(decide_single_backtracking(rsp_test::city_instance({0, 1, 2})));
  EXPECT_TRUE(decide_single_backtracking(rsp_test::city_instance({0, 1, 1})));
}

TEST(DecideSingleBacktracking, AgreesWithExhaustiveSearch) {
  Rng rng(32);
  int yes = 0;
  for (int t = 0; t < 300; ++t) {
    const Instance inst = crowded_instance(rng, 4, 3);
    const auto fast = decide_single_backtracking(inst);
    const auto slow = brute_force_single(inst);
    ASSERT_EQ(fast.has_value(), slow.has_value());
    if (fast) {
      ++yes;
      expect_sound(inst, *fast);
    }
  }
  EXPECT_GT(yes, 0);
  EXPECT_LT(yes, 300);
}

TEST(DecideSingleM2, IdenticalChains) {
  const Instance inst{1.0, {{{0, 0}, {5, 5}}, {{0, 0}, {5, 5}}}};
  const auto d = decide_single_m2(inst);
  ASSERT_TRUE(d);
  expect_sound(inst, *d);
}

TEST(DecideSingleM2, DistinctCityPairsHaveNoPlan) {
  const Instance inst = rsp_test::city_instance({0, 1, 2});
  EXPECT_FALSE(decide_single_m2(inst));
  EXPECT_FALSE(brute_force_single(inst));
}

TEST(DecideSingleM2, RejectsWrongSizeAndPairwiseFailure) {
  EXPECT_THROW(decide_single_m2({1.0, {{{0, 0}, {1, 1}, {2, 2}}}}), InvalidParameter);
  EXPECT_THROW(decide_single_m2({1.0, {{{0, 0}, {1, 1}}, {{50, 0}, {1, 1}}}}), PreconditionViolation);
}

TEST(DecideSingleM2, AgreesWithExhaustiveSearchAndBacktracking) {
  Rng rng(33);
  int yes = 0;
  for (int t = 0; t < 1000; ++t) {
    const Instance inst = rsp_test::random_m2_instance(rng, 2 + t % 6);
    const auto m2 = decide_single_m2(inst);
    ASSERT_EQ(m2.has_value(), brute_force_single(inst).has_value());
    ASSERT_EQ(m2.has_value(), decide_single_backtracking(inst).has_value());
    if (m2) {
      ++yes;
      expect_sound(inst, *m2);
    }
  }
  EXPECT_GT(yes, 0);
  EXPECT_LT(yes, 1000);
}

TEST(DecideSingle, AutoDispatch) {
  const Instance m2 = rsp_test::city_instance({0, 1, 2});
  EXPECT_FALSE(decide_single(m2));
  const Instance m3{1.0, {{{0, 0}, {4, 0}, {8, 0}}, {{0.5, 0}, {4.5, 0}, {8.5, 0}}}};
  const auto d = decide_single(m3);
  ASSERT_TRUE(d);
  expect_sound(m3, *d);
}

TEST(CheckPartition, ReportsProblems) {
  const Instance inst{1.0, {{{0, 0}, {10, 0}}, {{0, 0}, {10, 0}}}};
  const RestaurantGraph g = build_restaurant_graph(inst);
  EXPECT_EQ(check_partition(g, {{{0, 0}, {1, 1}}}), "");
  EXPECT_NE(check_partition(g, {{{0, 1}, {1, 0}}}), "");
  EXPECT_NE(check_partition(g, {{{0, 0}, {1, 0}}}), "");
  EXPECT_NE(check_partition(g, {{{0, 0}}}), "");
}
