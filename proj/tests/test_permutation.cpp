#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "rsp/permutation.hpp"
#include "rsp/plan.hpp"
#include "support.hpp"

using namespace rsp;

TEST(PermutationSignature, Examples) {
  EXPECT_EQ(permutation_signature({{4, 4}}).pi, (std::vector<int>{1}));
  EXPECT_EQ(permutation_signature({{0, 0}, {1, 2}, {2, 1}}).pi, (std::vector<int>{1, 3, 2}));
  EXPECT_EQ(permutation_signature({{0, 0}, {1, 1}, {2, 2}}).pi, (std::vector<int>{1, 2, 3}));
}

TEST(PermutationSignature, TiesBreakByOtherCoordinateThenIndex) {
  // Same x: lower y goes first left to right. Same y: lower x first bottom to top.
  const PermutationSignature s = permutation_signature({{1, 5}, {1, 2}, {0, 2}});
  EXPECT_EQ(s.ltr_rank, (std::vector<int>{3, 2, 1}));
  EXPECT_EQ(s.pi, (std::vector<int>{1, 2, 3}));
  const PermutationSignature d = permutation_signature({{3, 3}, {3, 3}});
  EXPECT_EQ(d.ltr_rank, (std::vector<int>{1, 2}));
  EXPECT_EQ(d.pi, (std::vector<int>{1, 2}));
}

TEST(PermutationSignature, InvariantUnderTranslationAndScaling) {
  Rng rng(41);
  for (int t = 0; t < 500; ++t) {
    const Chain c = rsp_test::random_chain(rng, 1 + t % 6, 4.0, 0.5);
    const double s = rsp_test::grid(rng, 0.25, 8.0, 0.25);
    const double dx = rsp_test::grid(rng, -9, 9, 0.125);
    const double dy = rsp_test::grid(rng, -9, 9, 0.125);
    Chain moved;
    for (const Point& p : c) moved.push_back({p.x * s + dx, p.y * s + dy});
    const auto a = permutation_signature(c);
    const auto b = permutation_signature(moved);
    EXPECT_EQ(a.pi, b.pi);
    EXPECT_EQ(a.ltr_rank, b.ltr_rank);
  }
}

TEST(QuadrantCounts, Examples) {
  EXPECT_EQ(quadrant_counts({{2, 2}}, 0), (QuadrantCounts{0, 0, 0, 0}));
  EXPECT_EQ(quadrant_counts({{0, 0}, {1, 1}, {2, 2}}, 1), (QuadrantCounts{0, 1, 1, 0}));
  EXPECT_EQ(quadrant_counts({{0, 0}, {1, 2}, {2, 1}}, 1), (QuadrantCounts{0, 0, 1, 1}));
}

TEST(QuadrantCounts, SumToMMinusOne) {
  Rng rng(42);
  for (int t = 0; t < 300; ++t) {
    const Chain c = rsp_test::random_chain(rng, 1 + t % 7, 3.0, 0.5);
    for (std::size_t s = 0; s < c.size(); ++s) {
      const QuadrantCounts q = quadrant_counts(c, s);
      EXPECT_EQ(q.a + q.b + q.c + q.d, static_cast<int>(c.size()) - 1);
    }
  }
}

TEST(SameSignature, AnnotatedStoresAreCloseAndSeeEqualQuadrants) {
  Rng rng(43);
  int checked = 0;
  for (int t = 0; checked < 300; ++t) {
    const int m = 2 + t % 4;
    const Chain a = rsp_test::random_chain(rng, m, 4.0, 0.5);
    const Chain b = rsp_test::random_chain(rng, m, 4.0, 0.5);
    const auto sa = permutation_signature(a);
    const auto sb = permutation_signature(b);
    if (sa.pi != sb.pi || !pair_satisfiable(a, b, 1.0)) continue;
    ++checked;
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = 0; j < b.size(); ++j) {
        if (sa.ltr_rank[i] != sb.ltr_rank[j]) continue;
        EXPECT_LE(linf_dist(a[i], b[j]), 2.0);
        EXPECT_EQ(quadrant_counts(a, i), quadrant_counts(b, j));
      }
    }
  }
}

TEST(ClusterByPermutation, IdenticalChainsNeedOneSupermarketChain) {
  const Chain c{{0, 0}, {3, 1}, {1, 4}};
  const Instance inst{1.0, {c, c, c, c}};
  const SupermarketPlan plan = cluster_by_permutation(inst);
  EXPECT_EQ(plan.k(), 1u);
  EXPECT_TRUE(verify_plan(inst, plan).ok);
}

TEST(ClusterByPermutation, SingleStoreChainsNeedOne) {
  const Instance inst{1.0, {{{0, 0}}, {{1.5, 2}}, {{-0.5, 1}}, {{1, 0.5}}}};
  ASSERT_TRUE(validate_pairwise(inst).ok);
  const SupermarketPlan plan = cluster_by_permutation(inst);
  EXPECT_EQ(plan.k(), 1u);
  EXPECT_TRUE(verify_plan(inst, plan).ok);
}

TEST(ClusterByPermutation, RequiresPairwiseSatisfiability) {
  EXPECT_THROW(cluster_by_permutation({1.0, {{{0, 0}}, {{9, 9}}}}), PreconditionViolation);
}

TEST(ClusterByPermutation, RandomInstancesStayWithinFactorialBound) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    RandomInstanceConfig cfg;
    cfg.n = 50;
    cfg.m = 3;
    cfg.seed = seed;
    const Instance inst = gen_random_instance(cfg);
    ASSERT_TRUE(validate_pairwise(inst).ok);
    const SupermarketPlan plan = cluster_by_permutation(inst);
    EXPECT_LE(plan.k(), 6u);
    std::set<std::vector<int>> distinct;
    for (const Chain& c : inst.chains) distinct.insert(permutation_signature(c).pi);
    EXPECT_EQ(plan.k(), distinct.size());
    const PlanCheck c = verify_plan(inst, plan);
    EXPECT_TRUE(c.ok) << c.message;
  }
}

TEST(VerifyPlan, DisplacedSupermarketIsReported) {
  const Chain c{{0, 0}, {5, 5}};
  const Instance inst{1.0, {c, c}};
  SupermarketPlan plan = cluster_by_permutation(inst);
  ASSERT_TRUE(verify_plan(inst, plan).ok);
  plan.supermarkets[0][1].x += 3.0;
  const PlanCheck bad = verify_plan(inst, plan);
  EXPECT_FALSE(bad.ok);
  EXPECT_EQ(bad.chain, 0);
  EXPECT_EQ(bad.store, 1);
}

TEST(VerifyPlan, NonBijectiveMatchingThrows) {
  const Chain c{{0, 0}, {5, 5}};
  const Instance inst{1.0, {c}};
  SupermarketPlan plan = cluster_by_permutation(inst);
  plan.matchings[0] = {0, 0};
  EXPECT_THROW(verify_plan(inst, plan), InvalidPlan);
}

TEST(GenRandomInstance, DeterministicDyadicAndPairwise) {
  RandomInstanceConfig cfg;
  cfg.n = 12;
  cfg.m = 4;
  cfg.seed = 99;
  const Instance a = gen_random_instance(cfg);
  EXPECT_EQ(a, gen_random_instance(cfg));
  cfg.seed = 100;
  EXPECT_NE(a, gen_random_instance(cfg));
  EXPECT_TRUE(validate_pairwise(a).ok);
  for (const Chain& c : a.chains) {
    for (const Point& p : c) {
      EXPECT_EQ(p.x / kDyadicUnit, std::floor(p.x / kDyadicUnit));
      EXPECT_EQ(p.y / kDyadicUnit, std::floor(p.y / kDyadicUnit));
    }
  }
}

TEST(GenRandomInstance, RejectsBadParameters) {
  RandomInstanceConfig cfg;
  cfg.rho = 0.0;
  EXPECT_THROW(gen_random_instance(cfg), InvalidParameter);
  cfg.rho = 0.5;
  cfg.m = 0;
  EXPECT_THROW(gen_random_instance(cfg), InvalidParameter);
}
