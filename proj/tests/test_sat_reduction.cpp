#include <gtest/gtest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "rsp/chain_graph.hpp"
#include "rsp/io.hpp"
#include "rsp/sat_reduction.hpp"

using namespace rsp;

namespace {

const std::vector<std::string> kSmallCorpus = {
    "single_positive", "single_negative", "single_mixed_below", "figure",           "nested_above",
    "three_clauses",   "three_mixed",     "permuted_order",     "all_negative_nested", "shared_endpoint",
};

PlanarCnf load(const std::string& name) {
  const std::string base = std::string(RSP_TEST_DATA_DIR) + "/sat/" + name;
  return parse_planar_cnf(detail::read_text(base + ".cnf"), detail::read_text(base + ".layout.json"));
}

std::vector<bool> bits(int mask, int count) {
  std::vector<bool> a(static_cast<std::size_t>(count));
  for (int v = 0; v < count; ++v) a[static_cast<std::size_t>(v)] = (mask >> v) & 1;
  return a;
}

PlanarCnf single_clause(bool p1, bool p2, bool p3, Side side) {
  PlanarCnf cnf;
  cnf.variables = 3;
  cnf.order = {0, 1, 2};
  cnf.clauses = {{Literal{0, p1}, Literal{1, p2}, Literal{2, p3}}};
  cnf.sides = {side};
  return cnf;
}

}  // namespace

TEST(Dimacs, ParsesCommentsAndSplitClauses) {
  const DimacsCnf d = parse_dimacs("c hello\np cnf 3 2\n1 -2\n 3 0 -1 2 3 0\n");
  EXPECT_EQ(d.variables, 3);
  ASSERT_EQ(d.clauses.size(), 2u);
  EXPECT_EQ(d.clauses[0], (std::vector<int>{1, -2, 3}));
  EXPECT_EQ(d.clauses[1], (std::vector<int>{-1, 2, 3}));
}

TEST(Dimacs, Errors) {
  EXPECT_THROW(parse_dimacs("1 2 3 0\n"), ParseError);
  EXPECT_THROW(parse_dimacs("p cnf 3 1\n1 2 4 0\n"), ParseError);
  EXPECT_THROW(parse_dimacs("p cnf 3 2\n1 2 3 0\n"), ParseError);
  EXPECT_THROW(parse_dimacs("p cnf 3 1\n1 2 3\n"), ParseError);
  EXPECT_THROW(parse_dimacs("p cnf 3 1\n1 x 3 0\n"), ParseError);
}

TEST(Layout, RejectsMalformedFormulas) {
  const std::string order = R"({"variable_order": [1, 2, 3, 4], "clauses": [)";
  EXPECT_THROW(parse_planar_cnf("p cnf 4 1\n1 2 0\n", order + R"({"side": "above", "legs": [1, 2, 3]}]})"),
               InvalidFormula);
  EXPECT_THROW(parse_planar_cnf("p cnf 4 1\n1 -1 2 0\n", order + R"({"side": "above", "legs": [1, 1, 2]}]})"),
               InvalidFormula);
  EXPECT_THROW(parse_planar_cnf("p cnf 4 1\n1 2 3 0\n", order + R"({"side": "left", "legs": [1, 2, 3]}]})"),
               InvalidFormula);
  EXPECT_THROW(parse_planar_cnf("p cnf 4 1\n1 2 3 0\n", order + R"({"side": "above", "legs": [2, 1, 3]}]})"),
               InvalidFormula);
  EXPECT_THROW(parse_planar_cnf("p cnf 4 1\n1 2 3 0\n", order + R"({"side": "above", "legs": [1, 2, 4]}]})"),
               InvalidFormula);
}

TEST(Layout, RejectsCrossingLegs) {
  const std::string cnf = "p cnf 4 2\n1 2 3 0\n2 3 4 0\n";
  const std::string same = R"({"variable_order": [1, 2, 3, 4], "clauses": [{"side": "above", "legs": [1, 2, 3]},
                               {"side": "above", "legs": [2, 3, 4]}]})";
  EXPECT_THROW(parse_planar_cnf(cnf, same), InvalidFormula);
  const std::string split = R"({"variable_order": [1, 2, 3, 4], "clauses": [{"side": "above", "legs": [1, 2, 3]},
                                {"side": "below", "legs": [2, 3, 4]}]})";
  EXPECT_NO_THROW(parse_planar_cnf(cnf, split));
}

TEST(Compile, EverySignPatternOnBothSides) {
  for (int s = 0; s < 8; ++s) {
    for (Side side : {Side::Above, Side::Below}) {
      const PlanarCnf cnf = single_clause(s & 1, s & 2, s & 4, side);
      const GadgetInstance g = compile(cnf, 1.0);
      EXPECT_EQ(build_restaurant_graph(g.instance), g.intended_graph);
      for (int mask = 0; mask < 8; ++mask) {
        const auto a = bits(mask, 3);
        EXPECT_EQ(assignment_to_plan(g, a).has_value(), satisfies(cnf, a)) << "signs " << s << " mask " << mask;
      }
    }
  }
}

TEST(Compile, CorpusInvariants) {
  for (const std::string& name : kSmallCorpus) {
    SCOPED_TRACE(name);
    const PlanarCnf cnf = load(name);
    ASSERT_LE(cnf.variables, 4);
    ASSERT_LE(cnf.clauses.size(), 3u);
    const GadgetInstance g = compile(cnf, 1.0);
    const Instance& inst = g.instance;
    ASSERT_EQ(inst.n(), 3u);
    EXPECT_EQ(inst.chains[0].size(), inst.chains[1].size());
    EXPECT_EQ(inst.chains[1].size(), inst.chains[2].size());
    EXPECT_EQ(build_restaurant_graph(inst), g.intended_graph);
    EXPECT_TRUE(validate_pairwise(inst).ok);

    const bool sat = find_satisfying_assignment(cnf).has_value();
    const auto d = decide_single_backtracking(inst);
    ASSERT_EQ(d.has_value(), sat);
    if (d) EXPECT_TRUE(satisfies(cnf, plan_to_assignment(g, d->plan)));

    for (int mask = 0; mask < (1 << cnf.variables); ++mask) {
      const auto a = bits(mask, cnf.variables);
      const auto plan = assignment_to_plan(g, a);
      ASSERT_EQ(plan.has_value(), satisfies(cnf, a)) << "mask " << mask;
      if (!plan) continue;
      EXPECT_TRUE(verify_plan(inst, *plan).ok);
      EXPECT_EQ(plan_to_assignment(g, *plan), a);
    }
  }
}

TEST(Compile, TwoClauseFigureAllTrue) {
  const PlanarCnf cnf = load("figure");
  const GadgetInstance g = compile(cnf, 1.0);
  const auto plan = assignment_to_plan(g, {true, true, true, true});
  ASSERT_TRUE(plan);
  EXPECT_TRUE(verify_plan(g.instance, *plan).ok);
  EXPECT_EQ(plan_to_assignment(g, *plan), (std::vector<bool>{true, true, true, true}));
}

TEST(Compile, SingleClauseAllFalseHasNoPlan) {
  const GadgetInstance g = compile(load("single_positive"), 1.0);
  EXPECT_FALSE(assignment_to_plan(g, {false, false, false}));
  EXPECT_TRUE(assignment_to_plan(g, {false, true, false}));
}

TEST(Compile, EmptyFormulaAcceptsBothValues) {
  const GadgetInstance g = compile(load("empty"), 1.0);
  EXPECT_EQ(build_restaurant_graph(g.instance), g.intended_graph);
  EXPECT_TRUE(assignment_to_plan(g, {true}));
  EXPECT_TRUE(assignment_to_plan(g, {false}));
  EXPECT_TRUE(decide_single_backtracking(g.instance));
}

TEST(Compile, UnsatisfiableFormulaHasNoPlan) {
  const PlanarCnf cnf = load("unsat6");
  ASSERT_FALSE(find_satisfying_assignment(cnf));
  const GadgetInstance g = compile(cnf, 1.0);
  EXPECT_EQ(build_restaurant_graph(g.instance), g.intended_graph);
  EXPECT_TRUE(validate_pairwise(g.instance).ok);
  for (int mask = 0; mask < 64; ++mask) EXPECT_FALSE(assignment_to_plan(g, bits(mask, 6)));
  EXPECT_FALSE(decide_single_backtracking(g.instance));
}

TEST(Compile, DeltaScalesCoordinates) {
  const PlanarCnf cnf = load("single_negative");
  const GadgetInstance a = compile(cnf, 1.0);
  const GadgetInstance b = compile(cnf, 0.5);
  ASSERT_EQ(a.instance.m(), b.instance.m());
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t s = 0; s < a.instance.m(); ++s) {
      EXPECT_EQ(a.instance.chains[i][s].x * 0.5, b.instance.chains[i][s].x);
      EXPECT_EQ(a.instance.chains[i][s].y * 0.5, b.instance.chains[i][s].y);
    }
  }
  EXPECT_EQ(a.intended_graph, b.intended_graph);
  EXPECT_THROW(compile(cnf, 0.0), InvalidParameter);
}

TEST(Compile, Deterministic) {
  const PlanarCnf cnf = load("three_mixed");
  EXPECT_EQ(instance_to_string(compile(cnf, 1.0).instance), instance_to_string(compile(cnf, 1.0).instance));
}

TEST(Compile, TapsMarkDistinctBlues) {
  const GadgetInstance g = compile(load("three_clauses"), 1.0);
  ASSERT_EQ(g.tap_map.size(), 9u);
  std::vector<int> marked;
  for (const Tap& t : g.tap_map) {
    EXPECT_EQ(g.intended_graph.adjacent(t.a[0], t.a[1]), true);
    marked.insert(marked.end(), t.marked_blues.begin(), t.marked_blues.end());
  }
  std::sort(marked.begin(), marked.end());
  EXPECT_EQ(std::adjacent_find(marked.begin(), marked.end()), marked.end());
}

TEST(PlanToAssignment, TamperedPlanIsRejected) {
  const GadgetInstance g = compile(load("figure"), 1.0);
  auto plan = assignment_to_plan(g, {true, false, true, true});
  ASSERT_TRUE(plan);
  SupermarketPlan moved = *plan;
  moved.supermarkets[0][0].x += 5.0;
  EXPECT_THROW(plan_to_assignment(g, moved), InvalidPlan);
  SupermarketPlan broken = *plan;
  std::swap(broken.matchings[0][0], broken.matchings[0][1]);
  EXPECT_THROW(plan_to_assignment(g, broken), InvalidPlan);
}

TEST(AssignmentToPlan, WrongLengthIsAnError) {
  const GadgetInstance g = compile(load("single_positive"), 1.0);
  EXPECT_THROW(assignment_to_plan(g, {true}), InvalidParameter);
}
