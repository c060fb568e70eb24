#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rsp/errors.hpp"
#include "rsp/geometry.hpp"
#include "rsp/instance.hpp"

namespace rsp {

// k supermarket chains serving n restaurant chains. Restaurant chain i is
// served by supermarket chain assignment[i]; its store j uses supermarket
// matchings[i][j] of that chain.
struct SupermarketPlan {
  double delta = 1.0;
  std::vector<Chain> supermarkets;
  std::vector<int> assignment;
  std::vector<std::vector<int>> matchings;

  std::size_t k() const { return supermarkets.size(); }

  friend bool operator==(const SupermarketPlan&, const SupermarketPlan&) = default;
};

struct PlanCheck {
  bool ok = true;
  int chain = -1;
  int store = -1;
  double distance = 0.0;
  std::string message;
};

// Distance violations are reported in the result; structural problems
// (wrong sizes, unknown chains, non-bijective matchings) throw InvalidPlan.
inline PlanCheck verify_plan(const Instance& inst, const SupermarketPlan& plan) {
  const std::size_t n = inst.n();
  const std::size_t m = inst.m();
  if (!(plan.delta > 0.0)) throw InvalidPlan("delta must be positive");
  if (plan.assignment.size() != n) {
    throw InvalidPlan("plan assigns " + std::to_string(plan.assignment.size()) +
                      " chains, instance has " + std::to_string(n));
  }
  if (plan.matchings.size() != n) {
    throw InvalidPlan("plan has " + std::to_string(plan.matchings.size()) +
                      " matchings, instance has " + std::to_string(n) + " chains");
  }
  for (std::size_t s = 0; s < plan.supermarkets.size(); ++s) {
    if (plan.supermarkets[s].size() != m) {
      throw InvalidPlan("supermarket chain " + std::to_string(s) + " has " +
                        std::to_string(plan.supermarkets[s].size()) + " points, expected " +
                        std::to_string(m));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const int a = plan.assignment[i];
    if (a < 0 || static_cast<std::size_t>(a) >= plan.supermarkets.size()) {
      throw InvalidPlan("chain " + std::to_string(i) + " assigned to unknown supermarket chain " +
                        std::to_string(a));
    }
    const auto& mt = plan.matchings[i];
    if (mt.size() != m) {
      throw InvalidPlan("matching of chain " + std::to_string(i) + " has wrong length");
    }
    std::vector<char> used(m, 0);
    for (std::size_t j = 0; j < m; ++j) {
      const int t = mt[j];
      if (t < 0 || static_cast<std::size_t>(t) >= m || used[static_cast<std::size_t>(t)]) {
        throw InvalidPlan("matching of chain " + std::to_string(i) + " is not a bijection");
      }
      used[static_cast<std::size_t>(t)] = 1;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Chain& sm = plan.supermarkets[static_cast<std::size_t>(plan.assignment[i])];
    for (std::size_t j = 0; j < m; ++j) {
      const Point& s = sm[static_cast<std::size_t>(plan.matchings[i][j])];
      const double d = linf_dist(inst.chains[i][j], s);
      if (!is_finite(s) || !(d <= plan.delta)) {
        return {false, static_cast<int>(i), static_cast<int>(j), d,
                "chain " + std::to_string(i) + " store " + std::to_string(j) +
                    " is at distance " + std::to_string(d) + " from its supermarket"};
      }
    }
  }
  return {};
}

}  // namespace rsp
