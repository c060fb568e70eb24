#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "rsp/bottleneck.hpp"
#include "rsp/chain_graph.hpp"
#include "rsp/errors.hpp"
#include "rsp/geometry.hpp"
#include "rsp/instance.hpp"

namespace rsp {

inline constexpr int kBruteBottleneckMaxM = 8;
inline constexpr std::uint64_t kBruteSingleNodeBudget = 10'000'000;
inline constexpr int kMinChainsMaxN = 12;

// Minimum over all m! matchings; the lexicographically first optimum wins.
inline BottleneckResult brute_force_bottleneck(const Chain& a, const Chain& b) {
  if (a.size() != b.size()) throw InvalidParameter("chain sizes differ");
  if (a.empty()) throw InvalidParameter("chains must have at least one store");
  if (a.size() > static_cast<std::size_t>(kBruteBottleneckMaxM)) {
    throw GuardExceeded("brute_force_bottleneck allows m <= " + std::to_string(kBruteBottleneckMaxM));
  }
  std::vector<int> perm(a.size());
  std::iota(perm.begin(), perm.end(), 0);
  BottleneckResult best{-1.0, {}};
  do {
    double worst = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      worst = std::max(worst, linf_dist(a[j], b[static_cast<std::size_t>(perm[j])]));
    }
    if (best.value < 0.0 || worst < best.value) best = {worst, perm};
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

namespace detail {

// Enumerates bijections chain by chain, store by store. A store may join a
// clique only if its ball meets the ball of every store already there.
class BruteSingle {
 public:
  BruteSingle(const Instance& inst, std::uint64_t budget)
      : inst_(inst),
        n_(static_cast<int>(inst.n())),
        m_(static_cast<int>(inst.m())),
        budget_(budget),
        members_(static_cast<std::size_t>(m_)),
        taken_(static_cast<std::size_t>(m_), 0) {
    for (int j = 0; j < m_; ++j) members_[static_cast<std::size_t>(j)].push_back(j);
  }

  std::optional<ColorfulPartition> run() {
    if (!search(1, 0)) return std::nullopt;
    ColorfulPartition p;
    p.cliques = members_;
    return p;
  }

 private:
  bool fits(int chain, int store, int clique) const {
    const AxisBox b = ball(inst_.chains[static_cast<std::size_t>(chain)][static_cast<std::size_t>(store)],
                           inst_.delta);
    const auto& mem = members_[static_cast<std::size_t>(clique)];
    for (std::size_t i = 0; i < mem.size(); ++i) {
      const Point& q = inst_.chains[i][static_cast<std::size_t>(mem[i])];
      if (!boxes_intersect(b, ball(q, inst_.delta))) return false;
    }
    return true;
  }

  bool search(int chain, int store) {
    if (chain == n_) return true;
    if (store == m_) {
      std::fill(taken_.begin(), taken_.end(), 0);
      if (search(chain + 1, 0)) return true;
      // Back in this chain, where every clique already holds one of its stores.
      std::fill(taken_.begin(), taken_.end(), 1);
      return false;
    }
    if (++nodes_ > budget_) {
      throw GuardExceeded("brute_force_single exceeded its budget of " + std::to_string(budget_) +
                          " search nodes");
    }
    for (int j = 0; j < m_; ++j) {
      if (taken_[static_cast<std::size_t>(j)] || !fits(chain, store, j)) continue;
      taken_[static_cast<std::size_t>(j)] = 1;
      members_[static_cast<std::size_t>(j)].push_back(store);
      if (search(chain, store + 1)) return true;
      members_[static_cast<std::size_t>(j)].pop_back();
      taken_[static_cast<std::size_t>(j)] = 0;
    }
    return false;
  }

  const Instance& inst_;
  int n_;
  int m_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::vector<std::vector<int>> members_;  // members_[j][i]: store of chain i in clique j
  std::vector<char> taken_;
};

}  // namespace detail

inline std::optional<ColorfulPartition> brute_force_single(
    const Instance& inst, std::uint64_t node_budget = kBruteSingleNodeBudget) {
  validate_instance(inst);
  return detail::BruteSingle(inst, node_budget).run();
}

struct MinChainsResult {
  int k = 0;
  std::vector<std::vector<int>> groups;
};

// Feasibility of every chain subset (memoized by bitmask, skipping supersets
// of infeasible subsets), then a minimum set-partition DP over submasks.
inline MinChainsResult brute_force_min_chains(const Instance& inst,
                                              std::uint64_t node_budget = kBruteSingleNodeBudget) {
  validate_instance(inst);
  const int n = static_cast<int>(inst.n());
  if (n > kMinChainsMaxN) {
    throw GuardExceeded("brute_force_min_chains allows n <= " + std::to_string(kMinChainsMaxN));
  }
  const std::uint32_t full = (1u << n) - 1u;
  std::vector<char> feasible(full + 1u, 0);
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    if (std::popcount(mask) == 1) {
      feasible[mask] = 1;
      continue;
    }
    bool all_subsets = true;
    for (int i = 0; i < n && all_subsets; ++i) {
      if (mask & (1u << i)) all_subsets = feasible[mask & ~(1u << i)] != 0;
    }
    if (!all_subsets) continue;
    std::vector<int> ids;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) ids.push_back(i);
    }
    feasible[mask] = brute_force_single(sub_instance(inst, ids), node_budget).has_value();
  }

  constexpr int kUnset = 1 << 20;
  std::vector<int> best(full + 1u, kUnset);
  std::vector<std::uint32_t> pick(full + 1u, 0);
  best[0] = 0;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    const std::uint32_t low = mask & (~mask + 1u);
    for (std::uint32_t sub = mask; sub; sub = (sub - 1u) & mask) {
      if (!(sub & low) || !feasible[sub]) continue;
      if (best[mask ^ sub] + 1 < best[mask]) {
        best[mask] = best[mask ^ sub] + 1;
        pick[mask] = sub;
      }
    }
  }
  MinChainsResult r;
  r.k = best[full];
  for (std::uint32_t mask = full; mask; mask ^= pick[mask]) {
    std::vector<int> g;
    for (int i = 0; i < n; ++i) {
      if (pick[mask] & (1u << i)) g.push_back(i);
    }
    r.groups.push_back(std::move(g));
  }
  return r;
}

}  // namespace rsp
