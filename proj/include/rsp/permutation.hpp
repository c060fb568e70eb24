#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "rsp/chain_graph.hpp"
#include "rsp/errors.hpp"
#include "rsp/geometry.hpp"
#include "rsp/instance.hpp"
#include "rsp/plan.hpp"
#include "rsp/random.hpp"

namespace rsp {

// pi[t] is the left-to-right rank (1-based) of the t-th store counted from
// the bottom. ltr_rank[s] is the left-to-right rank of store s.
struct PermutationSignature {
  std::vector<int> pi;
  std::vector<int> ltr_rank;
};

namespace detail {

inline bool before_ltr(const Chain& ch, std::size_t a, std::size_t b) {
  const Point& p = ch[a];
  const Point& q = ch[b];
  if (p.x != q.x) return p.x < q.x;
  if (p.y != q.y) return p.y < q.y;
  return a < b;
}

inline bool before_btt(const Chain& ch, std::size_t a, std::size_t b) {
  const Point& p = ch[a];
  const Point& q = ch[b];
  if (p.y != q.y) return p.y < q.y;
  if (p.x != q.x) return p.x < q.x;
  return a < b;
}

}  // namespace detail

inline PermutationSignature permutation_signature(const Chain& ch) {
  const std::size_t m = ch.size();
  std::vector<std::size_t> ltr(m);
  std::iota(ltr.begin(), ltr.end(), std::size_t{0});
  std::vector<std::size_t> btt = ltr;
  std::sort(ltr.begin(), ltr.end(),
            [&](std::size_t a, std::size_t b) { return detail::before_ltr(ch, a, b); });
  std::sort(btt.begin(), btt.end(),
            [&](std::size_t a, std::size_t b) { return detail::before_btt(ch, a, b); });
  PermutationSignature sig;
  sig.ltr_rank.assign(m, 0);
  for (std::size_t r = 0; r < m; ++r) sig.ltr_rank[ltr[r]] = static_cast<int>(r) + 1;
  sig.pi.reserve(m);
  for (std::size_t t = 0; t < m; ++t) sig.pi.push_back(sig.ltr_rank[btt[t]]);
  return sig;
}

// a: top-left, b: top-right, c: bottom-left, d: bottom-right.
struct QuadrantCounts {
  int a = 0;
  int b = 0;
  int c = 0;
  int d = 0;

  friend bool operator==(const QuadrantCounts&, const QuadrantCounts&) = default;
};

inline QuadrantCounts quadrant_counts(const Chain& ch, std::size_t store) {
  if (store >= ch.size()) throw InvalidParameter("store index out of range");
  QuadrantCounts q;
  for (std::size_t t = 0; t < ch.size(); ++t) {
    if (t == store) continue;
    const bool left = detail::before_ltr(ch, t, store);
    const bool below = detail::before_btt(ch, t, store);
    if (left && !below) ++q.a;
    if (!left && !below) ++q.b;
    if (left && below) ++q.c;
    if (!left && below) ++q.d;
  }
  return q;
}

// Groups chains by signature (in order of first appearance) and places one
// supermarket chain per group.
inline SupermarketPlan cluster_by_permutation(const Instance& inst) {
  validate_instance(inst);
  const PairwiseReport pw = validate_pairwise(inst);
  if (!pw.ok) {
    throw PreconditionViolation("chains " + std::to_string(pw.violations.front().first) + " and " +
                                std::to_string(pw.violations.front().second) +
                                " cannot share a supermarket chain");
  }
  const std::size_t n = inst.n();
  const std::size_t m = inst.m();
  std::map<std::vector<int>, int> group_of;
  std::vector<PermutationSignature> sigs;
  sigs.reserve(n);
  SupermarketPlan plan;
  plan.delta = inst.delta;
  plan.assignment.resize(n);
  plan.matchings.resize(n);
  std::vector<std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < n; ++i) {
    sigs.push_back(permutation_signature(inst.chains[i]));
    auto [it, inserted] = group_of.try_emplace(sigs.back().pi, static_cast<int>(members.size()));
    if (inserted) members.emplace_back();
    members[static_cast<std::size_t>(it->second)].push_back(i);
    plan.assignment[i] = it->second;
    plan.matchings[i].resize(m);
    for (std::size_t s = 0; s < m; ++s) plan.matchings[i][s] = sigs.back().ltr_rank[s] - 1;
  }
  plan.supermarkets.assign(members.size(), Chain(m));
  std::vector<AxisBox> boxes;
  for (std::size_t g = 0; g < members.size(); ++g) {
    for (std::size_t j = 0; j < m; ++j) {
      boxes.clear();
      for (std::size_t i : members[g]) {
        for (std::size_t s = 0; s < m; ++s) {
          if (sigs[i].ltr_rank[s] == static_cast<int>(j) + 1) {
            boxes.push_back(ball(inst.chains[i][s], inst.delta));
          }
        }
      }
      const auto box = common_intersection(boxes);
      if (!box) {
        throw InternalError("stores with annotation " + std::to_string(j + 1) + " in group " +
                            std::to_string(g) + " have no common point");
      }
      plan.supermarkets[g][j] = representative_point(*box);
    }
  }
  return plan;
}

struct RandomInstanceConfig {
  int n = 10;
  int m = 3;
  double delta = 1.0;
  double rho = 0.9;
  std::uint64_t seed = 1;
};

// Coordinates are integer multiples of kDyadicUnit.
inline constexpr double kDyadicUnit = 1.0 / 1024.0;

// Pairwise-satisfiable instances from a perturbed template.
//
// Draw order from the seeded stream: the template's m points (x then y, each
// uniform on the grid over [0, 4*m*delta]), then for every chain and store the
// x and y offsets, each uniform on the grid over [-rho*delta, rho*delta].
inline Instance gen_random_instance(const RandomInstanceConfig& cfg) {
  if (cfg.n < 1 || cfg.m < 1) throw InvalidParameter("n and m must be at least 1");
  if (!(cfg.delta > 0.0) || !std::isfinite(cfg.delta)) throw InvalidParameter("delta must be positive");
  if (!(cfg.rho > 0.0) || cfg.rho > 1.0) throw InvalidParameter("rho must lie in (0, 1]");
  Rng rng(cfg.seed);
  const auto span = static_cast<std::int64_t>(std::floor(4.0 * cfg.m * cfg.delta / kDyadicUnit));
  const auto jitter = static_cast<std::int64_t>(std::floor(cfg.rho * cfg.delta / kDyadicUnit));
  Chain tmpl;
  tmpl.reserve(static_cast<std::size_t>(cfg.m));
  for (int j = 0; j < cfg.m; ++j) {
    const double x = static_cast<double>(rng.between(0, span)) * kDyadicUnit;
    const double y = static_cast<double>(rng.between(0, span)) * kDyadicUnit;
    tmpl.push_back({x, y});
  }
  Instance inst;
  inst.delta = cfg.delta;
  inst.chains.assign(static_cast<std::size_t>(cfg.n), Chain(static_cast<std::size_t>(cfg.m)));
  for (auto& ch : inst.chains) {
    for (int j = 0; j < cfg.m; ++j) {
      const double dx = static_cast<double>(rng.between(-jitter, jitter)) * kDyadicUnit;
      const double dy = static_cast<double>(rng.between(-jitter, jitter)) * kDyadicUnit;
      ch[static_cast<std::size_t>(j)] = {tmpl[static_cast<std::size_t>(j)].x + dx,
                                         tmpl[static_cast<std::size_t>(j)].y + dy};
    }
  }
  return inst;
}

}  // namespace rsp
