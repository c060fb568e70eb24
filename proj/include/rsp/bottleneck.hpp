#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "rsp/errors.hpp"
#include "rsp/geometry.hpp"
#include "rsp/instance.hpp"
#include "rsp/matching.hpp"

namespace rsp {

struct BottleneckResult {
  double value = 0.0;
  std::vector<int> matching;  // store j of a is matched to store matching[j] of b
};

// Supermarket chain that serves two restaurant chains at once: store j of a
// and store b_of_a[j] of b both use supermarket j.
struct PairWitness {
  Chain supermarkets;
  std::vector<int> b_of_a;
};

namespace detail {

inline void check_same_size(const Chain& a, const Chain& b) {
  if (a.size() != b.size()) {
    throw InvalidParameter("chain sizes differ: " + std::to_string(a.size()) + " vs " +
                           std::to_string(b.size()));
  }
  if (a.empty()) throw InvalidParameter("chains must have at least one store");
}

template <class Edge>
std::optional<std::vector<int>> perfect_matching_where(const Chain& a, const Chain& b,
                                                       Edge&& edge) {
  const std::size_t m = a.size();
  std::vector<std::vector<int>> adj(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (edge(a[i], b[j])) adj[i].push_back(static_cast<int>(j));
    }
  }
  BipartiteMatching mm = max_bipartite_matching(adj, static_cast<int>(m));
  if (!mm.perfect()) return std::nullopt;
  return std::move(mm.match_left);
}

// Perfect matching in the threshold graph {(i, j) : d(a_i, b_j) <= t}, if any.
inline std::optional<std::vector<int>> threshold_matching(const Chain& a, const Chain& b,
                                                          double t) {
  return perfect_matching_where(a, b,
                                [t](const Point& p, const Point& q) { return linf_dist(p, q) <= t; });
}

}  // namespace detail

inline BottleneckResult bottleneck_distance(const Chain& a, const Chain& b) {
  detail::check_same_size(a, b);
  const std::size_t m = a.size();
  std::vector<double> dists;
  dists.reserve(m * m);
  for (const Point& p : a) {
    for (const Point& q : b) dists.push_back(linf_dist(p, q));
  }
  std::sort(dists.begin(), dists.end());
  dists.erase(std::unique(dists.begin(), dists.end()), dists.end());

  // The largest distance always admits a perfect matching.
  std::size_t lo = 0;
  std::size_t hi = dists.size() - 1;
  std::optional<std::vector<int>> best = detail::threshold_matching(a, b, dists[hi]);
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (auto mm = detail::threshold_matching(a, b, dists[mid])) {
      hi = mid;
      best = std::move(mm);
    } else {
      lo = mid + 1;
    }
  }
  return {dists[hi], std::move(*best)};
}

// One feasibility test at threshold 2*delta instead of a full bottleneck
// computation. Edges use the ball intersection predicate, which agrees with
// d <= 2*delta on dyadic inputs and keeps the witness consistent otherwise.
inline std::optional<PairWitness> pair_satisfiable(const Chain& a, const Chain& b, double delta) {
  detail::check_same_size(a, b);
  if (!(delta > 0.0)) throw InvalidParameter("delta must be positive");
  auto mm = detail::perfect_matching_where(a, b, [delta](const Point& p, const Point& q) {
    return boxes_intersect(ball(p, delta), ball(q, delta));
  });
  if (!mm) return std::nullopt;
  PairWitness w;
  w.b_of_a = std::move(*mm);
  w.supermarkets.reserve(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    const auto box = intersect(ball(a[j], delta),
                               ball(b[static_cast<std::size_t>(w.b_of_a[j])], delta));
    if (!box) throw InternalError("matched balls do not intersect");
    w.supermarkets.push_back(representative_point(*box));
  }
  return w;
}

}  // namespace rsp
