#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rsp/bottleneck.hpp"
#include "rsp/errors.hpp"
#include "rsp/geometry.hpp"
#include "rsp/instance.hpp"
#include "rsp/matching.hpp"
#include "rsp/plan.hpp"

namespace rsp {

struct Vertex {
  int chain = 0;
  int store = 0;

  friend bool operator==(const Vertex&, const Vertex&) = default;
  friend auto operator<=>(const Vertex&, const Vertex&) = default;
};

// Intersection graph of the stores' delta-balls, restricted to stores of
// different chains. Vertex ids are chain * m + store.
struct RestaurantGraph {
  int n = 0;
  int m = 0;
  std::vector<std::vector<int>> adj;  // sorted neighbor ids

  int id(int chain, int store) const { return chain * m + store; }
  int id(const Vertex& v) const { return id(v.chain, v.store); }
  Vertex vertex(int vid) const { return {vid / m, vid % m}; }
  int color(int vid) const { return vid / m; }
  int vertex_count() const { return n * m; }

  bool adjacent(int u, int v) const {
    const auto& row = adj[static_cast<std::size_t>(u)];
    return std::binary_search(row.begin(), row.end(), v);
  }
  bool adjacent(const Vertex& u, const Vertex& v) const { return adjacent(id(u), id(v)); }

  std::size_t edge_count() const {
    std::size_t total = 0;
    for (const auto& row : adj) total += row.size();
    return total / 2;
  }

  friend bool operator==(const RestaurantGraph&, const RestaurantGraph&) = default;
};

inline RestaurantGraph build_restaurant_graph(const Instance& inst) {
  RestaurantGraph g;
  g.n = static_cast<int>(inst.n());
  g.m = static_cast<int>(inst.m());
  g.adj.assign(static_cast<std::size_t>(g.n * g.m), {});
  std::vector<AxisBox> balls;
  balls.reserve(static_cast<std::size_t>(g.n * g.m));
  for (const Chain& c : inst.chains) {
    for (const Point& p : c) balls.push_back(ball(p, inst.delta));
  }
  for (int u = 0; u < g.vertex_count(); ++u) {
    for (int v = u + 1; v < g.vertex_count(); ++v) {
      if (g.color(u) == g.color(v)) continue;
      if (boxes_intersect(balls[static_cast<std::size_t>(u)], balls[static_cast<std::size_t>(v)])) {
        g.adj[static_cast<std::size_t>(u)].push_back(v);
        g.adj[static_cast<std::size_t>(v)].push_back(u);
      }
    }
  }
  return g;
}

// cliques[j][i] is the store of chain i that belongs to clique j.
struct ColorfulPartition {
  std::vector<std::vector<int>> cliques;

  friend bool operator==(const ColorfulPartition&, const ColorfulPartition&) = default;
};

// Empty string when the partition is valid for the graph, else the reason.
inline std::string check_partition(const RestaurantGraph& g, const ColorfulPartition& p) {
  if (static_cast<int>(p.cliques.size()) != g.m) return "wrong number of cliques";
  std::vector<std::vector<char>> used(static_cast<std::size_t>(g.n),
                                      std::vector<char>(static_cast<std::size_t>(g.m), 0));
  for (std::size_t j = 0; j < p.cliques.size(); ++j) {
    const auto& c = p.cliques[j];
    if (static_cast<int>(c.size()) != g.n) return "clique " + std::to_string(j) + " is not colorful";
    for (int i = 0; i < g.n; ++i) {
      const int s = c[static_cast<std::size_t>(i)];
      if (s < 0 || s >= g.m) return "clique " + std::to_string(j) + " names an unknown store";
      auto& flag = used[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)];
      if (flag) return "store used twice in chain " + std::to_string(i);
      flag = 1;
    }
    for (int a = 0; a < g.n; ++a) {
      for (int b = a + 1; b < g.n; ++b) {
        if (!g.adjacent(g.id(a, c[static_cast<std::size_t>(a)]), g.id(b, c[static_cast<std::size_t>(b)]))) {
          return "clique " + std::to_string(j) + " misses edge between chains " +
                 std::to_string(a) + " and " + std::to_string(b);
        }
      }
    }
  }
  return {};
}

// One supermarket chain whose supermarket j sits at the center of the common
// intersection of clique j's balls.
inline SupermarketPlan partition_to_plan(const Instance& inst, const ColorfulPartition& p) {
  const std::size_t n = inst.n();
  const std::size_t m = inst.m();
  SupermarketPlan plan;
  plan.delta = inst.delta;
  plan.supermarkets.assign(1, Chain(m));
  plan.assignment.assign(n, 0);
  plan.matchings.assign(n, std::vector<int>(m, -1));
  std::vector<AxisBox> boxes(n);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto s = static_cast<std::size_t>(p.cliques[j][i]);
      boxes[i] = ball(inst.chains[i][s], inst.delta);
      plan.matchings[i][s] = static_cast<int>(j);
    }
    const auto box = common_intersection(boxes);
    if (!box) throw InternalError("clique " + std::to_string(j) + " has empty intersection");
    plan.supermarkets[0][j] = representative_point(*box);
  }
  return plan;
}

struct SingleDecision {
  ColorfulPartition partition;
  SupermarketPlan plan;
};

struct PairwiseReport {
  bool ok = true;
  std::vector<std::pair<int, int>> violations;
};

inline PairwiseReport validate_pairwise(const Instance& inst) {
  PairwiseReport r;
  for (std::size_t a = 0; a < inst.n(); ++a) {
    for (std::size_t b = a + 1; b < inst.n(); ++b) {
      if (!pair_satisfiable(inst.chains[a], inst.chains[b], inst.delta)) {
        r.ok = false;
        r.violations.emplace_back(static_cast<int>(a), static_cast<int>(b));
      }
    }
  }
  return r;
}

namespace detail {

// Depth-first search over the stores of one chain at a time. A perfect
// matching between the unplaced stores of the current chain and the free
// cliques is kept at all times; choosing a store's clique repairs it with one
// alternating path, so every explored prefix extends to a full assignment of
// the chain.
class Backtracker {
 public:
  explicit Backtracker(const Instance& inst)
      : inst_(inst), n_(static_cast<int>(inst.n())), m_(static_cast<int>(inst.m())) {
    boxes_.reserve(static_cast<std::size_t>(m_));
    for (const Point& p : inst.chains[0]) boxes_.push_back(ball(p, inst.delta));
    balls_.resize(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) {
      for (const Point& p : inst.chains[static_cast<std::size_t>(i)]) {
        balls_[static_cast<std::size_t>(i)].push_back(ball(p, inst.delta));
      }
    }
    assign_.assign(static_cast<std::size_t>(n_), std::vector<int>(static_cast<std::size_t>(m_), -1));
    for (int j = 0; j < m_; ++j) assign_[0][static_cast<std::size_t>(j)] = j;
  }

  std::optional<ColorfulPartition> run() {
    if (n_ > 1) {
      for (int i = 1; i < n_; ++i) {
        if (!chain_matching(i)) return std::nullopt;
      }
      if (!solve_chain(1)) return std::nullopt;
    }
    ColorfulPartition p;
    p.cliques.assign(static_cast<std::size_t>(m_), std::vector<int>(static_cast<std::size_t>(n_), -1));
    for (int i = 0; i < n_; ++i) {
      for (int s = 0; s < m_; ++s) {
        p.cliques[static_cast<std::size_t>(assign_[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)])]
                 [static_cast<std::size_t>(i)] = s;
      }
    }
    return p;
  }

  std::size_t nodes() const { return nodes_; }

 private:
  bool compatible(int chain, int store, int clique) const {
    return boxes_intersect(balls_[static_cast<std::size_t>(chain)][static_cast<std::size_t>(store)],
                           boxes_[static_cast<std::size_t>(clique)]);
  }

  std::optional<BipartiteMatching> chain_matching(int chain) const {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(m_));
    for (int s = 0; s < m_; ++s) {
      for (int j = 0; j < m_; ++j) {
        if (compatible(chain, s, j)) adj[static_cast<std::size_t>(s)].push_back(j);
      }
    }
    BipartiteMatching mm = max_bipartite_matching(adj, m_);
    if (!mm.perfect()) return std::nullopt;
    return mm;
  }

  // Place chain `chain` and everything after it.
  bool solve_chain(int chain) {
    auto mm = chain_matching(chain);
    if (!mm) return false;
    if (chain == n_ - 1) {
      assign_[static_cast<std::size_t>(chain)] = mm->match_left;
      return true;
    }
    store_of_clique_ = mm->match_right;
    clique_of_store_ = mm->match_left;
    return place_store(chain, 0);
  }

  bool place_store(int chain, int store) {
    ++nodes_;
    if (store == m_) return finish_chain(chain);
    const auto ss = static_cast<std::size_t>(store);
    const int preferred = clique_of_store_[ss];
    // The preferred clique keeps the current matching valid as is.
    assign_[static_cast<std::size_t>(chain)][ss] = preferred;
    if (place_store(chain, store + 1)) return true;
    for (int j = 0; j < m_; ++j) {
      if (j == preferred || !compatible(chain, store, j)) continue;
      const int holder = store_of_clique_[static_cast<std::size_t>(j)];
      if (holder < store) continue;  // clique already taken by a placed store
      const auto saved_store = store_of_clique_;
      const auto saved_clique = clique_of_store_;
      // Give j to `store`; the previous holder must reach `preferred`.
      store_of_clique_[static_cast<std::size_t>(j)] = store;
      clique_of_store_[ss] = j;
      store_of_clique_[static_cast<std::size_t>(preferred)] = -1;
      clique_of_store_[static_cast<std::size_t>(holder)] = -1;
      seen_.assign(static_cast<std::size_t>(m_), 0);
      if (augment(chain, holder, store)) {
        assign_[static_cast<std::size_t>(chain)][ss] = j;
        if (place_store(chain, store + 1)) return true;
      }
      store_of_clique_ = saved_store;
      clique_of_store_ = saved_clique;
    }
    assign_[static_cast<std::size_t>(chain)][ss] = -1;
    return false;
  }

  // Alternating path from unmatched store u over stores with index > fixed.
  bool augment(int chain, int u, int fixed) {
    for (int j = 0; j < m_; ++j) {
      if (seen_[static_cast<std::size_t>(j)] || !compatible(chain, u, j)) continue;
      seen_[static_cast<std::size_t>(j)] = 1;
      const int w = store_of_clique_[static_cast<std::size_t>(j)];
      if (w != -1 && w <= fixed) continue;
      if (w == -1 || augment(chain, w, fixed)) {
        store_of_clique_[static_cast<std::size_t>(j)] = u;
        clique_of_store_[static_cast<std::size_t>(u)] = j;
        return true;
      }
    }
    return false;
  }

  bool finish_chain(int chain) {
    const auto saved_boxes = boxes_;
    const auto saved_store = store_of_clique_;
    const auto saved_clique = clique_of_store_;
    for (int s = 0; s < m_; ++s) {
      const auto j = static_cast<std::size_t>(assign_[static_cast<std::size_t>(chain)][static_cast<std::size_t>(s)]);
      const auto box = intersect(boxes_[j], balls_[static_cast<std::size_t>(chain)][static_cast<std::size_t>(s)]);
      if (!box) throw InternalError("incompatible store accepted during backtracking");
      boxes_[j] = *box;
    }
    bool ok = true;
    for (int i = chain + 1; i < n_ && ok; ++i) ok = chain_matching(i).has_value();
    if (ok && solve_chain(chain + 1)) return true;
    boxes_ = saved_boxes;
    store_of_clique_ = saved_store;
    clique_of_store_ = saved_clique;
    return false;
  }

  const Instance& inst_;
  int n_;
  int m_;
  std::vector<AxisBox> boxes_;
  std::vector<std::vector<AxisBox>> balls_;
  std::vector<std::vector<int>> assign_;
  std::vector<int> store_of_clique_;
  std::vector<int> clique_of_store_;
  std::vector<char> seen_;
  std::size_t nodes_ = 0;
};

}  // namespace detail

inline std::optional<SingleDecision> decide_single_backtracking(const Instance& inst) {
  validate_instance(inst);
  auto partition = detail::Backtracker(inst).run();
  if (!partition) return std::nullopt;
  SingleDecision d{std::move(*partition), {}};
  d.plan = partition_to_plan(inst, d.partition);
  return d;
}

namespace detail {

// A 2-store chain after contractions: side[t] lists the original vertices
// merged into super vertex t, box[t] is the common intersection of their balls.
struct PairState {
  std::vector<Vertex> side[2];
  AxisBox box[2];
};

enum class PairKind { Incompatible, Forced, Free };

}  // namespace detail

// Single-chain decision for m = 2 by contracting forced pairs.
inline std::optional<SingleDecision> decide_single_m2(const Instance& inst) {
  validate_instance(inst);
  if (inst.m() != 2) throw InvalidParameter("decide_single_m2 requires m = 2, got m = " +
                                            std::to_string(inst.m()));
  const int n = static_cast<int>(inst.n());
  const double delta = inst.delta;

  std::vector<detail::PairState> pairs;
  pairs.reserve(static_cast<std::size_t>(2 * n));
  for (int i = 0; i < n; ++i) {
    detail::PairState p;
    for (int t = 0; t < 2; ++t) {
      p.side[t].push_back({i, t});
      p.box[t] = ball(inst.chains[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)], delta);
    }
    pairs.push_back(std::move(p));
  }

  // Adjacency between super vertices 2*p + t, following the contraction
  // rule rather than geometry.
  const int cap = 2 * (2 * n);
  std::vector<std::vector<char>> adj(static_cast<std::size_t>(cap),
                                     std::vector<char>(static_cast<std::size_t>(cap), 0));
  for (int u = 0; u < 2 * n; ++u) {
    for (int v = 0; v < 2 * n; ++v) {
      if (u / 2 == v / 2) continue;
      adj[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] =
          boxes_intersect(pairs[static_cast<std::size_t>(u / 2)].box[u % 2],
                          pairs[static_cast<std::size_t>(v / 2)].box[v % 2]);
    }
  }
  auto edge = [&](int p, int s, int q, int t) {
    return adj[static_cast<std::size_t>(2 * p + s)][static_cast<std::size_t>(2 * q + t)] != 0;
  };
  // Perfect matchings of the K_{2,2} between pairs p and q: straight (s) pairs
  // side t of p with side t of q, crossed (c) pairs side t with side 1 - t.
  auto classify = [&](int p, int q, bool& straight) {
    const bool s = edge(p, 0, q, 0) && edge(p, 1, q, 1);
    const bool c = edge(p, 0, q, 1) && edge(p, 1, q, 0);
    straight = s;
    if (s && c) return detail::PairKind::Free;
    if (s || c) return detail::PairKind::Forced;
    return detail::PairKind::Incompatible;
  };

  std::vector<int> active(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) active[static_cast<std::size_t>(i)] = i;

  for (std::size_t a = 0; a < active.size(); ++a) {
    for (std::size_t b = a + 1; b < active.size(); ++b) {
      bool straight = false;
      if (classify(active[a], active[b], straight) == detail::PairKind::Incompatible) {
        throw PreconditionViolation("chains " + std::to_string(active[a]) + " and " +
                                    std::to_string(active[b]) + " are incompatible");
      }
    }
  }

  for (;;) {
    int fa = -1;
    int fb = -1;
    bool straight = false;
    for (std::size_t a = 0; a < active.size() && fa < 0; ++a) {
      for (std::size_t b = a + 1; b < active.size(); ++b) {
        bool s = false;
        const auto kind = classify(active[a], active[b], s);
        if (kind == detail::PairKind::Incompatible) return std::nullopt;
        if (kind == detail::PairKind::Forced) {
          fa = static_cast<int>(a);
          fb = static_cast<int>(b);
          straight = s;
          break;
        }
      }
    }
    if (fa < 0) break;

    const int p = active[static_cast<std::size_t>(fa)];
    const int q = active[static_cast<std::size_t>(fb)];
    const int c = static_cast<int>(pairs.size());
    detail::PairState merged;
    for (int t = 0; t < 2; ++t) {
      const int qt = straight ? t : 1 - t;
      const auto& ps = pairs[static_cast<std::size_t>(p)];
      const auto& qs = pairs[static_cast<std::size_t>(q)];
      merged.side[t] = ps.side[t];
      merged.side[t].insert(merged.side[t].end(), qs.side[qt].begin(), qs.side[qt].end());
      const auto box = intersect(ps.box[t], qs.box[qt]);
      if (!box) throw InternalError("contracted vertices do not intersect");
      merged.box[t] = *box;
    }
    pairs.push_back(std::move(merged));
    active.erase(active.begin() + fb);
    active.erase(active.begin() + fa);
    for (int v : active) {
      for (int s = 0; s < 2; ++s) {
        for (int t = 0; t < 2; ++t) {
          const int qt = straight ? t : 1 - t;
          const bool link = edge(v, s, p, t) && edge(v, s, q, qt);
          if (link != boxes_intersect(pairs[static_cast<std::size_t>(v)].box[s],
                                      pairs[static_cast<std::size_t>(c)].box[t])) {
            throw InternalError("contracted adjacency disagrees with box intersection");
          }
          adj[static_cast<std::size_t>(2 * v + s)][static_cast<std::size_t>(2 * c + t)] = link;
          adj[static_cast<std::size_t>(2 * c + t)][static_cast<std::size_t>(2 * v + s)] = link;
        }
      }
    }
    active.push_back(c);
  }

  // Every remaining pair of pairs induces a full K_{2,2}, so side 0 of all
  // pairs forms one clique and side 1 the other.
  ColorfulPartition part;
  part.cliques.assign(2, std::vector<int>(static_cast<std::size_t>(n), -1));
  for (int p : active) {
    for (int t = 0; t < 2; ++t) {
      for (const Vertex& v : pairs[static_cast<std::size_t>(p)].side[t]) {
        part.cliques[static_cast<std::size_t>(t)][static_cast<std::size_t>(v.chain)] = v.store;
      }
    }
  }
  SingleDecision d{std::move(part), {}};
  d.plan = partition_to_plan(inst, d.partition);
  return d;
}

enum class SingleAlgorithm { Auto, Contraction, Backtracking };

inline std::optional<SingleDecision> decide_single(const Instance& inst,
                                                   SingleAlgorithm algo = SingleAlgorithm::Auto) {
  switch (algo) {
    case SingleAlgorithm::Contraction:
      return decide_single_m2(inst);
    case SingleAlgorithm::Backtracking:
      return decide_single_backtracking(inst);
    case SingleAlgorithm::Auto:
      break;
  }
  if (inst.m() == 2 && validate_pairwise(inst).ok) return decide_single_m2(inst);
  return decide_single_backtracking(inst);
}

}  // namespace rsp
