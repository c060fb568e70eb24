#pragma once

#include <cstddef>
#include <limits>
#include <queue>
#include <vector>

namespace rsp {

struct BipartiteMatching {
  int size = 0;
  std::vector<int> match_left;   // left vertex -> right vertex or -1
  std::vector<int> match_right;  // right vertex -> left vertex or -1

  bool perfect() const {
    return size == static_cast<int>(match_left.size()) &&
           size == static_cast<int>(match_right.size());
  }
};

// Hopcroft-Karp maximum bipartite matching. Adjacency lists are scanned in the
// given order, so the result is deterministic for a fixed input.
class HopcroftKarp {
 public:
  HopcroftKarp(const std::vector<std::vector<int>>& adj, int right_count)
      : adj_(adj),
        match_left_(adj.size(), -1),
        match_right_(static_cast<std::size_t>(right_count), -1),
        dist_(adj.size()),
        it_(adj.size()) {}

  BipartiteMatching run() {
    int size = 0;
    while (bfs()) {
      for (std::size_t u = 0; u < adj_.size(); ++u) it_[u] = 0;
      for (std::size_t u = 0; u < adj_.size(); ++u) {
        if (match_left_[u] == -1 && dfs(static_cast<int>(u))) ++size;
      }
    }
    return {size, match_left_, match_right_};
  }

 private:
  static constexpr int kInf = std::numeric_limits<int>::max();

  bool bfs() {
    std::queue<int> q;
    bool found = false;
    for (std::size_t u = 0; u < adj_.size(); ++u) {
      if (match_left_[u] == -1) {
        dist_[u] = 0;
        q.push(static_cast<int>(u));
      } else {
        dist_[u] = kInf;
      }
    }
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int v : adj_[static_cast<std::size_t>(u)]) {
        const int w = match_right_[static_cast<std::size_t>(v)];
        if (w == -1) {
          found = true;
        } else if (dist_[static_cast<std::size_t>(w)] == kInf) {
          dist_[static_cast<std::size_t>(w)] = dist_[static_cast<std::size_t>(u)] + 1;
          q.push(w);
        }
      }
    }
    return found;
  }

  bool dfs(int u) {
    const auto su = static_cast<std::size_t>(u);
    const auto& nbrs = adj_[su];
    for (std::size_t& i = it_[su]; i < nbrs.size(); ++i) {
      const int v = nbrs[i];
      const int w = match_right_[static_cast<std::size_t>(v)];
      if (w == -1 || (dist_[static_cast<std::size_t>(w)] == dist_[su] + 1 && dfs(w))) {
        match_left_[su] = v;
        match_right_[static_cast<std::size_t>(v)] = u;
        ++i;
        return true;
      }
    }
    dist_[su] = kInf;
    return false;
  }

  const std::vector<std::vector<int>>& adj_;
  std::vector<int> match_left_;
  std::vector<int> match_right_;
  std::vector<int> dist_;
  std::vector<std::size_t> it_;
};

inline BipartiteMatching max_bipartite_matching(const std::vector<std::vector<int>>& adj,
                                                int right_count) {
  return HopcroftKarp(adj, right_count).run();
}

}  // namespace rsp
