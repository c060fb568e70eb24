#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "rsp/errors.hpp"
#include "rsp/geometry.hpp"

namespace rsp {

// A restaurant chain: m stores. Store order is a labeling only.
using Chain = std::vector<Point>;

struct Instance {
  double delta = 1.0;
  std::vector<Chain> chains;

  std::size_t n() const { return chains.size(); }
  std::size_t m() const { return chains.empty() ? 0 : chains.front().size(); }

  friend bool operator==(const Instance&, const Instance&) = default;
};

// Throws ValidationError naming the first offending chain/store.
inline void validate_instance(const Instance& inst) {
  if (!(inst.delta > 0.0) || !std::isfinite(inst.delta)) {
    throw ValidationError("delta must be positive and finite");
  }
  if (inst.chains.empty()) throw ValidationError("instance has no chains");
  const std::size_t m = inst.chains.front().size();
  if (m == 0) throw ValidationError("chain 0 has no stores");
  for (std::size_t i = 0; i < inst.chains.size(); ++i) {
    if (inst.chains[i].size() != m) {
      throw ValidationError("chain " + std::to_string(i) + " has " +
                            std::to_string(inst.chains[i].size()) + " stores, expected " +
                            std::to_string(m));
    }
    for (std::size_t j = 0; j < m; ++j) {
      if (!is_finite(inst.chains[i][j])) {
        throw ValidationError("chain " + std::to_string(i) + " store " + std::to_string(j) +
                              " has a non-finite coordinate");
      }
    }
  }
}

inline Instance sub_instance(const Instance& inst, const std::vector<int>& chain_ids) {
  Instance out;
  out.delta = inst.delta;
  out.chains.reserve(chain_ids.size());
  for (int id : chain_ids) out.chains.push_back(inst.chains.at(static_cast<std::size_t>(id)));
  return out;
}

}  // namespace rsp
