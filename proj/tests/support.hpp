#pragma once

// Random generators shared by the unit tests and the acceptance runner. All
// coordinates are dyadic so every predicate is evaluated exactly.

#include <cstdint>
#include <string>
#include <vector>

#include "rsp/chain_graph.hpp"
#include "rsp/geometry.hpp"
#include "rsp/instance.hpp"
#include "rsp/lowerbound.hpp"
#include "rsp/permutation.hpp"
#include "rsp/random.hpp"

namespace rsp_test {

using rsp::AxisBox;
using rsp::Chain;
using rsp::Instance;
using rsp::Point;
using rsp::Rng;

// Uniform multiple of `unit` in [lo, hi].
inline double grid(Rng& rng, double lo, double hi, double unit) {
  const auto a = static_cast<std::int64_t>(lo / unit);
  const auto b = static_cast<std::int64_t>(hi / unit);
  return static_cast<double>(rng.between(a, b)) * unit;
}

inline Chain random_chain(Rng& rng, int m, double extent, double unit) {
  Chain c;
  for (int j = 0; j < m; ++j) c.push_back({grid(rng, 0.0, extent, unit), grid(rng, 0.0, extent, unit)});
  return c;
}

// Boxes that all contain one common point, some of them touching it only on
// the boundary.
inline std::vector<AxisBox> forced_common_family(Rng& rng, int count) {
  const double cx = grid(rng, -8.0, 8.0, 0.125);
  const double cy = grid(rng, -8.0, 8.0, 0.125);
  std::vector<AxisBox> out;
  for (int i = 0; i < count; ++i) {
    AxisBox b{cx - grid(rng, 0.0, 4.0, 0.125), cy - grid(rng, 0.0, 4.0, 0.125), cx + grid(rng, 0.0, 4.0, 0.125),
              cy + grid(rng, 0.0, 4.0, 0.125)};
    out.push_back(b);
  }
  return out;
}

// Unit squares whose lower-left corners lie on a small segment of slope -1,
// so consecutive squares only meet along edges or at corners. Every pair
// intersects and the common part is a single point or a thin box.
inline std::vector<AxisBox> tangent_family(Rng& rng, int count) {
  const double side = grid(rng, 1.0, 4.0, 0.25);
  const double ox = grid(rng, -8.0, 8.0, 0.25);
  const double oy = grid(rng, -8.0, 8.0, 0.25);
  std::vector<AxisBox> out;
  for (int i = 0; i < count; ++i) {
    const double t = grid(rng, 0.0, side, 0.25);
    out.push_back({ox + t, oy + side - t, ox + t + side, oy + 2 * side - t});
  }
  // Two squares meeting at exactly one corner point of the family's hull.
  out.push_back({ox + side, oy + side, ox + 2 * side, oy + 2 * side});
  out.push_back({ox, oy, ox + side, oy + side});
  return out;
}

inline bool pairwise_intersecting(const std::vector<AxisBox>& f) {
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t j = i + 1; j < f.size(); ++j) {
      if (!rsp::boxes_intersect(f[i], f[j])) return false;
    }
  }
  return true;
}

// m = 2 instance on a coarse grid so that forced and free pairs both occur;
// regenerated until the pairwise precondition holds.
inline Instance random_m2_instance(Rng& rng, int n) {
  for (;;) {
    Instance inst;
    inst.delta = 1.0;
    const Point a{grid(rng, 0.0, 4.0, 0.5), grid(rng, 0.0, 4.0, 0.5)};
    const Point b{grid(rng, 0.0, 4.0, 0.5), grid(rng, 0.0, 4.0, 0.5)};
    for (int i = 0; i < n; ++i) {
      Chain c;
      for (const Point& p : {a, b}) c.push_back({p.x + grid(rng, -2.0, 2.0, 0.5), p.y + grid(rng, -2.0, 2.0, 0.5)});
      inst.chains.push_back(c);
    }
    if (rsp::validate_pairwise(inst).ok) return inst;
  }
}

// The three stores of chain i sit on antipodal pair choice[i] of one city.
inline Instance city_instance(const std::vector<int>& choice) {
  const rsp::City city = rsp::make_city({0.0, 0.0}, 1.0);
  std::vector<std::vector<int>> rows;
  for (int c : choice) rows.push_back({c});
  return rsp::instance_from_choices({city}, rows, 1.0);
}

}  // namespace rsp_test
