#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>

#include "rsp/errors.hpp"

namespace rsp {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

// Closed axis-aligned rectangle. An empty intersection is expressed with
// std::nullopt by the functions below, never with inverted bounds.
struct AxisBox {
  double lo_x = 0.0;
  double lo_y = 0.0;
  double hi_x = 0.0;
  double hi_y = 0.0;

  friend bool operator==(const AxisBox&, const AxisBox&) = default;
};

inline bool is_finite(const Point& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

inline bool is_valid(const AxisBox& b) {
  return std::isfinite(b.lo_x) && std::isfinite(b.lo_y) && std::isfinite(b.hi_x) &&
         std::isfinite(b.hi_y) && b.lo_x <= b.hi_x && b.lo_y <= b.hi_y;
}

inline double linf_dist(const Point& p, const Point& q) {
  return std::max(std::abs(p.x - q.x), std::abs(p.y - q.y));
}

inline AxisBox ball(const Point& p, double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw InvalidParameter("ball radius must be positive and finite, got " + std::to_string(delta));
  }
  return {p.x - delta, p.y - delta, p.x + delta, p.y + delta};
}

inline bool boxes_intersect(const AxisBox& a, const AxisBox& b) {
  return std::max(a.lo_x, b.lo_x) <= std::min(a.hi_x, b.hi_x) &&
         std::max(a.lo_y, b.lo_y) <= std::min(a.hi_y, b.hi_y);
}

inline bool contains(const AxisBox& b, const Point& p) {
  return b.lo_x <= p.x && p.x <= b.hi_x && b.lo_y <= p.y && p.y <= b.hi_y;
}

inline bool contains(const AxisBox& outer, const AxisBox& inner) {
  return outer.lo_x <= inner.lo_x && inner.hi_x <= outer.hi_x && outer.lo_y <= inner.lo_y &&
         inner.hi_y <= outer.hi_y;
}

inline std::optional<AxisBox> intersect(const AxisBox& a, const AxisBox& b) {
  AxisBox r{std::max(a.lo_x, b.lo_x), std::max(a.lo_y, b.lo_y), std::min(a.hi_x, b.hi_x),
            std::min(a.hi_y, b.hi_y)};
  if (r.lo_x > r.hi_x || r.lo_y > r.hi_y) return std::nullopt;
  return r;
}

// Common intersection of a family of closed boxes. By Helly's theorem for
// boxes this is nonempty exactly when the family pairwise intersects.
inline std::optional<AxisBox> common_intersection(std::span<const AxisBox> boxes) {
  if (boxes.empty()) throw InvalidParameter("common_intersection of an empty family");
  AxisBox r = boxes.front();
  for (const AxisBox& b : boxes.subspan(1)) {
    r.lo_x = std::max(r.lo_x, b.lo_x);
    r.lo_y = std::max(r.lo_y, b.lo_y);
    r.hi_x = std::min(r.hi_x, b.hi_x);
    r.hi_y = std::min(r.hi_y, b.hi_y);
  }
  if (r.lo_x > r.hi_x || r.lo_y > r.hi_y) return std::nullopt;
  return r;
}

inline Point representative_point(const AxisBox& b) {
  return {(b.lo_x + b.hi_x) / 2.0, (b.lo_y + b.hi_y) / 2.0};
}

}  // namespace rsp
