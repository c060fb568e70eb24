#pragma once

// Planar 3-SAT to single-supermarket-chain gadget compiler.
//
// Each variable becomes a closed cycle of squares alternating green and blue,
// drawn as a horizontal bar with one finger per clause occurrence reaching up
// (clauses above the variable line) or down (clauses below). A clause sits
// where its three fingers meet; orange squares there are found by searching a
// quarter-unit grid against the actual surrounding squares.
//
// Geometry is computed in integer quarter units with delta = 1 and scaled by
// delta at the end. Consecutive squares along a cycle are 1.25 or 1.5 apart,
// so any segment of length at least 5 can be tiled with either step-count
// parity; that freedom fixes the colors at the clause taps.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rsp/bottleneck.hpp"
#include "rsp/chain_graph.hpp"
#include "rsp/errors.hpp"
#include "rsp/geometry.hpp"
#include "rsp/instance.hpp"
#include "rsp/matching.hpp"
#include "rsp/plan.hpp"

namespace rsp {

struct Literal {
  int var = 0;  // 0-based
  bool positive = true;

  friend bool operator==(const Literal&, const Literal&) = default;
};

enum class Side { Above, Below };

// Clause literals are stored left to right in the layout order, so
// clauses[c][0] is the left leg and clauses[c][2] the right leg.
struct PlanarCnf {
  int variables = 0;
  std::vector<std::array<Literal, 3>> clauses;
  std::vector<int> order;  // variable ids from left to right
  std::vector<Side> sides;
};

inline bool satisfies(const PlanarCnf& cnf, const std::vector<bool>& assignment) {
  for (const auto& cl : cnf.clauses) {
    bool sat = false;
    for (const Literal& l : cl) sat = sat || assignment[static_cast<std::size_t>(l.var)] == l.positive;
    if (!sat) return false;
  }
  return true;
}

// Exhaustive enumeration; bit v of the mask is variable v.
inline std::optional<std::vector<bool>> find_satisfying_assignment(const PlanarCnf& cnf) {
  if (cnf.variables > 24) throw GuardExceeded("exhaustive enumeration allows at most 24 variables");
  std::vector<bool> a(static_cast<std::size_t>(cnf.variables));
  for (std::uint32_t mask = 0; mask < (1u << cnf.variables); ++mask) {
    for (int v = 0; v < cnf.variables; ++v) a[static_cast<std::size_t>(v)] = (mask >> v) & 1u;
    if (satisfies(cnf, a)) return a;
  }
  return std::nullopt;
}

struct DimacsCnf {
  int variables = 0;
  std::vector<std::vector<int>> clauses;  // signed 1-based literals
};

inline DimacsCnf parse_dimacs(const std::string& text) {
  DimacsCnf out;
  std::istringstream in(text);
  std::string line;
  int declared_clauses = -1;
  std::vector<int> current;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok) || tok == "c" || tok[0] == 'c' || tok == "%") continue;
    if (tok == "p") {
      std::string fmt;
      if (!(ls >> fmt >> out.variables >> declared_clauses) || fmt != "cnf") {
        throw ParseError("line " + std::to_string(lineno) + ": malformed problem line");
      }
      continue;
    }
    if (declared_clauses < 0) throw ParseError("line " + std::to_string(lineno) + ": clause before problem line");
    ls.clear();
    ls.str(line);
    long long lit = 0;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        lit = std::stoll(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(lineno) + ": bad literal '" + tok + "'");
      }
      if (lit == 0) {
        out.clauses.push_back(current);
        current.clear();
      } else {
        if (std::llabs(lit) > out.variables) {
          throw ParseError("line " + std::to_string(lineno) + ": literal " + tok + " out of range");
        }
        current.push_back(static_cast<int>(lit));
      }
    }
  }
  if (declared_clauses < 0) throw ParseError("missing problem line");
  if (!current.empty()) throw ParseError("last clause is not terminated by 0");
  if (static_cast<int>(out.clauses.size()) != declared_clauses) {
    throw ParseError("problem line declares " + std::to_string(declared_clauses) + " clauses, found " +
                     std::to_string(out.clauses.size()));
  }
  return out;
}

namespace detail {

inline std::pair<int, int> interval(const std::vector<int>& pos, const std::array<Literal, 3>& cl) {
  return {pos[static_cast<std::size_t>(cl[0].var)], pos[static_cast<std::size_t>(cl[2].var)]};
}

// True if clause q lies inside one gap between consecutive legs of clause p.
inline bool inside_gap(const std::vector<int>& pos, const std::array<Literal, 3>& p,
                       const std::array<Literal, 3>& q) {
  const auto [ql, qr] = interval(pos, q);
  for (int i = 0; i < 2; ++i) {
    const int a = pos[static_cast<std::size_t>(p[static_cast<std::size_t>(i)].var)];
    const int b = pos[static_cast<std::size_t>(p[static_cast<std::size_t>(i) + 1].var)];
    if (a <= ql && qr <= b) return true;
  }
  return false;
}

inline std::vector<int> positions(const PlanarCnf& cnf) {
  std::vector<int> pos(static_cast<std::size_t>(cnf.variables), -1);
  for (std::size_t i = 0; i < cnf.order.size(); ++i) pos[static_cast<std::size_t>(cnf.order[i])] = static_cast<int>(i);
  return pos;
}

}  // namespace detail

inline void validate_layout(const PlanarCnf& cnf) {
  if (cnf.variables < 1) throw InvalidFormula("formula needs at least one variable");
  if (static_cast<int>(cnf.order.size()) != cnf.variables) throw InvalidFormula("variable order has wrong length");
  std::vector<char> seen(static_cast<std::size_t>(cnf.variables), 0);
  for (int v : cnf.order) {
    if (v < 0 || v >= cnf.variables || seen[static_cast<std::size_t>(v)]) {
      throw InvalidFormula("variable order is not a permutation");
    }
    seen[static_cast<std::size_t>(v)] = 1;
  }
  if (cnf.sides.size() != cnf.clauses.size()) throw InvalidFormula("every clause needs a side");
  const auto pos = detail::positions(cnf);
  for (std::size_t c = 0; c < cnf.clauses.size(); ++c) {
    const auto& cl = cnf.clauses[c];
    for (const Literal& l : cl) {
      if (l.var < 0 || l.var >= cnf.variables) throw InvalidFormula("clause " + std::to_string(c) + " names an unknown variable");
    }
    const int p0 = pos[static_cast<std::size_t>(cl[0].var)];
    const int p1 = pos[static_cast<std::size_t>(cl[1].var)];
    const int p2 = pos[static_cast<std::size_t>(cl[2].var)];
    if (!(p0 < p1 && p1 < p2)) {
      throw InvalidFormula("clause " + std::to_string(c) + " needs three distinct variables listed left to right");
    }
  }
  for (std::size_t a = 0; a < cnf.clauses.size(); ++a) {
    for (std::size_t b = a + 1; b < cnf.clauses.size(); ++b) {
      if (cnf.sides[a] != cnf.sides[b]) continue;
      const auto [al, ar] = detail::interval(pos, cnf.clauses[a]);
      const auto [bl, br] = detail::interval(pos, cnf.clauses[b]);
      if (ar <= bl || br <= al) continue;
      if (detail::inside_gap(pos, cnf.clauses[a], cnf.clauses[b]) ||
          detail::inside_gap(pos, cnf.clauses[b], cnf.clauses[a])) {
        continue;
      }
      throw InvalidFormula("legs of clauses " + std::to_string(a) + " and " + std::to_string(b) + " cross");
    }
  }
}

// Layout sidecar: {"variable_order": [ids], "clauses": [{"side": "above" |
// "below", "legs": [ids]}]}, with 1-based DIMACS variable ids.
inline PlanarCnf make_planar_cnf(const DimacsCnf& dimacs, const nlohmann::json& layout) {
  PlanarCnf cnf;
  cnf.variables = dimacs.variables;
  if (!layout.is_object() || !layout.contains("variable_order") || !layout.contains("clauses")) {
    throw InvalidFormula("layout needs variable_order and clauses");
  }
  for (const auto& v : layout["variable_order"]) {
    if (!v.is_number_integer()) throw InvalidFormula("variable_order entries must be integers");
    cnf.order.push_back(v.get<int>() - 1);
  }
  const auto& lc = layout["clauses"];
  if (!lc.is_array() || lc.size() != dimacs.clauses.size()) {
    throw InvalidFormula("layout must describe every clause exactly once");
  }
  for (std::size_t c = 0; c < dimacs.clauses.size(); ++c) {
    const auto& lits = dimacs.clauses[c];
    if (lits.size() != 3) throw InvalidFormula("clause " + std::to_string(c) + " does not have exactly 3 literals");
    const auto& entry = lc[c];
    if (!entry.is_object() || !entry.contains("side") || !entry.contains("legs")) {
      throw InvalidFormula("layout clause " + std::to_string(c) + " needs side and legs");
    }
    const std::string side = entry["side"].is_string() ? entry["side"].get<std::string>() : "";
    if (side != "above" && side != "below") throw InvalidFormula("clause side must be above or below");
    cnf.sides.push_back(side == "above" ? Side::Above : Side::Below);
    const auto& legs = entry["legs"];
    if (!legs.is_array() || legs.size() != 3) throw InvalidFormula("clause " + std::to_string(c) + " needs 3 legs");
    std::array<Literal, 3> cl{};
    for (std::size_t i = 0; i < 3; ++i) {
      if (!legs[i].is_number_integer()) throw InvalidFormula("legs must be variable ids");
      const int v = legs[i].get<int>();
      int found = 0;
      for (int lit : lits) {
        if (std::abs(lit) == v) {
          ++found;
          cl[i] = {v - 1, lit > 0};
        }
      }
      if (found != 1) {
        throw InvalidFormula("clause " + std::to_string(c) + ": leg " + std::to_string(v) +
                             " does not match exactly one literal");
      }
    }
    cnf.clauses.push_back(cl);
  }
  validate_layout(cnf);
  return cnf;
}

inline PlanarCnf parse_planar_cnf(const std::string& dimacs_text, const std::string& layout_text) {
  nlohmann::json layout;
  try {
    layout = nlohmann::json::parse(layout_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("layout: ") + e.what());
  }
  return make_planar_cnf(parse_dimacs(dimacs_text), layout);
}

// Designated squares of one clause occurrence. Local index j counts cycle
// squares from the tap u0 along the traversal; the tap pair is (u0, u1), and
// the occurrence marks blues u_{w+1} and u_{w+3}.
struct Tap {
  int clause = 0;
  int leg = 0;
  int variable = 0;
  bool positive = true;
  int u0 = 0;            // index of u0 on the variable's cycle
  int window_start = 0;  // w, relative to u0
  std::array<Vertex, 2> a{};
  std::array<int, 2> marked_blues{};
};

struct GadgetInstance {
  PlanarCnf cnf;
  Instance instance;                             // chains: 0 blue, 1 green, 2 orange
  RestaurantGraph intended_graph;
  std::vector<std::vector<Vertex>> cycles;       // per variable, squares in traversal order
  std::vector<Tap> tap_map;
  std::vector<std::array<int, 6>> clause_oranges;  // o1, o2, o3, then one per leg
  std::vector<int> tip_variant;                  // per clause, index into the variant list
};

namespace detail {

inline constexpr int kBlue = 0;
inline constexpr int kGreen = 1;
inline constexpr int kOrange = 2;

// Quarter-unit lattice (delta = 1 corresponds to 4).
struct QPt {
  int x = 0;
  int y = 0;
  friend bool operator==(const QPt&, const QPt&) = default;
};

inline int qdist(const QPt& a, const QPt& b) { return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y)); }

inline constexpr int kTouch = 8;        // two squares of half side 4 meet iff qdist <= 8
inline constexpr int kShortStep = 5;    // 1.25
inline constexpr int kLongStep = 6;     // 1.5
inline constexpr int kBarHalf = 6;      // bar spans y in [-1.5, 1.5]
inline constexpr int kColumnGap = 30;   // 7.5 between fingers of one variable
inline constexpr int kBlockLead = 24;   // bar start to first finger column
inline constexpr int kBlockTail = 60;   // last finger column to bar end
inline constexpr int kBlockGap = 24;    // between consecutive bars
inline constexpr int kFirstLevel = 96;  // clause center height at nesting level 1
inline constexpr int kLevelStep = 48;
inline constexpr int kSearchRadius = 32;
inline constexpr int kWindowLo = -5;
inline constexpr int kWindowHi = 6;

struct TipVariant {
  int a_cap;
  int c_cap;
  bool b_right;
};

// Cap lengths 3 or 4.5, middle tip offset to the right or left of the clause
// center. Tried in order for each clause until the orange search succeeds.
inline constexpr std::array<TipVariant, 8> kTipVariants = {{{12, 12, true},
                                                            {12, 18, true},
                                                            {18, 12, true},
                                                            {18, 18, true},
                                                            {12, 12, false},
                                                            {12, 18, false},
                                                            {18, 12, false},
                                                            {18, 18, false}}};

// 5a + 6b = len with the fewest short steps, optionally with a + b of the
// requested parity.
inline std::optional<std::pair<int, int>> split_steps(int len, int parity) {
  for (int a = 0; kShortStep * a <= len; ++a) {
    const int rest = len - kShortStep * a;
    if (rest % kLongStep != 0) continue;
    const int b = rest / kLongStep;
    if (parity < 0 || (a + b) % 2 == parity) return std::make_pair(a, b);
  }
  return std::nullopt;
}

enum class Flex { AtStart, AtEnd };

struct CycleSquare {
  QPt p;
  bool corner = false;
};

// Appends the squares of segment [from, to), short steps at the requested end.
inline void lay_segment(std::vector<CycleSquare>& out, QPt from, QPt to, Flex flex, int parity) {
  const int len = std::abs(to.x - from.x) + std::abs(to.y - from.y);
  if (len == 0 || (from.x != to.x && from.y != to.y)) throw InternalError("segment is not axis-parallel");
  const auto split = split_steps(len, parity);
  if (!split) throw CompileFailure("segment of length " + std::to_string(len) + " quarters cannot be tiled");
  const auto [a, b] = *split;
  const int dx = (to.x > from.x) - (to.x < from.x);
  const int dy = (to.y > from.y) - (to.y < from.y);
  QPt cur = from;
  out.push_back({cur, true});
  for (int s = 0; s < a + b - 1; ++s) {
    const bool short_step = flex == Flex::AtStart ? s < a : s >= b;
    const int step = short_step ? kShortStep : kLongStep;
    cur = {cur.x + dx * step, cur.y + dy * step};
    out.push_back({cur, false});
  }
}

struct Finger {
  int clause = 0;
  int leg = 0;
  int column = 0;
  std::vector<QPt> vertices;  // traversal order, first and last on the bar
  int cap_segment = 0;        // index of the segment forming the tip cap
  QPt tap;                    // position of u0
  bool tap_green = true;
};

struct ClauseFrame {
  int level = 1;
  int center_x = 0;
  int center_y = 0;  // signed, negative below the variable line
};

struct Layout {
  std::vector<int> block_start;  // per layout position
  std::vector<int> block_end;
  std::vector<std::vector<Finger>> above;  // per variable, increasing column
  std::vector<std::vector<Finger>> below;
  std::vector<ClauseFrame> frames;
};

inline std::vector<int> clause_levels(const PlanarCnf& cnf, const std::vector<int>& pos) {
  const std::size_t nc = cnf.clauses.size();
  std::vector<std::size_t> idx(nc);
  for (std::size_t c = 0; c < nc; ++c) idx[c] = c;
  auto width = [&](std::size_t c) {
    const auto [l, r] = interval(pos, cnf.clauses[c]);
    return r - l;
  };
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return width(a) < width(b); });
  std::vector<int> level(nc, 1);
  for (std::size_t i = 0; i < nc; ++i) {
    const std::size_t c = idx[i];
    for (std::size_t j = 0; j < i; ++j) {
      const std::size_t d = idx[j];
      if (cnf.sides[d] == cnf.sides[c] && width(d) < width(c) && inside_gap(pos, cnf.clauses[c], cnf.clauses[d])) {
        level[c] = std::max(level[c], level[d] + 1);
      }
    }
  }
  return level;
}

// Clause occurrences at one variable on one side, left to right: clauses
// where it is the right leg (innermost first), the clause where it is the
// middle leg, then clauses where it is the left leg (outermost first).
inline std::vector<std::pair<int, int>> occurrence_order(const PlanarCnf& cnf, const std::vector<int>& pos,
                                                         int var, Side side) {
  std::vector<std::pair<int, int>> right, middle, left;
  for (std::size_t c = 0; c < cnf.clauses.size(); ++c) {
    if (cnf.sides[c] != side) continue;
    for (int leg = 0; leg < 3; ++leg) {
      if (cnf.clauses[c][static_cast<std::size_t>(leg)].var != var) continue;
      auto& bucket = leg == 2 ? right : leg == 1 ? middle : left;
      bucket.emplace_back(static_cast<int>(c), leg);
    }
  }
  auto lpos = [&](const std::pair<int, int>& o) { return interval(pos, cnf.clauses[static_cast<std::size_t>(o.first)]).first; };
  auto rpos = [&](const std::pair<int, int>& o) { return interval(pos, cnf.clauses[static_cast<std::size_t>(o.first)]).second; };
  std::sort(right.begin(), right.end(), [&](const auto& a, const auto& b) { return lpos(a) > lpos(b); });
  std::sort(left.begin(), left.end(), [&](const auto& a, const auto& b) { return rpos(a) > rpos(b); });
  std::vector<std::pair<int, int>> out = right;
  out.insert(out.end(), middle.begin(), middle.end());
  out.insert(out.end(), left.begin(), left.end());
  return out;
}

inline QPt mirror(const QPt& p) { return {p.x, -p.y}; }

// Finger outline for a clause above the line; below-line fingers are the
// mirror image traversed backwards.
inline void shape_finger(Finger& f, const ClauseFrame& fr, const TipVariant& tv, Side side) {
  const int X = f.column;
  const int xc = fr.center_x;
  const int yc = std::abs(fr.center_y);
  const int h = kBarHalf;
  QPt u0;
  QPt u1;
  if (f.leg == 0) {
    const int xt = xc - 8;
    const int lo = yc + 1;
    const int hi = lo + tv.a_cap;
    f.vertices = {{X + 6, h}, {X + 6, lo}, {xt, lo}, {xt, hi}, {X - 6, hi}, {X - 6, h}};
    f.cap_segment = 2;
    u0 = {xt, lo};
    u1 = {xt, lo + kLongStep};
  } else if (f.leg == 2) {
    const int xt = xc + 8;
    const int lo = yc + 1;
    const int hi = lo + tv.c_cap;
    f.vertices = {{X + 6, h}, {X + 6, hi}, {xt, hi}, {xt, lo}, {X - 6, lo}, {X - 6, h}};
    f.cap_segment = 2;
    u0 = {xt, yc + 7};
    u1 = {xt, yc + 1};
  } else {
    const int top = yc - 8;
    f.vertices = {{X + 6, h}, {X + 6, top}, {X - 6, top}, {X - 6, h}};
    f.cap_segment = 1;
    u0 = tv.b_right ? QPt{X, top} : QPt{X + 6, top};
    u1 = tv.b_right ? QPt{X - 6, top} : QPt{X, top};
  }
  f.tap = u0;
  if (side == Side::Below) {
    for (QPt& p : f.vertices) p = mirror(p);
    std::reverse(f.vertices.begin(), f.vertices.end());
    f.cap_segment = static_cast<int>(f.vertices.size()) - 2 - f.cap_segment;
    f.tap = mirror(u1);
  }
}

inline Layout make_layout(const PlanarCnf& cnf, const std::vector<int>& variant) {
  const auto pos = positions(cnf);
  const auto level = clause_levels(cnf, pos);
  Layout lay;
  lay.above.resize(static_cast<std::size_t>(cnf.variables));
  lay.below.resize(static_cast<std::size_t>(cnf.variables));
  std::vector<std::array<int, 3>> column(cnf.clauses.size());
  int x = 0;
  for (int v : cnf.order) {
    lay.block_start.push_back(x);
    int col = x + kBlockLead;
    int last = x;
    for (Side side : {Side::Above, Side::Below}) {
      for (const auto& [c, leg] : occurrence_order(cnf, pos, v, side)) {
        Finger f;
        f.clause = c;
        f.leg = leg;
        f.column = col;
        f.tap_green = cnf.clauses[static_cast<std::size_t>(c)][static_cast<std::size_t>(leg)].positive;
        column[static_cast<std::size_t>(c)][static_cast<std::size_t>(leg)] = col;
        (side == Side::Above ? lay.above : lay.below)[static_cast<std::size_t>(v)].push_back(f);
        last = col;
        col += kColumnGap;
      }
    }
    x = std::max(last, x) + kBlockTail;
    lay.block_end.push_back(x);
    x += kBlockGap;
  }
  lay.frames.resize(cnf.clauses.size());
  for (std::size_t c = 0; c < cnf.clauses.size(); ++c) {
    const TipVariant& tv = kTipVariants[static_cast<std::size_t>(variant[c])];
    ClauseFrame& fr = lay.frames[c];
    fr.level = level[c];
    fr.center_x = column[c][1] + (tv.b_right ? -3 : 3);
    const int height = kFirstLevel + kLevelStep * (level[c] - 1);
    fr.center_y = cnf.sides[c] == Side::Above ? height : -height;
  }
  for (int v = 0; v < cnf.variables; ++v) {
    for (Side side : {Side::Above, Side::Below}) {
      for (Finger& f : (side == Side::Above ? lay.above : lay.below)[static_cast<std::size_t>(v)]) {
        shape_finger(f, lay.frames[static_cast<std::size_t>(f.clause)],
                     kTipVariants[static_cast<std::size_t>(variant[static_cast<std::size_t>(f.clause)])], side);
      }
    }
  }
  return lay;
}

struct Cycle {
  int variable = 0;
  std::vector<CycleSquare> squares;  // even index green, odd index blue
  std::vector<std::pair<int, int>> taps;  // (clause, leg) -> index of u0, in finger order
  std::vector<int> tap_index;
};

// Counterclockwise: along the top from right to left, down the left end,
// along the bottom from left to right, up the right end.
inline Cycle trace_cycle(int var, int x_s, int x_e, const std::vector<Finger>& above,
                         const std::vector<Finger>& below) {
  Cycle cyc;
  cyc.variable = var;
  auto& sq = cyc.squares;
  QPt at{x_e, kBarHalf};

  auto lay_finger = [&](const Finger& f) {
    lay_segment(sq, at, f.vertices.front(), Flex::AtEnd, -1);
    const std::size_t base = sq.size();
    for (int attempt = 0; attempt < 2; ++attempt) {
      sq.resize(base);
      int knob_parity = -1;
      if (attempt == 1) {
        const int len = std::abs(f.vertices[1].x - f.vertices[0].x) + std::abs(f.vertices[1].y - f.vertices[0].y);
        const auto first = split_steps(len, -1);
        knob_parity = 1 - (first->first + first->second) % 2;
      }
      for (std::size_t s = 0; s + 1 < f.vertices.size(); ++s) {
        const Flex flex = static_cast<int>(s) < f.cap_segment ? Flex::AtStart : Flex::AtEnd;
        lay_segment(sq, f.vertices[s], f.vertices[s + 1], flex, s == 0 ? knob_parity : -1);
      }
      int tap = -1;
      for (std::size_t i = base; i < sq.size(); ++i) {
        if (sq[i].p == f.tap) tap = static_cast<int>(i);
      }
      if (tap < 0) throw InternalError("tap square missing from finger");
      if ((tap % 2 == 0) == f.tap_green) {
        cyc.taps.emplace_back(f.clause, f.leg);
        cyc.tap_index.push_back(tap);
        at = f.vertices.back();
        return;
      }
    }
    throw CompileFailure("finger of clause " + std::to_string(f.clause) + " cannot reach the required tap color");
  };

  for (auto it = above.rbegin(); it != above.rend(); ++it) lay_finger(*it);
  lay_segment(sq, at, {x_s, kBarHalf}, Flex::AtEnd, -1);
  lay_segment(sq, {x_s, kBarHalf}, {x_s, -kBarHalf}, Flex::AtEnd, -1);
  at = {x_s, -kBarHalf};
  for (const Finger& f : below) lay_finger(f);
  // Closing the bottom edge fixes the total parity; the right end is 2 steps.
  const int parity = static_cast<int>(sq.size() + 2) % 2;
  lay_segment(sq, at, {x_e, -kBarHalf}, Flex::AtEnd, parity);
  lay_segment(sq, {x_e, -kBarHalf}, {x_e, kBarHalf}, Flex::AtEnd, -1);
  if (sq.size() % 2 != 0) throw InternalError("odd cycle length");
  return cyc;
}

// Six perfect-matching checks on at most 6 x 6 bipartite graphs given as
// row bitmasks.
inline bool perfect6(const std::array<std::uint8_t, 6>& rows, int count) {
  std::array<char, 64> reach{};
  reach[0] = 1;
  for (int mask = 0; mask < (1 << count); ++mask) {
    if (!reach[static_cast<std::size_t>(mask)]) continue;
    const int r = std::popcount(static_cast<unsigned>(mask));
    if (r == count) return true;
    for (int c = 0; c < count; ++c) {
      if (!(mask & (1 << c)) && (rows[static_cast<std::size_t>(r)] >> c & 1)) reach[static_cast<std::size_t>(mask | (1 << c))] = 1;
    }
  }
  return false;
}

// Orange candidate described by the local squares it touches. Slot
// k * 12 + (j + 5) stands for local square u_j of leg k.
struct Candidate {
  std::uint64_t mask = 0;
  QPt pos;
  int margin = 0;
};

inline int slot(int leg, int j) { return leg * 12 + (j - kWindowLo); }
inline bool has(std::uint64_t mask, int leg, int j) {
  return j >= kWindowLo && j <= kWindowHi && (mask >> slot(leg, j) & 1u);
}

struct ClauseSolution {
  std::array<Candidate, 6> oranges;
  std::array<int, 3> w{};
};

struct Nearby {
  QPt p;
  int leg = -1;  // -1: not one of this clause's window squares
  int j = 0;
};

inline std::optional<ClauseSolution> solve_clause(const std::vector<Nearby>& near, const QPt& center,
                                                  const std::array<bool, 3>& tap_green) {
  std::map<std::uint64_t, Candidate> best;
  for (int dy = -kSearchRadius; dy <= kSearchRadius; ++dy) {
    for (int dx = -kSearchRadius; dx <= kSearchRadius; ++dx) {
      const QPt c{center.x + dx, center.y + dy};
      std::uint64_t mask = 0;
      int margin = 1 << 20;
      bool clean = true;
      for (const Nearby& s : near) {
        const int d = qdist(c, s.p);
        margin = std::min(margin, std::abs(d - kTouch));
        if (d > kTouch) continue;
        if (s.leg < 0) {
          clean = false;
          break;
        }
        mask |= std::uint64_t{1} << slot(s.leg, s.j);
      }
      if (!clean || mask == 0) continue;
      auto [it, fresh] = best.try_emplace(mask, Candidate{mask, c, margin});
      if (!fresh && margin > it->second.margin) it->second = {mask, c, margin};
    }
  }
  std::uint64_t o1_mask = 0;
  for (int k = 0; k < 3; ++k) o1_mask |= (std::uint64_t{1} << slot(k, 0)) | (std::uint64_t{1} << slot(k, 1));
  const auto o1 = best.find(o1_mask);
  if (o1 == best.end()) return std::nullopt;

  std::vector<Candidate> all;
  for (const auto& [mask, cand] : best) {
    if (mask != o1_mask) all.push_back(cand);
  }
  std::stable_sort(all.begin(), all.end(), [](const Candidate& a, const Candidate& b) { return a.margin > b.margin; });

  auto legs_of = [](std::uint64_t mask) {
    int legs = 0;
    for (int k = 0; k < 3; ++k) {
      if ((mask >> (k * 12)) & 0xFFFu) legs |= 1 << k;
    }
    return legs;
  };

  std::array<std::vector<int>, 3> w_options;
  for (int k = 0; k < 3; ++k) w_options[static_cast<std::size_t>(k)] = tap_green[static_cast<std::size_t>(k)] ? std::vector<int>{-2, 0} : std::vector<int>{-3, -1};

  for (int wa : w_options[0]) {
    for (int wb : w_options[1]) {
      for (int wc : w_options[2]) {
        const std::array<int, 3> w{wa, wb, wc};
        // Signature: 12 clique bits, 6 marked-blue bits, 6 green bits.
        auto signature = [&](std::uint64_t mask) {
          std::uint32_t sig = 0;
          for (int k = 0; k < 3; ++k) {
            const int wk = w[static_cast<std::size_t>(k)];
            for (int t = 0; t < 4; ++t) {
              if (has(mask, k, wk + t) && has(mask, k, wk + t + 1)) sig |= 1u << (k * 4 + t);
            }
            if (has(mask, k, wk + 1)) sig |= 1u << (12 + 2 * k);
            if (has(mask, k, wk + 3)) sig |= 1u << (13 + 2 * k);
            if (has(mask, k, wk + 2)) sig |= 1u << (18 + 2 * k);
            if (has(mask, k, wk + 4)) sig |= 1u << (19 + 2 * k);
          }
          return sig;
        };
        std::vector<std::pair<std::uint32_t, Candidate>> multi;
        std::array<std::vector<std::pair<std::uint32_t, Candidate>>, 3> single;
        std::vector<std::uint32_t> seen_multi;
        std::array<std::vector<std::uint32_t>, 3> seen_single;
        for (const Candidate& c : all) {
          const int legs = legs_of(c.mask);
          const std::uint32_t sig = signature(c.mask);
          if (std::popcount(static_cast<unsigned>(legs)) >= 2) {
            if (std::find(seen_multi.begin(), seen_multi.end(), sig) != seen_multi.end()) continue;
            seen_multi.push_back(sig);
            multi.emplace_back(sig, c);
          } else {
            const int k = std::countr_zero(static_cast<unsigned>(legs));
            const int wk = w[static_cast<std::size_t>(k)];
            bool inside = std::popcount(c.mask) >= 2;
            for (int j = kWindowLo; j <= kWindowHi && inside; ++j) {
              if (has(c.mask, k, j) && (j < wk || j > wk + 4)) inside = false;
            }
            auto& seen = seen_single[static_cast<std::size_t>(k)];
            if (!inside || std::find(seen.begin(), seen.end(), sig) != seen.end()) continue;
            seen.push_back(sig);
            single[static_cast<std::size_t>(k)].emplace_back(sig, c);
          }
        }
        for (auto& s : single) {
          std::stable_sort(s.begin(), s.end(), [](const auto& a, const auto& b) {
            return std::popcount(a.second.mask) > std::popcount(b.second.mask);
          });
        }
        const std::uint32_t sig1 = signature(o1->second.mask);

        auto works = [&](const std::array<std::uint32_t, 6>& sig) {
          for (int state = 1; state < 8; ++state) {
            std::array<int, 6> cols{};
            int nc = 0;
            for (int k = 0; k < 3; ++k) {
              const bool lit_true = (state >> k) & 1;
              for (int t = 0; t < 4; ++t) {
                const int j = w[static_cast<std::size_t>(k)] + t;
                if (((j % 2 + 2) % 2 == 0) == lit_true) cols[static_cast<std::size_t>(nc++)] = k * 4 + t;
              }
            }
            std::array<std::uint8_t, 6> rows{};
            for (int o = 0; o < 6; ++o) {
              for (int c = 0; c < 6; ++c) {
                if (sig[static_cast<std::size_t>(o)] >> cols[static_cast<std::size_t>(c)] & 1u) rows[static_cast<std::size_t>(o)] |= static_cast<std::uint8_t>(1u << c);
              }
            }
            if (!perfect6(rows, 6)) return false;
          }
          for (int shift : {12, 18}) {
            std::array<std::uint8_t, 6> rows{};
            for (int o = 0; o < 6; ++o) rows[static_cast<std::size_t>(o)] = static_cast<std::uint8_t>((sig[static_cast<std::size_t>(o)] >> shift) & 0x3Fu);
            if (!perfect6(rows, 6)) return false;
          }
          return true;
        };

        for (std::size_t i = 0; i < multi.size(); ++i) {
          for (std::size_t j = i + 1; j < multi.size(); ++j) {
            for (const auto& ea : single[0]) {
              for (const auto& eb : single[1]) {
                for (const auto& ec : single[2]) {
                  const std::array<std::uint32_t, 6> sig{sig1, multi[i].first, multi[j].first, ea.first, eb.first, ec.first};
                  if (!works(sig)) continue;
                  ClauseSolution sol;
                  sol.w = w;
                  sol.oranges = {o1->second, multi[i].second, multi[j].second, ea.second, eb.second, ec.second};
                  return sol;
                }
              }
            }
          }
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace detail

namespace detail {

inline int wrap(int i, int len) { return ((i % len) + len) % len; }

inline RestaurantGraph graph_from_edges(int m, std::vector<std::pair<int, int>> edges) {
  RestaurantGraph g;
  g.n = 3;
  g.m = m;
  g.adj.assign(static_cast<std::size_t>(3 * m), {});
  for (const auto& [u, v] : edges) {
    g.adj[static_cast<std::size_t>(u)].push_back(v);
    g.adj[static_cast<std::size_t>(v)].push_back(u);
  }
  for (auto& row : g.adj) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  return g;
}

inline std::string first_divergence(const RestaurantGraph& want, const RestaurantGraph& got) {
  for (int u = 0; u < want.vertex_count(); ++u) {
    const auto& a = want.adj[static_cast<std::size_t>(u)];
    const auto& b = got.adj[static_cast<std::size_t>(u)];
    if (a == b) continue;
    std::vector<int> diff;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(diff));
    const Vertex x = want.vertex(u);
    const Vertex y = want.vertex(diff.front());
    const bool intended = std::binary_search(a.begin(), a.end(), diff.front());
    return "chain " + std::to_string(x.chain) + " store " + std::to_string(x.store) + " and chain " +
           std::to_string(y.chain) + " store " + std::to_string(y.store) +
           (intended ? " should touch but do not" : " touch but should not");
  }
  return {};
}

}  // namespace detail

inline GadgetInstance compile(const PlanarCnf& cnf, double delta) {
  using namespace detail;
  validate_layout(cnf);
  if (!(delta > 0.0) || !std::isfinite(delta)) throw InvalidParameter("delta must be positive");
  const std::size_t nc = cnf.clauses.size();
  const auto pos = positions(cnf);
  std::vector<int> variant(nc, 0);

  for (;;) {
    const Layout lay = make_layout(cnf, variant);
    std::vector<Cycle> cycles;
    std::vector<int> cycle_of_var(static_cast<std::size_t>(cnf.variables), -1);
    for (std::size_t i = 0; i < cnf.order.size(); ++i) {
      const int v = cnf.order[i];
      cycle_of_var[static_cast<std::size_t>(v)] = static_cast<int>(cycles.size());
      cycles.push_back(trace_cycle(v, lay.block_start[i], lay.block_end[i], lay.above[static_cast<std::size_t>(v)],
                                   lay.below[static_cast<std::size_t>(v)]));
    }
    // (clause, leg) -> (cycle, index of u0)
    std::vector<std::array<std::pair<int, int>, 3>> tap_at(nc);
    for (std::size_t ci = 0; ci < cycles.size(); ++ci) {
      for (std::size_t t = 0; t < cycles[ci].taps.size(); ++t) {
        const auto [c, leg] = cycles[ci].taps[t];
        tap_at[static_cast<std::size_t>(c)][static_cast<std::size_t>(leg)] = {static_cast<int>(ci), cycles[ci].tap_index[t]};
      }
    }

    std::vector<std::optional<ClauseSolution>> sols(nc);
    bool retry = false;
    for (std::size_t c = 0; c < nc; ++c) {
      const QPt center{lay.frames[c].center_x, lay.frames[c].center_y};
      std::vector<Nearby> near;
      const int reach = kSearchRadius + kTouch;
      for (std::size_t ci = 0; ci < cycles.size(); ++ci) {
        const int len = static_cast<int>(cycles[ci].squares.size());
        for (int i = 0; i < len; ++i) {
          const QPt& p = cycles[ci].squares[static_cast<std::size_t>(i)].p;
          if (std::abs(p.x - center.x) > reach || std::abs(p.y - center.y) > reach) continue;
          Nearby nb{p, -1, 0};
          for (int leg = 0; leg < 3; ++leg) {
            const auto [tc, u0] = tap_at[c][static_cast<std::size_t>(leg)];
            if (tc != static_cast<int>(ci)) continue;
            int j = wrap(i - u0, len);
            if (j > len / 2) j -= len;
            if (j >= kWindowLo && j <= kWindowHi) nb = {p, leg, j};
          }
          near.push_back(nb);
        }
      }
      std::array<bool, 3> green{};
      for (int leg = 0; leg < 3; ++leg) green[static_cast<std::size_t>(leg)] = cnf.clauses[c][static_cast<std::size_t>(leg)].positive;
      sols[c] = solve_clause(near, center, green);
      if (!sols[c]) {
        if (variant[c] + 1 >= static_cast<int>(kTipVariants.size())) {
          throw CompileFailure("no orange placement found for clause " + std::to_string(c));
        }
        ++variant[c];
        retry = true;
      }
    }
    if (retry) continue;

    // Store numbering: blues and greens in cycle order, variable by variable.
    GadgetInstance g;
    g.cnf = cnf;
    g.tip_variant = variant;
    g.cycles.resize(static_cast<std::size_t>(cnf.variables));
    std::vector<std::vector<QPt>> pts(3);
    std::vector<std::vector<int>> store_at(cycles.size());
    for (std::size_t ci = 0; ci < cycles.size(); ++ci) {
      auto& seq = g.cycles[static_cast<std::size_t>(cycles[ci].variable)];
      for (std::size_t i = 0; i < cycles[ci].squares.size(); ++i) {
        const int chain = i % 2 == 0 ? kGreen : kBlue;
        const int store = static_cast<int>(pts[static_cast<std::size_t>(chain)].size());
        pts[static_cast<std::size_t>(chain)].push_back(cycles[ci].squares[i].p);
        seq.push_back({chain, store});
        store_at[ci].push_back(store);
      }
    }
    const int m = static_cast<int>(pts[kBlue].size());
    if (static_cast<int>(pts[kGreen].size()) != m) throw InternalError("blue and green counts differ");

    std::vector<std::pair<int, int>> edges;
    auto vid = [m](int chain, int store) { return chain * m + store; };
    auto square_vertex = [&](std::size_t ci, int i) {
      const int len = static_cast<int>(cycles[ci].squares.size());
      const int k = wrap(i, len);
      return Vertex{k % 2 == 0 ? kGreen : kBlue, store_at[ci][static_cast<std::size_t>(k)]};
    };
    for (std::size_t ci = 0; ci < cycles.size(); ++ci) {
      const int len = static_cast<int>(cycles[ci].squares.size());
      for (int i = 0; i < len; ++i) {
        const Vertex a = square_vertex(ci, i);
        const Vertex b = square_vertex(ci, i + 1);
        edges.emplace_back(vid(a.chain, a.store), vid(b.chain, b.store));
      }
    }

    std::vector<char> marked(static_cast<std::size_t>(m), 0);
    for (std::size_t c = 0; c < nc; ++c) {
      const ClauseSolution& sol = *sols[c];
      std::array<int, 6> ids{};
      for (int o = 0; o < 6; ++o) {
        const int store = static_cast<int>(pts[kOrange].size());
        pts[kOrange].push_back(sol.oranges[static_cast<std::size_t>(o)].pos);
        ids[static_cast<std::size_t>(o)] = store;
        for (int leg = 0; leg < 3; ++leg) {
          const auto [ci, u0] = tap_at[c][static_cast<std::size_t>(leg)];
          for (int j = kWindowLo; j <= kWindowHi; ++j) {
            if (!has(sol.oranges[static_cast<std::size_t>(o)].mask, leg, j)) continue;
            const Vertex v = square_vertex(static_cast<std::size_t>(ci), u0 + j);
            edges.emplace_back(vid(kOrange, store), vid(v.chain, v.store));
          }
        }
      }
      g.clause_oranges.push_back(ids);
      for (int leg = 0; leg < 3; ++leg) {
        const auto [ci, u0] = tap_at[c][static_cast<std::size_t>(leg)];
        const int w = sol.w[static_cast<std::size_t>(leg)];
        Tap tap;
        tap.clause = static_cast<int>(c);
        tap.leg = leg;
        tap.variable = cnf.clauses[c][static_cast<std::size_t>(leg)].var;
        tap.positive = cnf.clauses[c][static_cast<std::size_t>(leg)].positive;
        tap.u0 = u0;
        tap.window_start = w;
        tap.a = {square_vertex(static_cast<std::size_t>(ci), u0), square_vertex(static_cast<std::size_t>(ci), u0 + 1)};
        for (int t = 0; t < 2; ++t) {
          const Vertex b = square_vertex(static_cast<std::size_t>(ci), u0 + w + 1 + 2 * t);
          if (b.chain != kBlue) throw InternalError("marked square is not blue");
          if (marked[static_cast<std::size_t>(b.store)]) throw InternalError("blue square marked twice");
          marked[static_cast<std::size_t>(b.store)] = 1;
          tap.marked_blues[static_cast<std::size_t>(t)] = b.store;
        }
        g.tap_map.push_back(tap);
      }
    }

    // A copy at blue square i touches i, its neighbors, and the blues two
    // steps away around a corner.
    for (std::size_t ci = 0; ci < cycles.size(); ++ci) {
      const int len = static_cast<int>(cycles[ci].squares.size());
      for (int i = 1; i < len; i += 2) {
        const int blue = store_at[ci][static_cast<std::size_t>(i)];
        if (marked[static_cast<std::size_t>(blue)]) continue;
        const int store = static_cast<int>(pts[kOrange].size());
        pts[kOrange].push_back(cycles[ci].squares[static_cast<std::size_t>(i)].p);
        std::vector<int> touch{i - 1, i, i + 1};
        if (cycles[ci].squares[static_cast<std::size_t>(wrap(i - 1, len))].corner) touch.push_back(i - 2);
        if (cycles[ci].squares[static_cast<std::size_t>(wrap(i + 1, len))].corner) touch.push_back(i + 2);
        for (int t : touch) {
          const Vertex v = square_vertex(ci, t);
          edges.emplace_back(vid(kOrange, store), vid(v.chain, v.store));
        }
      }
    }
    if (static_cast<int>(pts[kOrange].size()) != m) {
      throw CompileFailure("orange count " + std::to_string(pts[kOrange].size()) + " differs from blue count " +
                           std::to_string(m));
    }

    g.instance.delta = delta;
    for (int chain = 0; chain < 3; ++chain) {
      Chain ch;
      for (const QPt& p : pts[static_cast<std::size_t>(chain)]) ch.push_back({p.x * 0.25 * delta, p.y * 0.25 * delta});
      g.instance.chains.push_back(std::move(ch));
    }
    g.intended_graph = graph_from_edges(m, std::move(edges));
    const RestaurantGraph realized = build_restaurant_graph(g.instance);
    if (!(realized == g.intended_graph)) {
      throw CompileFailure("realized graph differs from the intended one: " + first_divergence(g.intended_graph, realized));
    }
    const PairwiseReport pw = validate_pairwise(g.instance);
    if (!pw.ok) {
      throw CompileFailure("chains " + std::to_string(pw.violations.front().first) + " and " +
                           std::to_string(pw.violations.front().second) + " are not pairwise satisfiable");
    }
    return g;
  }
}

// Cliques follow the assignment on every variable cycle (true: each green
// with the next blue, false: each blue with the next green); oranges are then
// matched to cliques. Returns none when no orange matching exists, which by
// construction happens exactly for non-satisfying assignments.
inline std::optional<SupermarketPlan> assignment_to_plan(const GadgetInstance& g, const std::vector<bool>& assignment) {
  if (static_cast<int>(assignment.size()) != g.cnf.variables) {
    throw InvalidParameter("assignment has " + std::to_string(assignment.size()) + " values, formula has " +
                           std::to_string(g.cnf.variables) + " variables");
  }
  const Instance& inst = g.instance;
  const int m = static_cast<int>(inst.m());
  ColorfulPartition part;
  part.cliques.assign(static_cast<std::size_t>(m), std::vector<int>(3, -1));
  for (int v = 0; v < g.cnf.variables; ++v) {
    const auto& cyc = g.cycles[static_cast<std::size_t>(v)];
    const int len = static_cast<int>(cyc.size());
    for (int i = 1; i < len; i += 2) {
      const int partner = assignment[static_cast<std::size_t>(v)] ? i - 1 : detail::wrap(i + 1, len);
      const int clique = cyc[static_cast<std::size_t>(i)].store;
      part.cliques[static_cast<std::size_t>(clique)][detail::kBlue] = clique;
      part.cliques[static_cast<std::size_t>(clique)][detail::kGreen] = cyc[static_cast<std::size_t>(partner)].store;
    }
  }
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(m));
  std::vector<AxisBox> boxes;
  for (int j = 0; j < m; ++j) {
    const auto& c = part.cliques[static_cast<std::size_t>(j)];
    const auto box = intersect(ball(inst.chains[detail::kBlue][static_cast<std::size_t>(c[detail::kBlue])], inst.delta),
                               ball(inst.chains[detail::kGreen][static_cast<std::size_t>(c[detail::kGreen])], inst.delta));
    if (!box) throw InternalError("cycle neighbors do not intersect");
    boxes.push_back(*box);
  }
  for (int o = 0; o < m; ++o) {
    const AxisBox b = ball(inst.chains[detail::kOrange][static_cast<std::size_t>(o)], inst.delta);
    for (int j = 0; j < m; ++j) {
      if (boxes_intersect(b, boxes[static_cast<std::size_t>(j)])) adj[static_cast<std::size_t>(o)].push_back(j);
    }
  }
  const BipartiteMatching mm = max_bipartite_matching(adj, m);
  if (!mm.perfect()) return std::nullopt;
  for (int o = 0; o < m; ++o) {
    part.cliques[static_cast<std::size_t>(mm.match_left[static_cast<std::size_t>(o)])][detail::kOrange] = o;
  }
  return partition_to_plan(inst, part);
}

inline std::vector<bool> plan_to_assignment(const GadgetInstance& g, const SupermarketPlan& plan) {
  const Instance& inst = g.instance;
  const PlanCheck check = verify_plan(inst, plan);
  if (!check.ok) throw InvalidPlan("plan does not verify: " + check.message);
  if (plan.assignment[detail::kBlue] != plan.assignment[detail::kGreen] ||
      plan.assignment[detail::kBlue] != plan.assignment[detail::kOrange]) {
    throw InvalidPlan("blue, green and orange must share one supermarket chain");
  }
  const int m = static_cast<int>(inst.m());
  std::vector<int> blue_at(static_cast<std::size_t>(m), -1);
  for (int b = 0; b < m; ++b) blue_at[static_cast<std::size_t>(plan.matchings[detail::kBlue][static_cast<std::size_t>(b)])] = b;
  std::vector<bool> out(static_cast<std::size_t>(g.cnf.variables));
  for (int v = 0; v < g.cnf.variables; ++v) {
    const auto& cyc = g.cycles[static_cast<std::size_t>(v)];
    const int len = static_cast<int>(cyc.size());
    int with_next = 0;
    int with_prev = 0;
    for (int i = 0; i < len; i += 2) {
      const int s = plan.matchings[detail::kGreen][static_cast<std::size_t>(cyc[static_cast<std::size_t>(i)].store)];
      const int blue = blue_at[static_cast<std::size_t>(s)];
      if (blue == cyc[static_cast<std::size_t>(i + 1)].store) {
        ++with_next;
      } else if (blue == cyc[static_cast<std::size_t>(detail::wrap(i - 1, len))].store) {
        ++with_prev;
      } else {
        throw InvalidPlan("green square shares a supermarket with a blue square that is not its cycle neighbor");
      }
    }
    if (with_next > 0 && with_prev > 0) throw InvalidPlan("variable " + std::to_string(v + 1) + " mixes both placement families");
    out[static_cast<std::size_t>(v)] = with_next > 0;
  }
  if (!satisfies(g.cnf, out)) throw InvalidPlan("recovered assignment does not satisfy the formula");
  return out;
}

}  // namespace rsp
