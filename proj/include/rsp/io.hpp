#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rsp/errors.hpp"
#include "rsp/geometry.hpp"
#include "rsp/instance.hpp"
#include "rsp/plan.hpp"

namespace rsp {

using Json = nlohmann::json;

namespace detail {

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path);
  out << text;
  if (!out) throw ValidationError("failed writing " + path);
}

inline Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(source + ": " + e.what());
  }
}

inline double number_at(const Json& v, const std::string& where) {
  if (!v.is_number()) throw ValidationError(where + " is not a finite number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ValidationError(where + " is not a finite number");
  return d;
}

inline Point point_at(const Json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2) throw ValidationError(where + " must be an [x, y] pair");
  return {number_at(v[0], where + " x"), number_at(v[1], where + " y")};
}

inline Json points_json(const Chain& c) {
  Json arr = Json::array();
  for (const Point& p : c) arr.push_back(Json::array({p.x, p.y}));
  return arr;
}

inline int int_at(const Json& v, const std::string& where) {
  if (!v.is_number_integer()) throw ValidationError(where + " must be an integer");
  return v.get<int>();
}

}  // namespace detail

inline Json instance_to_json(const Instance& inst) {
  Json chains = Json::array();
  for (const Chain& c : inst.chains) chains.push_back(detail::points_json(c));
  return Json{{"delta", inst.delta}, {"chains", chains}};
}

inline Instance instance_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("instance must be a JSON object");
  if (!j.contains("delta")) throw ValidationError("instance lacks delta");
  if (!j.contains("chains") || !j["chains"].is_array()) throw ValidationError("instance lacks chains");
  Instance inst;
  inst.delta = detail::number_at(j["delta"], "delta");
  const Json& chains = j["chains"];
  for (std::size_t i = 0; i < chains.size(); ++i) {
    const std::string where = "chain " + std::to_string(i);
    if (!chains[i].is_array()) throw ValidationError(where + " is not an array");
    Chain ch;
    for (std::size_t s = 0; s < chains[i].size(); ++s) {
      ch.push_back(detail::point_at(chains[i][s], where + " store " + std::to_string(s)));
    }
    inst.chains.push_back(std::move(ch));
  }
  validate_instance(inst);
  return inst;
}

inline std::string instance_to_string(const Instance& inst) { return instance_to_json(inst).dump(1) + "\n"; }

inline Instance read_instance(const std::string& path) {
  return instance_from_json(detail::parse_json(detail::read_text(path), path));
}

inline void write_instance(const Instance& inst, const std::string& path) {
  detail::write_text(path, instance_to_string(inst));
}

inline Json plan_to_json(const SupermarketPlan& plan) {
  Json sms = Json::array();
  for (const Chain& c : plan.supermarkets) sms.push_back(detail::points_json(c));
  Json assignment = Json::array();
  for (std::size_t i = 0; i < plan.assignment.size(); ++i) {
    assignment.push_back(
        {{"chain", i}, {"supermarket", plan.assignment[i]}, {"matching", plan.matchings[i]}});
  }
  return Json{{"delta", plan.delta}, {"supermarkets", sms}, {"assignment", assignment}};
}

inline SupermarketPlan plan_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("plan must be a JSON object");
  if (!j.contains("delta") || !j.contains("supermarkets") || !j.contains("assignment")) {
    throw ValidationError("plan needs delta, supermarkets and assignment");
  }
  SupermarketPlan plan;
  plan.delta = detail::number_at(j["delta"], "delta");
  const Json& sms = j["supermarkets"];
  if (!sms.is_array()) throw ValidationError("supermarkets must be an array");
  for (std::size_t k = 0; k < sms.size(); ++k) {
    if (!sms[k].is_array()) throw ValidationError("supermarket chain " + std::to_string(k) + " is not an array");
    Chain c;
    for (std::size_t s = 0; s < sms[k].size(); ++s) {
      c.push_back(detail::point_at(sms[k][s], "supermarket chain " + std::to_string(k) + " point " +
                                                  std::to_string(s)));
    }
    plan.supermarkets.push_back(std::move(c));
  }
  const Json& as = j["assignment"];
  if (!as.is_array()) throw ValidationError("assignment must be an array");
  plan.assignment.assign(as.size(), -1);
  plan.matchings.assign(as.size(), {});
  std::vector<char> seen(as.size(), 0);
  for (std::size_t e = 0; e < as.size(); ++e) {
    const std::string where = "assignment entry " + std::to_string(e);
    const Json& a = as[e];
    if (!a.is_object() || !a.contains("chain") || !a.contains("supermarket") || !a.contains("matching")) {
      throw ValidationError(where + " needs chain, supermarket and matching");
    }
    const int chain = detail::int_at(a["chain"], where + " chain");
    if (chain < 0 || static_cast<std::size_t>(chain) >= as.size() || seen[static_cast<std::size_t>(chain)]) {
      throw ValidationError(where + " has an invalid or repeated chain id");
    }
    seen[static_cast<std::size_t>(chain)] = 1;
    plan.assignment[static_cast<std::size_t>(chain)] = detail::int_at(a["supermarket"], where + " supermarket");
    if (!a["matching"].is_array()) throw ValidationError(where + " matching must be an array");
    for (const Json& t : a["matching"]) {
      plan.matchings[static_cast<std::size_t>(chain)].push_back(detail::int_at(t, where + " matching"));
    }
  }
  return plan;
}

inline std::string plan_to_string(const SupermarketPlan& plan) { return plan_to_json(plan).dump(1) + "\n"; }

inline SupermarketPlan read_plan(const std::string& path) {
  return plan_from_json(detail::parse_json(detail::read_text(path), path));
}

inline void write_plan(const SupermarketPlan& plan, const std::string& path) {
  detail::write_text(path, plan_to_string(plan));
}

struct SvgOptions {
  bool matching_edges = false;
  double pixels_per_unit = 0.0;  // 0 picks a scale that fits about 1000 px
};

inline constexpr std::array<const char*, 8> kChainPalette = {
    "blue", "green", "orange", "purple", "red", "teal", "brown", "magenta"};

// One square per store stroked in its chain's color, supermarkets as black
// dots. A plan that fails verification is refused.
inline std::string render_svg(const Instance& inst, const std::optional<SupermarketPlan>& plan,
                              const SvgOptions& opt = {}) {
  validate_instance(inst);
  if (plan) {
    const PlanCheck check = verify_plan(inst, *plan);
    if (!check.ok) throw InvalidPlan("refusing to render: " + check.message);
  }
  const double d = inst.delta;
  double lo_x = inst.chains[0][0].x - d;
  double hi_x = lo_x;
  double lo_y = inst.chains[0][0].y - d;
  double hi_y = lo_y;
  auto cover = [&](const Point& p, double r) {
    lo_x = std::min(lo_x, p.x - r);
    hi_x = std::max(hi_x, p.x + r);
    lo_y = std::min(lo_y, p.y - r);
    hi_y = std::max(hi_y, p.y + r);
  };
  for (const Chain& c : inst.chains) {
    for (const Point& p : c) cover(p, d);
  }
  if (plan) {
    for (const Chain& c : plan->supermarkets) {
      for (const Point& p : c) cover(p, 0.0);
    }
  }
  const double margin = 0.5 * d;
  lo_x -= margin;
  lo_y -= margin;
  hi_x += margin;
  hi_y += margin;
  const double extent = std::max(hi_x - lo_x, hi_y - lo_y);
  const double scale = opt.pixels_per_unit > 0.0 ? opt.pixels_per_unit : 1000.0 / extent;
  auto fmt = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return std::string(buf);
  };
  auto sx = [&](double x) { return fmt((x - lo_x) * scale); };
  auto sy = [&](double y) { return fmt((hi_y - y) * scale); };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fmt((hi_x - lo_x) * scale)
      << "\" height=\"" << fmt((hi_y - lo_y) * scale) << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  const std::string side = fmt(2.0 * d * scale);
  const std::string stroke = fmt(std::max(0.5, 0.06 * d * scale));
  for (std::size_t i = 0; i < inst.chains.size(); ++i) {
    const char* color = kChainPalette[i % kChainPalette.size()];
    out << "<g stroke=\"" << color << "\" fill=\"none\" stroke-width=\"" << stroke << "\">\n";
    for (const Point& p : inst.chains[i]) {
      out << "<rect x=\"" << sx(p.x - d) << "\" y=\"" << sy(p.y + d) << "\" width=\"" << side
          << "\" height=\"" << side << "\"/>\n";
    }
    out << "</g>\n";
  }
  if (plan) {
    if (opt.matching_edges) {
      out << "<g stroke=\"gray\" stroke-width=\"" << fmt(std::max(0.3, 0.02 * d * scale)) << "\">\n";
      for (std::size_t i = 0; i < inst.chains.size(); ++i) {
        const Chain& sm = plan->supermarkets[static_cast<std::size_t>(plan->assignment[i])];
        for (std::size_t s = 0; s < inst.chains[i].size(); ++s) {
          const Point& p = inst.chains[i][s];
          const Point& q = sm[static_cast<std::size_t>(plan->matchings[i][s])];
          out << "<line x1=\"" << sx(p.x) << "\" y1=\"" << sy(p.y) << "\" x2=\"" << sx(q.x)
              << "\" y2=\"" << sy(q.y) << "\"/>\n";
        }
      }
      out << "</g>\n";
    }
    const std::string radius = fmt(std::max(1.5, 0.12 * d * scale));
    out << "<g fill=\"black\">\n";
    for (const Chain& c : plan->supermarkets) {
      for (const Point& p : c) {
        out << "<circle cx=\"" << sx(p.x) << "\" cy=\"" << sy(p.y) << "\" r=\"" << radius << "\"/>\n";
      }
    }
    out << "</g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace rsp
