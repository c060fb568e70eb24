#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "rsp/chain_graph.hpp"
#include "rsp/errors.hpp"
#include "rsp/geometry.hpp"
#include "rsp/instance.hpp"
#include "rsp/permutation.hpp"
#include "rsp/random.hpp"

namespace rsp {

// Six points on a hexagon; the balls of two points meet iff the points are
// neighbors on the hexagon. Antipodal pair p is {points[p], points[p + 3]}.
struct City {
  Point center;
  std::array<Point, 6> points;
  double delta = 1.0;
};

inline constexpr double kCityRadiusFactor = 1.9;

inline double round_dyadic(double v) { return std::round(v / kDyadicUnit) * kDyadicUnit; }

inline bool city_neighbors(int i, int j) {
  const int d = (i - j + 6) % 6;
  return d == 1 || d == 5;
}

inline City make_city(const Point& center, double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw InvalidParameter("delta must be positive");
  City c;
  c.center = center;
  c.delta = delta;
  const double r = kCityRadiusFactor * delta;
  for (int k = 0; k < 6; ++k) {
    const double angle = k * std::numbers::pi / 3.0;
    c.points[static_cast<std::size_t>(k)] = {center.x + round_dyadic(r * std::cos(angle)),
                                             center.y + round_dyadic(r * std::sin(angle))};
  }
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      const bool meet = boxes_intersect(ball(c.points[static_cast<std::size_t>(i)], delta),
                                        ball(c.points[static_cast<std::size_t>(j)], delta));
      if (meet != (i == j || city_neighbors(i, j))) {
        throw InternalError("city points " + std::to_string(i) + " and " + std::to_string(j) +
                            " violate the hexagon adjacency");
      }
    }
  }
  return c;
}

struct LowerBoundConfig {
  int n = 6;
  int m = 12;
  double delta = 1.0;
  std::uint64_t seed = 1;
  double city_spacing = 0.0;  // 0 selects 100 * delta
  int max_retries = 100;

  double spacing() const { return city_spacing > 0.0 ? city_spacing : 100.0 * delta; }
};

inline void check_config(const LowerBoundConfig& cfg) {
  if (cfg.n < 1) throw InvalidParameter("n must be at least 1");
  if (cfg.m < 2 || cfg.m % 2 != 0) throw InvalidParameter("m must be a positive even number");
  if (!(cfg.delta > 0.0) || !std::isfinite(cfg.delta)) throw InvalidParameter("delta must be positive");
  if (cfg.spacing() < 10.0 * (kCityRadiusFactor * cfg.delta + 2.0 * cfg.delta)) {
    throw InvalidParameter("city spacing too small for the cities to stay independent");
  }
  if (cfg.max_retries < 1) throw InvalidParameter("max_retries must be at least 1");
}

struct LowerBoundInstance {
  Instance instance;
  std::vector<std::vector<int>> choices;  // choices[chain][city] in {0, 1, 2}
};

inline std::vector<City> make_cities(const LowerBoundConfig& cfg) {
  std::vector<City> cities;
  for (int c = 0; c < cfg.m / 2; ++c) {
    cities.push_back(make_city({round_dyadic(c * cfg.spacing()), 0.0}, cfg.delta));
  }
  return cities;
}

// Store 2c and 2c + 1 of a chain are the chosen antipodal pair of city c.
inline Instance instance_from_choices(const std::vector<City>& cities,
                                      const std::vector<std::vector<int>>& choices, double delta) {
  Instance inst;
  inst.delta = delta;
  for (const auto& row : choices) {
    Chain ch;
    for (std::size_t c = 0; c < cities.size(); ++c) {
      const auto p = static_cast<std::size_t>(row[c]);
      ch.push_back(cities[c].points[p]);
      ch.push_back(cities[c].points[p + 3]);
    }
    inst.chains.push_back(std::move(ch));
  }
  return inst;
}

// Draws choices chain by chain, city by city, each uniform on {0, 1, 2}.
inline LowerBoundInstance gen_lowerbound_instance(const LowerBoundConfig& cfg, Rng& rng) {
  check_config(cfg);
  LowerBoundInstance out;
  out.choices.assign(static_cast<std::size_t>(cfg.n), std::vector<int>(static_cast<std::size_t>(cfg.m / 2)));
  for (auto& row : out.choices) {
    for (int& c : row) c = static_cast<int>(rng.below(3));
  }
  out.instance = instance_from_choices(make_cities(cfg), out.choices, cfg.delta);
  return out;
}

inline LowerBoundInstance gen_lowerbound_instance(const LowerBoundConfig& cfg) {
  Rng rng(cfg.seed);
  return gen_lowerbound_instance(cfg, rng);
}

struct LowerBoundReport {
  bool pairs_ok = false;
  std::vector<std::array<int, 3>> satisfiable_triples;
};

// A triple fits one supermarket chain iff no city sees three distinct
// antipodal pairs; cities are far apart, so they can be judged separately.
inline bool triple_satisfiable(const std::vector<std::vector<int>>& choices, int a, int b, int c) {
  const auto& ra = choices[static_cast<std::size_t>(a)];
  const auto& rb = choices[static_cast<std::size_t>(b)];
  const auto& rc = choices[static_cast<std::size_t>(c)];
  for (std::size_t k = 0; k < ra.size(); ++k) {
    if (ra[k] != rb[k] && rb[k] != rc[k] && ra[k] != rc[k]) return false;
  }
  return true;
}

inline LowerBoundReport verify_lowerbound(const Instance& inst,
                                          const std::vector<std::vector<int>>& choices) {
  LowerBoundReport r;
  r.pairs_ok = validate_pairwise(inst).ok;
  const int n = static_cast<int>(choices.size());
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      for (int c = b + 1; c < n; ++c) {
        if (triple_satisfiable(choices, a, b, c)) r.satisfiable_triples.push_back({a, b, c});
      }
    }
  }
  return r;
}

struct VerifiedLowerBound {
  LowerBoundInstance generated;
  LowerBoundReport report;
  int attempts = 0;
};

// Las Vegas loop: all attempts draw from one stream seeded with cfg.seed.
inline VerifiedLowerBound gen_verified_lowerbound(const LowerBoundConfig& cfg) {
  check_config(cfg);
  Rng rng(cfg.seed);
  VerifiedLowerBound out;
  for (int attempt = 1; attempt <= cfg.max_retries; ++attempt) {
    out.generated = gen_lowerbound_instance(cfg, rng);
    out.report = verify_lowerbound(out.generated.instance, out.generated.choices);
    out.attempts = attempt;
    if (out.report.pairs_ok && out.report.satisfiable_triples.empty()) return out;
  }
  throw GenerationFailure("no valid instance after " + std::to_string(cfg.max_retries) +
                          " attempts; last attempt: pairs_ok=" +
                          (out.report.pairs_ok ? std::string("true") : std::string("false")) +
                          ", satisfiable triples=" +
                          std::to_string(out.report.satisfiable_triples.size()));
}

enum class ConflictMode { MonteCarlo, Exhaustive };

struct ConflictEstimate {
  long long conflicts = 0;
  long long trials = 0;
  double value() const { return static_cast<double>(conflicts) / static_cast<double>(trials); }
};

// Fraction of trials in which three antipodal-pair choices in one city are
// all distinct. Exhaustive mode cycles through the 27 placements in order
// and needs a multiple of 27 trials.
inline ConflictEstimate estimate_conflict_probability(long long trials, std::uint64_t seed,
                                                      ConflictMode mode = ConflictMode::MonteCarlo) {
  if (trials < 1) throw InvalidParameter("trials must be at least 1");
  ConflictEstimate e;
  e.trials = trials;
  if (mode == ConflictMode::Exhaustive) {
    if (trials % 27 != 0) throw InvalidParameter("exhaustive mode needs a multiple of 27 trials");
    for (long long t = 0; t < trials; ++t) {
      const int code = static_cast<int>(t % 27);
      const int a = code % 3;
      const int b = (code / 3) % 3;
      const int c = code / 9;
      if (a != b && b != c && a != c) ++e.conflicts;
    }
    return e;
  }
  Rng rng(seed);
  for (long long t = 0; t < trials; ++t) {
    const auto a = rng.below(3);
    const auto b = rng.below(3);
    const auto c = rng.below(3);
    if (a != b && b != c && a != c) ++e.conflicts;
  }
  return e;
}

// floor(e^(m/27)) / 2, printed next to n/2 for reference.
inline double implied_bound(int m) { return std::floor(std::exp(m / 27.0)) / 2.0; }

}  // namespace rsp
