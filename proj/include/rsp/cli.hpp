#pragma once

// Command-line front end. Every subcommand is a thin adapter over the
// library; exit codes are 0 for success or a "yes" answer, 1 for a "no"
// answer, 2 for usage, parse, validation or guard errors.

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rsp/bottleneck.hpp"
#include "rsp/chain_graph.hpp"
#include "rsp/errors.hpp"
#include "rsp/io.hpp"
#include "rsp/lowerbound.hpp"
#include "rsp/oracle.hpp"
#include "rsp/permutation.hpp"
#include "rsp/plan.hpp"
#include "rsp/sat_reduction.hpp"

namespace rsp {

inline constexpr int kExitYes = 0;
inline constexpr int kExitNo = 1;
inline constexpr int kExitError = 2;

namespace detail {

// Shortest decimal that reads back to the same double, without a trailing
// ".0" on whole numbers.
inline std::string num(double v) {
  std::string s = Json(v).dump();
  if (s.size() > 2 && s.compare(s.size() - 2, 2, ".0") == 0) s.resize(s.size() - 2);
  return s;
}

inline std::string factorial_text(int m) {
  if (m > 20) return "more than 2^64";
  std::uint64_t f = 1;
  for (int i = 2; i <= m; ++i) f *= static_cast<std::uint64_t>(i);
  return std::to_string(f);
}

inline void check_chain_id(const Instance& inst, int id, const char* flag) {
  if (id < 0 || static_cast<std::size_t>(id) >= inst.n()) {
    throw InvalidParameter(std::string(flag) + " must name a chain in [0, " + std::to_string(inst.n()) + ")");
  }
}

}  // namespace detail

inline int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Restaurant and supermarket chain toolkit", "rsp"};
  app.require_subcommand(1);

  // Each subcommand stores its action here; it runs after a successful parse.
  std::function<int()> action;

  // gen
  auto* gen = app.add_subcommand("gen", "Generate instances");
  gen->require_subcommand(1);

  RandomInstanceConfig rcfg;
  std::string rand_out;
  auto* gen_random = gen->add_subcommand("random", "Pairwise-satisfiable instance from a perturbed template");
  gen_random->add_option("--n", rcfg.n, "Number of chains")->capture_default_str();
  gen_random->add_option("--m", rcfg.m, "Stores per chain")->capture_default_str();
  gen_random->add_option("--delta", rcfg.delta, "Service radius")->capture_default_str();
  gen_random->add_option("--rho", rcfg.rho, "Perturbation as a fraction of delta")->capture_default_str();
  gen_random->add_option("--seed", rcfg.seed, "Random seed")->capture_default_str();
  gen_random->add_option("-o,--output", rand_out, "Output instance file (default: stdout)");
  gen_random->callback([&] {
    action = [&] {
      const Instance inst = gen_random_instance(rcfg);
      if (rand_out.empty()) {
        out << instance_to_string(inst);
      } else {
        write_instance(inst, rand_out);
        out << "wrote " << inst.n() << " chains of " << inst.m() << " stores to " << rand_out << "\n";
      }
      return kExitYes;
    };
  });

  LowerBoundConfig lcfg;
  std::string lb_out;
  auto* gen_lb = gen->add_subcommand("lower-bound", "Instance needing ceil(n/2) supermarket chains");
  gen_lb->add_option("--n", lcfg.n, "Number of chains")->capture_default_str();
  gen_lb->add_option("--m", lcfg.m, "Stores per chain (even)")->capture_default_str();
  gen_lb->add_option("--delta", lcfg.delta, "Service radius")->capture_default_str();
  gen_lb->add_option("--seed", lcfg.seed, "Random seed")->capture_default_str();
  gen_lb->add_option("--max-retries", lcfg.max_retries, "Attempts before giving up")->capture_default_str();
  gen_lb->add_option("-o,--output", lb_out, "Output instance file (default: stdout)");
  gen_lb->callback([&] {
    action = [&] {
      const VerifiedLowerBound v = gen_verified_lowerbound(lcfg);
      std::ostream& info = lb_out.empty() ? err : out;
      if (lb_out.empty()) {
        out << instance_to_string(v.generated.instance);
      } else {
        write_instance(v.generated.instance, lb_out);
      }
      info << "attempts: " << v.attempts << "\n"
           << "pairs satisfiable: " << (v.report.pairs_ok ? "yes" : "no") << "\n"
           << "satisfiable triples: " << v.report.satisfiable_triples.size() << "\n"
           << "chains needed: " << (lcfg.n + 1) / 2 << "\n"
           << "implied bound floor(e^(m/27))/2: " << detail::num(implied_bound(lcfg.m)) << "\n";
      return kExitYes;
    };
  });

  // compile-sat
  std::string cnf_path;
  std::string layout_path;
  double sat_delta = 1.0;
  std::string sat_out;
  auto* compile_sat = app.add_subcommand("compile-sat", "Compile a planar 3-CNF into a 3-chain instance");
  compile_sat->add_option("cnf", cnf_path, "DIMACS CNF file")->required();
  compile_sat->add_option("--layout", layout_path, "Layout JSON file")->required();
  compile_sat->add_option("--delta", sat_delta, "Service radius")->capture_default_str();
  compile_sat->add_option("-o,--output", sat_out, "Output instance file (default: stdout)");
  compile_sat->callback([&] {
    action = [&] {
      const PlanarCnf cnf = parse_planar_cnf(detail::read_text(cnf_path), detail::read_text(layout_path));
      const GadgetInstance g = compile(cnf, sat_delta);
      if (sat_out.empty()) {
        out << instance_to_string(g.instance);
      } else {
        write_instance(g.instance, sat_out);
        out << "variables: " << cnf.variables << "\nclauses: " << cnf.clauses.size()
            << "\nstores per chain: " << g.instance.m() << "\nrestaurant graph edges: "
            << g.intended_graph.edge_count() << "\n";
      }
      return kExitYes;
    };
  });

  // decide
  auto* decide = app.add_subcommand("decide", "Decision procedures");
  decide->require_subcommand(1);

  std::string pair_inst;
  int pair_a = 0;
  int pair_b = 1;
  auto* decide_pair = decide->add_subcommand("pair", "Can chains a and b share one supermarket chain?");
  decide_pair->add_option("instance", pair_inst, "Instance file")->required();
  decide_pair->add_option("--a", pair_a, "First chain id")->capture_default_str();
  decide_pair->add_option("--b", pair_b, "Second chain id")->capture_default_str();
  decide_pair->callback([&] {
    action = [&] {
      const Instance inst = read_instance(pair_inst);
      detail::check_chain_id(inst, pair_a, "--a");
      detail::check_chain_id(inst, pair_b, "--b");
      const bool yes = pair_satisfiable(inst.chains[static_cast<std::size_t>(pair_a)],
                                        inst.chains[static_cast<std::size_t>(pair_b)], inst.delta)
                           .has_value();
      out << (yes ? "yes" : "no") << "\n";
      return yes ? kExitYes : kExitNo;
    };
  });

  std::string single_inst;
  std::string single_algo = "auto";
  std::string single_out;
  auto* decide_single_cmd = decide->add_subcommand("single", "Can all chains share one supermarket chain?");
  decide_single_cmd->add_option("instance", single_inst, "Instance file")->required();
  decide_single_cmd->add_option("--algorithm", single_algo, "auto, contraction or backtracking")
      ->check(CLI::IsMember({"auto", "contraction", "backtracking"}))
      ->capture_default_str();
  decide_single_cmd->add_option("-o,--output", single_out, "Write the plan here on a yes answer");
  decide_single_cmd->callback([&] {
    action = [&] {
      const Instance inst = read_instance(single_inst);
      const SingleAlgorithm algo = single_algo == "contraction"    ? SingleAlgorithm::Contraction
                                   : single_algo == "backtracking" ? SingleAlgorithm::Backtracking
                                                                   : SingleAlgorithm::Auto;
      const auto d = decide_single(inst, algo);
      out << (d ? "yes" : "no") << "\n";
      if (d && !single_out.empty()) write_plan(d->plan, single_out);
      return d ? kExitYes : kExitNo;
    };
  });

  // cluster
  std::string cl_inst;
  std::string cl_out;
  auto* cluster = app.add_subcommand("cluster", "One supermarket chain per permutation signature");
  cluster->add_option("instance", cl_inst, "Instance file")->required();
  cluster->add_option("-o,--output", cl_out, "Output plan file");
  cluster->callback([&] {
    action = [&] {
      const Instance inst = read_instance(cl_inst);
      const SupermarketPlan plan = cluster_by_permutation(inst);
      if (!cl_out.empty()) write_plan(plan, cl_out);
      out << "k: " << plan.k() << "\nm!: " << detail::factorial_text(static_cast<int>(inst.m())) << "\n";
      return kExitYes;
    };
  });

  // bottleneck
  std::string bn_inst;
  int bn_a = 0;
  int bn_b = 1;
  bool bn_brute = false;
  auto* bottleneck = app.add_subcommand("bottleneck", "Bottleneck distance between two chains");
  bottleneck->add_option("instance", bn_inst, "Instance file")->required();
  bottleneck->add_option("--a", bn_a, "First chain id")->capture_default_str();
  bottleneck->add_option("--b", bn_b, "Second chain id")->capture_default_str();
  bottleneck->add_flag("--brute-force", bn_brute, "Enumerate all matchings instead");
  bottleneck->callback([&] {
    action = [&] {
      const Instance inst = read_instance(bn_inst);
      detail::check_chain_id(inst, bn_a, "--a");
      detail::check_chain_id(inst, bn_b, "--b");
      const Chain& a = inst.chains[static_cast<std::size_t>(bn_a)];
      const Chain& b = inst.chains[static_cast<std::size_t>(bn_b)];
      const BottleneckResult r = bn_brute ? brute_force_bottleneck(a, b) : bottleneck_distance(a, b);
      out << detail::num(r.value) << "\n";
      return kExitYes;
    };
  });

  // verify
  std::string v_inst;
  std::string v_plan;
  auto* verify = app.add_subcommand("verify", "Check a plan against an instance");
  verify->add_option("instance", v_inst, "Instance file")->required();
  verify->add_option("plan", v_plan, "Plan file")->required();
  verify->callback([&] {
    action = [&] {
      const Instance inst = read_instance(v_inst);
      const SupermarketPlan plan = read_plan(v_plan);
      PlanCheck c;
      try {
        c = verify_plan(inst, plan);
      } catch (const InvalidPlan& e) {
        c.ok = false;
        c.message = e.what();
      }
      if (c.ok) {
        out << "ok\n";
        return kExitYes;
      }
      out << "violation: " << c.message << "\n";
      return kExitNo;
    };
  });

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Exhaustive reference solvers for small instances");
  oracle->require_subcommand(1);
  std::string mc_inst;
  auto* min_chains = oracle->add_subcommand("min-chains", "Fewest supermarket chains by exhaustive search");
  min_chains->add_option("instance", mc_inst, "Instance file")->required();
  min_chains->callback([&] {
    action = [&] {
      const MinChainsResult r = brute_force_min_chains(read_instance(mc_inst));
      out << "k: " << r.k << "\n";
      for (const auto& g : r.groups) {
        out << "group:";
        for (int c : g) out << " " << c;
        out << "\n";
      }
      return kExitYes;
    };
  });
  std::string os_inst;
  auto* oracle_single = oracle->add_subcommand("single", "Single-chain satisfiability by exhaustive search");
  oracle_single->add_option("instance", os_inst, "Instance file")->required();
  oracle_single->callback([&] {
    action = [&] {
      const bool yes = brute_force_single(read_instance(os_inst)).has_value();
      out << (yes ? "yes" : "no") << "\n";
      return yes ? kExitYes : kExitNo;
    };
  });

  // render
  std::string r_inst;
  std::string r_plan;
  std::string r_out;
  SvgOptions svg;
  auto* render = app.add_subcommand("render", "Draw an instance, optionally with a plan, as SVG");
  render->add_option("instance", r_inst, "Instance file")->required();
  render->add_option("--plan", r_plan, "Plan file");
  render->add_option("-o,--output", r_out, "Output SVG file")->required();
  render->add_flag("--matching-edges", svg.matching_edges, "Connect stores to their supermarkets");
  render->add_option("--scale", svg.pixels_per_unit, "Pixels per unit (0 fits about 1000 px)");
  render->callback([&] {
    action = [&] {
      const Instance inst = read_instance(r_inst);
      std::optional<SupermarketPlan> plan;
      if (!r_plan.empty()) plan = read_plan(r_plan);
      detail::write_text(r_out, render_svg(inst, plan, svg));
      return kExitYes;
    };
  });

  // stats
  auto* stats = app.add_subcommand("stats", "Numerical experiments");
  stats->require_subcommand(1);
  long long trials = 20000;
  std::uint64_t st_seed = 1;
  bool exhaustive = false;
  auto* conflict = stats->add_subcommand("conflict-prob", "Chance that three pair choices in a city all differ");
  conflict->add_option("--trials", trials, "Number of trials")->capture_default_str();
  conflict->add_option("--seed", st_seed, "Random seed")->capture_default_str();
  conflict->add_flag("--exhaustive", exhaustive, "Cycle through all 27 placements instead of sampling");
  conflict->callback([&] {
    action = [&] {
      const ConflictEstimate e =
          estimate_conflict_probability(trials, st_seed, exhaustive ? ConflictMode::Exhaustive : ConflictMode::MonteCarlo);
      out << "conflicts: " << e.conflicts << "\ntrials: " << e.trials << "\nestimate: " << detail::num(e.value())
          << "\n";
      return kExitYes;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err) == 0 ? kExitYes : kExitError;
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err) == 0 ? kExitYes : kExitError;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return kExitError;
  }
  if (!action) {
    err << app.help();
    return kExitError;
  }
  try {
    return action();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

inline int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("rsp");
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli_dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace rsp
