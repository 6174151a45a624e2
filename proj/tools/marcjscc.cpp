#include <chrono>
#include <iostream>

#include "CLI11.hpp"
#include "jscc/measures.hpp"
#include "jscc/report.hpp"
#include "jscc/scenario.hpp"

namespace {

using nlohmann::json;
using namespace jscc;

json trace_json(const std::vector<TraceRow>& rows) {
  json arr = json::array();
  for (const auto& t : rows) arr.push_back(to_json(t));
  return arr;
}

Report run_info(const ScenarioFile& sc) {
  Report rep;
  rep.command = "info";
  const JointPmf& s = sc.source.pmf;
  json src;
  src["H_S1S2_bits"] = entropy(s, {"S1", "S2"});
  src["H_S1_bits"] = entropy(s, {"S1"});
  src["H_S2_bits"] = entropy(s, {"S2"});
  src["H_S1_given_S2_bits"] = conditional_entropy(s, {"S1"}, {"S2"});
  src["H_S2_given_S1_bits"] = conditional_entropy(s, {"S2"}, {"S1"});
  src["H_S1S2_given_W_bits"] = conditional_entropy(s, {"S1", "S2"}, {"W"});
  src["H_S1S2_given_W3_bits"] = conditional_entropy(s, {"S1", "S2"}, {"W3"});
  rep.results["source"] = src;
  rep.results["sizes"] = {{"s1", sc.source.s1_size()}, {"s2", sc.source.s2_size()},
                          {"w", sc.source.w_size()},   {"w3", sc.source.w3_size()},
                          {"x1", sc.channel.x1_size()}, {"x2", sc.channel.x2_size()},
                          {"x3", sc.channel.x3_size()}, {"y", sc.channel.y_size()},
                          {"y3", sc.channel.y3_size()}};
  rep.results["rate_hint"] = to_json(sw_rate_hint(sc.source));
  if (sc.channel.somarc) {
    rep.results["somarc"] = {{"yr_size", sc.channel.somarc->yr_size},
                             {"ys_size", sc.channel.somarc->ys_size}};
  }
  if (sc.has_chain && !sc.chain_optimize) {
    const JointPmf joint = assemble_scenario_joint(sc);
    rep.results["chain"] = {
        {"family", chain_family_name(sc.family)},
        {"I_X1X2X3_Y_bits", mutual_information(joint, {"X1", "X2", "X3"}, {"Y"})},
        {"I_X1X2_Y3_given_X3_bits",
         conditional_mutual_information(joint, {"X1", "X2"}, {"Y3"}, {"X3"})}};
  }
  return rep;
}

Report run_check(const ScenarioFile& sc, const std::string& scheme, OptBudget budget,
                 std::uint64_t seed, Exec ex) {
  Report rep;
  rep.command = "check";
  ConditionReport cr;
  if (sc.chain_optimize) {
    ChainFamily fam;
    Objective obj;
    if (scheme == "thm1") {
      fam = ChainFamily::thm1;
      obj = Objective::min_margin_thm1;
    } else if (scheme == "separation") {
      fam = ChainFamily::separation;
      obj = Objective::min_margin_thm1;
    } else if (scheme == "thm2") {
      fam = ChainFamily::thm2;
      obj = Objective::min_margin_thm2;
    } else {
      throw scenario_error(exit_command_mismatch,
                           "check --scheme " + scheme + " cannot drive chain optimization");
    }
    OptScenario os{sc.source, sc.channel, fam, sc.v1_size, sc.v2_size};
    OptResult r = optimize(os, obj, budget, seed, ex);
    rep.results["optimizer"] = to_json(r);
    cr = report_for_chain(os, obj, r.best_chain);
  } else {
    const JointPmf joint = assemble_scenario_joint(sc);
    try {
      if (scheme == "thm1") {
        cr = check_thm1(joint);
      } else if (scheme == "thm2") {
        cr = check_thm2(joint);
      } else if (scheme == "separation") {
        cr = check_separation(joint);
      } else if (scheme == "mac") {
        cr = check_mac_cover(joint);
      } else if (scheme == "crbc9") {
        cr = check_crbc(joint, CrbcStyle::pair_input);
      } else {
        cr = check_crbc(joint, CrbcStyle::source_conditioned);
      }
    } catch (const std::invalid_argument& e) {
      throw scenario_error(exit_command_mismatch, std::string("check: ") + e.what());
    }
  }
  rep.results["feasibility"] = to_json(cr);
  return rep;
}

Report run_bound(const ScenarioFile& sc, bool do_opt, double grid_step, OptBudget budget,
                 std::uint64_t seed, Exec ex) {
  if (!sc.channel.somarc || !somarc_factorizable(sc.channel)) {
    throw scenario_error(exit_command_mismatch,
                         "bound needs a channel with a factorizable somarc split");
  }
  Report rep;
  rep.command = "bound";
  OptScenario os{sc.source, sc.channel, ChainFamily::product_inputs, 1, 1};
  if (sc.chain_optimize) do_opt = true;

  ParamChain chain = uniform_chain(os);
  double value = evaluate_objective(os, Objective::somarc_bound, chain);
  if (do_opt) {
    OptResult r = optimize(os, Objective::somarc_bound, budget, seed, ex);
    rep.results["optimizer"] = to_json(r);
    if (r.best_value_bits > value) {
      value = r.best_value_bits;
      chain = r.best_chain;
    }
  }
  if (grid_step > 0.0) {
    GridResult g = grid_scan(os, Objective::somarc_bound, grid_step, 10'000'000, ex);
    rep.results["grid"] = to_json(g);
    if (g.best_value_bits > value) {
      value = g.best_value_bits;
      chain = g.best_chain;
    }
  }

  const SumBound sb =
      somarc_sum_bound_terms(sc.channel, chain.blocks[0], chain.blocks[1], chain.blocks[2]);
  const double h_src = entropy(sc.source.pmf, {"S1", "S2"});
  rep.results["sum_bound"] = to_json(sb);
  rep.results["inputs"] = {{"p_x1", chain.blocks[0]},
                           {"p_x2", chain.blocks[1]},
                           {"p_x3", chain.blocks[2]}};
  rep.results["joint_source_entropy_bits"] = h_src;
  rep.results["gap_bits"] = h_src - sb.bound_bits;
  const bool exceeds = h_src > sb.bound_bits + 1e-12;
  rep.results["source_exceeds_bound"] = exceeds;
  rep.results["verdict"] =
      exceeds ? "separation infeasible: H = " + fmt_bits(h_src) + " > " + fmt_bits(sb.bound_bits)
              : "separation not ruled out: H = " + fmt_bits(h_src) +
                    " <= " + fmt_bits(sb.bound_bits);
  return rep;
}

Report run_optimize(const ScenarioFile& sc, OptBudget budget, std::uint64_t seed,
                    double grid_step, Exec ex) {
  Report rep;
  rep.command = "optimize";
  const ChainFamily fam = sc.has_chain ? sc.family : ChainFamily::thm2;
  const Objective obj =
      fam == ChainFamily::thm2 ? Objective::min_margin_thm2 : Objective::min_margin_thm1;
  OptScenario os{sc.source, sc.channel, fam, sc.v1_size, sc.v2_size};
  OptResult r = optimize(os, obj, budget, seed, ex);
  rep.results["optimizer"] = to_json(r);
  rep.results["feasibility"] = to_json(report_for_chain(os, obj, r.best_chain));
  if (grid_step > 0.0) {
    rep.results["grid"] = to_json(grid_scan(os, obj, grid_step, 10'000'000, ex));
  }
  return rep;
}

Report run_simulate(const ScenarioFile& sc, const SimConfig& cfg, bool trace, Exec ex) {
  if (!sc.chain_thm2) {
    throw scenario_error(exit_command_mismatch,
                         "simulate needs thm2 chain tables (family thm2, not optimize)");
  }
  Report rep;
  rep.command = "simulate";
  std::vector<TraceRow> rows;
  SimReport sr;
  try {
    sr = run_thm2_sim(sc.source, *sc.chain_thm2, sc.channel, cfg, ex,
                      trace ? &rows : nullptr);
  } catch (const std::invalid_argument& e) {
    throw scenario_error(exit_command_mismatch, std::string("simulate: ") + e.what());
  }
  rep.results["sim"] = to_json(sr);
  rep.results["rate_hint"] = to_json(sw_rate_hint(sc.source));
  if (trace) rep.results["trace"] = trace_json(rows);
  return rep;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"feasibility conditions, cut-set bounds and Monte Carlo for relay-aided "
               "transmission of correlated sources"};
  app.require_subcommand(1);

  std::string path, format = "text", scheme = "thm2";
  bool serial = false, trace = false, do_opt = false, uncoded = false;
  std::uint64_t seed = 12345;
  OptBudget budget;
  double grid_step = 0.0;
  SimConfig fcfg;

  auto add_common = [&](CLI::App* sub, bool need_scenario = true) {
    auto* opt = sub->add_option("--scenario", path, "scenario file (JSON)");
    if (need_scenario) opt->required();
    sub->add_option("--format", format, "text | structured | csv")
        ->check(CLI::IsMember({"text", "structured", "csv"}));
    sub->add_flag("--serial", serial, "serial reference path instead of parallel");
  };
  auto add_opt_flags = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "optimizer seed");
    sub->add_option("--restarts", budget.restarts, "random restarts")->check(CLI::NonNegativeNumber);
    sub->add_option("--iters", budget.iters, "ascent iterations per start")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* c_info = app.add_subcommand("info", "entropies, sizes and rate hints");
  add_common(c_info);

  CLI::App* c_check = app.add_subcommand("check", "feasibility conditions of a scheme");
  add_common(c_check);
  c_check->add_option("--scheme", scheme, "thm1 | thm2 | separation | mac | crbc9 | crbc10")
      ->check(CLI::IsMember({"thm1", "thm2", "separation", "mac", "crbc9", "crbc10"}));
  add_opt_flags(c_check);

  CLI::App* c_bound = app.add_subcommand("bound", "semi-orthogonal cut-set sum bound");
  add_common(c_bound);
  add_opt_flags(c_bound);
  c_bound->add_flag("--optimize", do_opt, "maximize the bound over product inputs");
  c_bound->add_option("--grid-step", grid_step, "also scan the simplex grid with this step")
      ->check(CLI::Range(1e-3, 1.0));

  CLI::App* c_opt = app.add_subcommand("optimize", "maximize the scheme margin over chains");
  add_common(c_opt);
  add_opt_flags(c_opt);
  c_opt->add_option("--grid-step", grid_step, "also scan the simplex grid with this step")
      ->check(CLI::Range(1e-3, 1.0));

  CLI::App* c_sim = app.add_subcommand("simulate", "Monte Carlo of the block-Markov scheme");
  add_common(c_sim, /*need_scenario=*/false);
  c_sim->add_flag("--uncoded-cpm", uncoded,
                  "single-shot correlation-preserving map on the worked example");
  c_sim->add_option("--n", fcfg.n, "samples per block")->check(CLI::PositiveNumber);
  c_sim->add_option("--blocks", fcfg.blocks, "source blocks per session")
      ->check(CLI::PositiveNumber);
  c_sim->add_option("--rate1", fcfg.rate1, "binning rate, bits/sample");
  c_sim->add_option("--rate2", fcfg.rate2, "binning rate, bits/sample");
  c_sim->add_option("--epsilon", fcfg.epsilon, "typicality slack");
  c_sim->add_option("--trials", fcfg.trials, "sessions")->check(CLI::PositiveNumber);
  c_sim->add_option("--seed", seed, "session seed");
  c_sim->add_flag("--trace", trace, "include per-block decoder verdicts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? exit_ok : exit_bad_flags;
  }

  try {
    const auto t0 = std::chrono::steady_clock::now();
    const bool sim_uncoded = app.got_subcommand(c_sim) && uncoded;
    if (path.empty() && !sim_uncoded) {
      std::cerr << "error: simulate needs --scenario unless --uncoded-cpm is given\n";
      return exit_bad_flags;
    }
    const bool have_sc = !path.empty();
    ScenarioFile sc;
    if (have_sc) sc = parse_scenario(path);
    const Exec ex = serial ? Exec::serial : Exec::parallel;

    Report rep;
    json flags = {{"scenario", path}, {"format", format}, {"serial", serial}};
    if (app.got_subcommand(c_info)) {
      rep = run_info(sc);
    } else if (app.got_subcommand(c_check)) {
      rep = run_check(sc, scheme, budget, seed, ex);
      flags["scheme"] = scheme;
      flags["seed"] = seed;
      flags["restarts"] = budget.restarts;
      flags["iters"] = budget.iters;
    } else if (app.got_subcommand(c_bound)) {
      rep = run_bound(sc, do_opt, grid_step, budget, seed, ex);
      flags["optimize"] = do_opt || sc.chain_optimize;
      flags["grid_step"] = grid_step;
      flags["seed"] = seed;
      flags["restarts"] = budget.restarts;
      flags["iters"] = budget.iters;
    } else if (app.got_subcommand(c_opt)) {
      rep = run_optimize(sc, budget, seed, grid_step, ex);
      flags["grid_step"] = grid_step;
      flags["seed"] = seed;
      flags["restarts"] = budget.restarts;
      flags["iters"] = budget.iters;
    } else if (sim_uncoded) {
      std::int64_t tr = have_sc ? sc.sim.trials : fcfg.trials;
      std::uint64_t sd = have_sc ? sc.sim.seed : std::uint64_t{12345};
      if (c_sim->count("--trials")) tr = fcfg.trials;
      if (c_sim->count("--seed")) sd = seed;
      rep.command = "simulate";
      rep.results["uncoded"] = to_json(run_uncoded_cpm_somarc(tr, sd, ex));
      flags["uncoded_cpm"] = true;
      flags["trials"] = tr;
      flags["seed"] = sd;
    } else {
      SimConfig cfg = sc.sim;
      if (c_sim->count("--n")) cfg.n = fcfg.n;
      if (c_sim->count("--blocks")) cfg.blocks = fcfg.blocks;
      if (c_sim->count("--rate1")) cfg.rate1 = fcfg.rate1;
      if (c_sim->count("--rate2")) cfg.rate2 = fcfg.rate2;
      if (c_sim->count("--epsilon")) cfg.epsilon = fcfg.epsilon;
      if (c_sim->count("--trials")) cfg.trials = fcfg.trials;
      if (c_sim->count("--seed")) cfg.seed = seed;
      rep = run_simulate(sc, cfg, trace, ex);
      flags["n"] = cfg.n;
      flags["blocks"] = cfg.blocks;
      flags["rate1"] = cfg.rate1;
      flags["rate2"] = cfg.rate2;
      flags["epsilon"] = cfg.epsilon;
      flags["trials"] = cfg.trials;
      flags["seed"] = cfg.seed;
      flags["trace"] = trace;
    }
    rep.digest = have_sc ? scenario_digest(sc) : 0;
    rep.flags = flags;
    rep.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << emit(rep, format);
    return exit_ok;
  } catch (const scenario_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code();
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return exit_internal;
  }
}
