#pragma once

#include <cstdint>

#include "jscc/feasibility.hpp"
#include "jscc/network.hpp"

namespace jscc {

// Execution policy for the data-parallel loops (restarts, grid points,
// sessions). Serial is the reference path; parallel must match it
// bit-for-bit because work is written to per-index slots and reduced in a
// fixed order.
enum class Exec { serial, parallel };

enum class ChainFamily { thm1, thm2, separation, product_inputs };

std::string chain_family_name(ChainFamily f);

enum class Objective { min_margin_thm1, min_margin_thm2, somarc_bound };

// What the objective is evaluated against. v1/v2 sizes fix the timesharing
// alphabets for the thm1/separation families.
struct OptScenario {
  SourceModel source;
  ChannelModel channel;
  ChainFamily family = ChainFamily::thm2;
  int v1_size = 2;
  int v2_size = 2;
};

// Free parameters: one probability simplex per conditional-pmf row, in the
// fixed layout given by block_dims().
struct ParamChain {
  ChainFamily family = ChainFamily::thm2;
  std::vector<std::vector<double>> blocks;
};

// Simplex dimensions, in layout order, for the scenario's family.
std::vector<int> block_dims(const OptScenario& sc);

// Uniform rows in the scenario layout.
ParamChain uniform_chain(const OptScenario& sc);

// Objective value in bits (a min-margin, or the sum bound). Throws on a
// family/objective mismatch or a layout mismatch.
double evaluate_objective(const OptScenario& sc, Objective obj, const ParamChain& chain);

// Condition report for the chain under the matching checker (not defined for
// somarc_bound).
ConditionReport report_for_chain(const OptScenario& sc, Objective obj,
                                 const ParamChain& chain);

struct OptBudget {
  int restarts = 12;  // Dirichlet(1) starts, in addition to uniform + vertices
  int iters = 150;    // ascent iterations per start
};

struct OptResult {
  double best_value_bits = 0.0;
  ParamChain best_chain;
  std::vector<double> trace;  // best value reached by each start, start order
  std::int64_t evaluations = 0;
  int starts = 0;
};

// Deterministic multi-start ascent: finite-difference gradients on the
// simplex blocks, backtracking steps with projection, ties between starts
// broken by start index. Identical output for both Exec policies.
OptResult optimize(const OptScenario& sc, Objective obj, OptBudget budget,
                   std::uint64_t seed, Exec exec = Exec::parallel);

struct GridResult {
  double best_value_bits = 0.0;
  ParamChain best_chain;
  std::uint64_t points = 0;
};

// Exhaustive scan of the delta-spaced simplex grid (coordinates are
// multiples of delta). Throws when the grid would exceed cap points. Ties
// broken by the first point in odometer order.
GridResult grid_scan(const OptScenario& sc, Objective obj, double delta,
                     std::uint64_t cap = 10'000'000, Exec exec = Exec::parallel);

}  // namespace jscc
