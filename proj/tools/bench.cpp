// Timing harness for the data-parallel kernels: grid scan, multi-start
// ascent, and Monte Carlo sessions, each run on the serial reference path
// and the OpenMP path. The two paths must produce identical numbers; a
// mismatch is reported and fails the run.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "jscc/network.hpp"
#include "jscc/optimize.hpp"
#include "jscc/sim.hpp"

using namespace jscc;

namespace {

double timed(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int failures = 0;

void row(const std::string& name, double serial_s, double parallel_s, bool match) {
  std::printf("%-22s %10.3fs %10.3fs %8.2fx   %s\n", name.c_str(), serial_s, parallel_s,
              serial_s / parallel_s, match ? "match" : "MISMATCH");
  if (!match) ++failures;
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("omp threads: %d\n", omp_get_max_threads());
#else
  std::printf("omp threads: (no OpenMP; both paths serial)\n");
#endif
  std::printf("%-22s %11s %11s %9s\n", "kernel", "serial", "parallel", "speedup");

  const SourceModel src = somarc_example_source();
  const ChannelModel ch = somarc_example_channel();

  {
    OptScenario sc{src, ch, ChainFamily::product_inputs, 1, 1};
    GridResult gs, gp;
    const double ts = timed([&] { gs = grid_scan(sc, Objective::somarc_bound, 0.02, 10'000'000, Exec::serial); });
    const double tp = timed([&] { gp = grid_scan(sc, Objective::somarc_bound, 0.02, 10'000'000, Exec::parallel); });
    row("grid_scan d=0.02", ts, tp,
        gs.best_value_bits == gp.best_value_bits && gs.best_chain.blocks == gp.best_chain.blocks);
  }

  {
    OptScenario sc{src, ch, ChainFamily::thm2, 1, 1};
    OptBudget budget{24, 150};
    OptResult os, op;
    const double ts = timed([&] { os = optimize(sc, Objective::min_margin_thm2, budget, 7, Exec::serial); });
    const double tp = timed([&] { op = optimize(sc, Objective::min_margin_thm2, budget, 7, Exec::parallel); });
    row("optimize 24 starts", ts, tp,
        os.best_value_bits == op.best_value_bits && os.trace == op.trace);
  }

  {
    const InputChainThm2 chain = cpm_identity_chain(src, ch);
    SimConfig cfg;
    cfg.n = 10;
    cfg.blocks = 2;
    cfg.rate1 = 0.7;
    cfg.rate2 = 0.7;
    cfg.epsilon = 64.0;
    cfg.trials = 60;
    cfg.seed = 99;
    SimReport rs, rp;
    const double ts = timed([&] { rs = run_thm2_sim(src, chain, ch, cfg, Exec::serial); });
    const double tp = timed([&] { rp = run_thm2_sim(src, chain, ch, cfg, Exec::parallel); });
    row("simulate 60 sessions", ts, tp,
        rs.session_errors == rp.session_errors &&
            rs.relay_block_errors == rp.relay_block_errors &&
            rs.dest_block_errors == rp.dest_block_errors);
  }

  if (failures > 0) {
    std::printf("%d kernel(s) disagreed between paths\n", failures);
    return 1;
  }
  return 0;
}
