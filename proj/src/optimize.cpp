#include "jscc/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "jscc/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace jscc {

std::string chain_family_name(ChainFamily f) {
  switch (f) {
    case ChainFamily::thm1: return "thm1";
    case ChainFamily::thm2: return "thm2";
    case ChainFamily::separation: return "separation";
    case ChainFamily::product_inputs: return "product_inputs";
  }
  return "?";
}

namespace {

constexpr double fd_step = 1e-5;
constexpr double min_step = 1e-8;
constexpr std::uint64_t vertex_enum_cap = 256;

struct Layout {
  // Consecutive runs of blocks form the factor tables, in family order.
  std::vector<int> dims;            // one simplex dimension per block
  std::vector<std::size_t> starts;  // first block of each factor
  std::vector<std::size_t> counts;  // rows per factor
};

Layout layout_for(const OptScenario& sc) {
  Layout lay;
  auto add_factor = [&lay](std::size_t rows, int dim) {
    lay.starts.push_back(lay.dims.size());
    lay.counts.push_back(rows);
    for (std::size_t r = 0; r < rows; ++r) lay.dims.push_back(dim);
  };
  const int s1 = sc.source.s1_size(), s2 = sc.source.s2_size();
  const int x1 = sc.channel.x1_size(), x2 = sc.channel.x2_size(), x3 = sc.channel.x3_size();
  switch (sc.family) {
    case ChainFamily::thm1:
      add_factor(1, sc.v1_size);
      add_factor(static_cast<std::size_t>(s1) * sc.v1_size, x1);
      add_factor(1, sc.v2_size);
      add_factor(static_cast<std::size_t>(s2) * sc.v2_size, x2);
      add_factor(static_cast<std::size_t>(sc.v1_size) * sc.v2_size, x3);
      break;
    case ChainFamily::thm2:
      add_factor(static_cast<std::size_t>(s1), x1);
      add_factor(static_cast<std::size_t>(s2), x2);
      add_factor(static_cast<std::size_t>(s1) * s2, x3);
      break;
    case ChainFamily::separation:
      add_factor(1, sc.v1_size);
      add_factor(static_cast<std::size_t>(sc.v1_size), x1);
      add_factor(1, sc.v2_size);
      add_factor(static_cast<std::size_t>(sc.v2_size), x2);
      add_factor(static_cast<std::size_t>(sc.v1_size) * sc.v2_size, x3);
      break;
    case ChainFamily::product_inputs:
      add_factor(1, x1);
      add_factor(1, x2);
      add_factor(1, x3);
      break;
  }
  return lay;
}

std::vector<std::vector<double>> factor_rows(const ParamChain& chain,
                                             const Layout& lay, std::size_t f) {
  std::vector<std::vector<double>> rows;
  rows.reserve(lay.counts[f]);
  for (std::size_t r = 0; r < lay.counts[f]; ++r) {
    rows.push_back(chain.blocks[lay.starts[f] + r]);
  }
  return rows;
}

double eval_blocks(const OptScenario& sc, Objective obj, const Layout& lay,
                   const ParamChain& chain) {
  const int s1 = sc.source.s1_size(), s2 = sc.source.s2_size();
  const int x1 = sc.channel.x1_size(), x2 = sc.channel.x2_size(), x3 = sc.channel.x3_size();
  switch (sc.family) {
    case ChainFamily::thm1: {
      InputChainThm1 chain1;
      chain1.p_v1 = JointPmf({Variable("V1", sc.v1_size)}, chain.blocks[lay.starts[0]]);
      chain1.x1_given_s1v1 = Kernel({Variable("S1", s1), Variable("V1", sc.v1_size)},
                                    {Variable("X1", x1)}, factor_rows(chain, lay, 1));
      chain1.p_v2 = JointPmf({Variable("V2", sc.v2_size)}, chain.blocks[lay.starts[2]]);
      chain1.x2_given_s2v2 = Kernel({Variable("S2", s2), Variable("V2", sc.v2_size)},
                                    {Variable("X2", x2)}, factor_rows(chain, lay, 3));
      chain1.x3_given_v1v2 = Kernel({Variable("V1", sc.v1_size), Variable("V2", sc.v2_size)},
                                    {Variable("X3", x3)}, factor_rows(chain, lay, 4));
      return check_thm1(assemble_joint(sc.source, chain1, sc.channel)).min_margin_bits;
    }
    case ChainFamily::thm2: {
      InputChainThm2 chain2;
      chain2.x1_given_s1 = Kernel({Variable("S1", s1)}, {Variable("X1", x1)},
                                  factor_rows(chain, lay, 0));
      chain2.x2_given_s2 = Kernel({Variable("S2", s2)}, {Variable("X2", x2)},
                                  factor_rows(chain, lay, 1));
      chain2.x3_given_s1s2 = Kernel({Variable("S1", s1), Variable("S2", s2)},
                                    {Variable("X3", x3)}, factor_rows(chain, lay, 2));
      return check_thm2(assemble_joint(sc.source, chain2, sc.channel)).min_margin_bits;
    }
    case ChainFamily::separation: {
      InputChainSeparation chs;
      chs.p_v1 = JointPmf({Variable("V1", sc.v1_size)}, chain.blocks[lay.starts[0]]);
      chs.x1_given_v1 = Kernel({Variable("V1", sc.v1_size)}, {Variable("X1", x1)},
                               factor_rows(chain, lay, 1));
      chs.p_v2 = JointPmf({Variable("V2", sc.v2_size)}, chain.blocks[lay.starts[2]]);
      chs.x2_given_v2 = Kernel({Variable("V2", sc.v2_size)}, {Variable("X2", x2)},
                               factor_rows(chain, lay, 3));
      chs.x3_given_v1v2 = Kernel({Variable("V1", sc.v1_size), Variable("V2", sc.v2_size)},
                                 {Variable("X3", x3)}, factor_rows(chain, lay, 4));
      return check_thm1(assemble_joint(sc.source, chs, sc.channel)).min_margin_bits;
    }
    case ChainFamily::product_inputs:
      return somarc_sum_bound(sc.channel, chain.blocks[lay.starts[0]],
                              chain.blocks[lay.starts[1]], chain.blocks[lay.starts[2]]);
  }
  throw std::logic_error("unreachable chain family");
}

void check_compat(const OptScenario& sc, Objective obj) {
  const bool ok =
      (obj == Objective::somarc_bound && sc.family == ChainFamily::product_inputs) ||
      (obj == Objective::min_margin_thm2 && sc.family == ChainFamily::thm2) ||
      (obj == Objective::min_margin_thm1 &&
       (sc.family == ChainFamily::thm1 || sc.family == ChainFamily::separation));
  if (!ok) throw std::invalid_argument("objective does not match the chain family");
}

// Euclidean projection onto the probability simplex.
void project_simplex(std::vector<double>& v) {
  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = 0.0, tau = 0.0;
  int rho = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    css += u[i];
    const double t = (css - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0.0) {
      rho = static_cast<int>(i + 1);
      tau = t;
    }
  }
  (void)rho;
  double sum = 0.0;
  for (double& x : v) {
    x = std::max(0.0, x - tau);
    sum += x;
  }
  for (double& x : v) x /= sum;  // absorb rounding so rows pass validation
}

using Point = std::vector<std::vector<double>>;

void project_point(Point& p) {
  for (auto& b : p) project_simplex(b);
}

struct Ascent {
  double value = 0.0;
  Point point;
  std::int64_t evals = 0;
};

Ascent ascend(const OptScenario& sc, Objective obj, const Layout& lay, Point start,
              int iters) {
  auto f = [&](const Point& p) {
    ParamChain c{sc.family, p};
    return eval_blocks(sc, obj, lay, c);
  };
  Ascent a;
  a.point = std::move(start);
  project_point(a.point);
  a.value = f(a.point);
  a.evals = 1;

  double step = 0.25;
  for (int it = 0; it < iters; ++it) {
    // Central differences along every coordinate, evaluated after projection
    // so candidates are always valid pmf rows.
    Point grad = a.point;
    double gnorm2 = 0.0;
    for (std::size_t b = 0; b < a.point.size(); ++b) {
      for (std::size_t i = 0; i < a.point[b].size(); ++i) {
        Point hi = a.point, lo = a.point;
        hi[b][i] += fd_step;
        lo[b][i] -= fd_step;
        project_simplex(hi[b]);
        project_simplex(lo[b]);
        const double d = (f(hi) - f(lo)) / (2.0 * fd_step);
        a.evals += 2;
        grad[b][i] = d;
        gnorm2 += d * d;
      }
    }
    if (gnorm2 <= 0.0) break;
    const double gnorm = std::sqrt(gnorm2);

    bool improved = false;
    for (double s = step; s >= min_step; s /= 2.0) {
      Point cand = a.point;
      for (std::size_t b = 0; b < cand.size(); ++b) {
        for (std::size_t i = 0; i < cand[b].size(); ++i) {
          cand[b][i] += s * grad[b][i] / gnorm;
        }
        project_simplex(cand[b]);
      }
      const double fc = f(cand);
      a.evals += 1;
      if (fc > a.value + 1e-15) {
        a.point = std::move(cand);
        a.value = fc;
        step = std::min(2.0 * s, 0.5);
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  return a;
}

Point dirichlet_point(const Layout& lay, std::uint64_t seed, int restart) {
  SplitMix rng(seed, 0xd1a1ULL + static_cast<std::uint64_t>(restart));
  Point p;
  for (int d : lay.dims) {
    std::vector<double> row(d);
    double sum = 0.0;
    for (double& x : row) {
      // -log U is Exp(1); normalized exponentials are Dirichlet(1).
      x = -std::log(std::max(rng.next_u01(), 1e-300));
      sum += x;
    }
    for (double& x : row) x /= sum;
    p.push_back(std::move(row));
  }
  return p;
}

std::vector<Point> start_points(const Layout& lay, const OptBudget& budget,
                                std::uint64_t seed) {
  std::vector<Point> starts;
  Point uniform;
  for (int d : lay.dims) uniform.emplace_back(d, 1.0 / d);
  starts.push_back(uniform);

  std::uint64_t combos = 1;
  for (int d : lay.dims) {
    combos *= static_cast<std::uint64_t>(d);
    if (combos > vertex_enum_cap) break;
  }
  if (combos <= vertex_enum_cap) {
    std::vector<int> pick(lay.dims.size(), 0);
    for (std::uint64_t c = 0; c < combos; ++c) {
      Point p;
      for (std::size_t b = 0; b < lay.dims.size(); ++b) {
        std::vector<double> row(lay.dims[b], 0.0);
        row[pick[b]] = 1.0;
        p.push_back(std::move(row));
      }
      starts.push_back(std::move(p));
      for (std::size_t b = lay.dims.size(); b-- > 0;) {
        if (++pick[b] < lay.dims[b]) break;
        pick[b] = 0;
      }
    }
  }
  for (int r = 0; r < budget.restarts; ++r) {
    starts.push_back(dirichlet_point(lay, seed, r));
  }
  return starts;
}

// Enumeration of all length-d nonnegative integer vectors summing to m,
// in lexicographic odometer order.
std::vector<std::vector<int>> compositions(int m, int d) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(d, 0);
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == d - 1) {
      cur[pos] = left;
      out.push_back(cur);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      cur[pos] = k;
      rec(pos + 1, left - k);
    }
  };
  if (d > 0) rec(0, m);
  return out;
}

}  // namespace

std::vector<int> block_dims(const OptScenario& sc) { return layout_for(sc).dims; }

ParamChain uniform_chain(const OptScenario& sc) {
  ParamChain c;
  c.family = sc.family;
  for (int d : layout_for(sc).dims) c.blocks.emplace_back(d, 1.0 / d);
  return c;
}

double evaluate_objective(const OptScenario& sc, Objective obj, const ParamChain& chain) {
  check_compat(sc, obj);
  const Layout lay = layout_for(sc);
  if (chain.family != sc.family || chain.blocks.size() != lay.dims.size()) {
    throw std::invalid_argument("parameter chain does not match the scenario layout");
  }
  for (std::size_t b = 0; b < chain.blocks.size(); ++b) {
    if (chain.blocks[b].size() != static_cast<std::size_t>(lay.dims[b])) {
      throw std::invalid_argument("parameter block " + std::to_string(b) + " has wrong width");
    }
  }
  return eval_blocks(sc, obj, lay, chain);
}

ConditionReport report_for_chain(const OptScenario& sc, Objective obj,
                                 const ParamChain& chain) {
  check_compat(sc, obj);
  if (obj == Objective::somarc_bound) {
    throw std::invalid_argument("sum-bound objective has no condition report");
  }
  const Layout lay = layout_for(sc);
  const int s1 = sc.source.s1_size(), s2 = sc.source.s2_size();
  const int x1 = sc.channel.x1_size(), x2 = sc.channel.x2_size(), x3 = sc.channel.x3_size();
  if (sc.family == ChainFamily::thm2) {
    InputChainThm2 c2;
    c2.x1_given_s1 = Kernel({Variable("S1", s1)}, {Variable("X1", x1)}, factor_rows(chain, lay, 0));
    c2.x2_given_s2 = Kernel({Variable("S2", s2)}, {Variable("X2", x2)}, factor_rows(chain, lay, 1));
    c2.x3_given_s1s2 = Kernel({Variable("S1", s1), Variable("S2", s2)}, {Variable("X3", x3)},
                              factor_rows(chain, lay, 2));
    return check_thm2(assemble_joint(sc.source, c2, sc.channel));
  }
  if (sc.family == ChainFamily::thm1) {
    InputChainThm1 c1;
    c1.p_v1 = JointPmf({Variable("V1", sc.v1_size)}, chain.blocks[lay.starts[0]]);
    c1.x1_given_s1v1 = Kernel({Variable("S1", s1), Variable("V1", sc.v1_size)},
                              {Variable("X1", x1)}, factor_rows(chain, lay, 1));
    c1.p_v2 = JointPmf({Variable("V2", sc.v2_size)}, chain.blocks[lay.starts[2]]);
    c1.x2_given_s2v2 = Kernel({Variable("S2", s2), Variable("V2", sc.v2_size)},
                              {Variable("X2", x2)}, factor_rows(chain, lay, 3));
    c1.x3_given_v1v2 = Kernel({Variable("V1", sc.v1_size), Variable("V2", sc.v2_size)},
                              {Variable("X3", x3)}, factor_rows(chain, lay, 4));
    return check_thm1(assemble_joint(sc.source, c1, sc.channel));
  }
  InputChainSeparation cs;
  cs.p_v1 = JointPmf({Variable("V1", sc.v1_size)}, chain.blocks[lay.starts[0]]);
  cs.x1_given_v1 = Kernel({Variable("V1", sc.v1_size)}, {Variable("X1", x1)},
                          factor_rows(chain, lay, 1));
  cs.p_v2 = JointPmf({Variable("V2", sc.v2_size)}, chain.blocks[lay.starts[2]]);
  cs.x2_given_v2 = Kernel({Variable("V2", sc.v2_size)}, {Variable("X2", x2)},
                          factor_rows(chain, lay, 3));
  cs.x3_given_v1v2 = Kernel({Variable("V1", sc.v1_size), Variable("V2", sc.v2_size)},
                            {Variable("X3", x3)}, factor_rows(chain, lay, 4));
  return check_separation(assemble_joint(sc.source, cs, sc.channel));
}

OptResult optimize(const OptScenario& sc, Objective obj, OptBudget budget,
                   std::uint64_t seed, Exec exec) {
  check_compat(sc, obj);
  const Layout lay = layout_for(sc);
  const std::vector<Point> starts = start_points(lay, budget, seed);
  const int n = static_cast<int>(starts.size());

  std::vector<Ascent> slots(n);
  const bool par = exec == Exec::parallel;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (par)
#endif
  for (int i = 0; i < n; ++i) {
    slots[i] = ascend(sc, obj, lay, starts[i], budget.iters);
  }
  (void)par;

  OptResult res;
  res.starts = n;
  int best = 0;
  for (int i = 0; i < n; ++i) {
    res.trace.push_back(slots[i].value);
    res.evaluations += slots[i].evals;
    if (slots[i].value > slots[best].value) best = i;
  }
  res.best_value_bits = slots[best].value;
  res.best_chain = ParamChain{sc.family, slots[best].point};
  return res;
}

GridResult grid_scan(const OptScenario& sc, Objective obj, double delta,
                     std::uint64_t cap, Exec exec) {
  check_compat(sc, obj);
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw std::invalid_argument("grid delta must lie in (0, 1]");
  }
  const Layout lay = layout_for(sc);
  const int m = std::max(1, static_cast<int>(std::lround(1.0 / delta)));

  std::vector<std::vector<std::vector<int>>> per_block;
  std::uint64_t total = 1;
  for (int d : lay.dims) {
    per_block.push_back(compositions(m, d));
    total *= per_block.back().size();
    if (total > cap) {
      throw std::invalid_argument("grid of " + std::to_string(total) +
                                  "+ points exceeds cap " + std::to_string(cap));
    }
  }

  auto point_at = [&](std::uint64_t idx) {
    Point p(lay.dims.size());
    for (std::size_t b = lay.dims.size(); b-- > 0;) {
      const std::uint64_t k = idx % per_block[b].size();
      idx /= per_block[b].size();
      std::vector<double> row(lay.dims[b]);
      for (int i = 0; i < lay.dims[b]; ++i) {
        row[i] = static_cast<double>(per_block[b][k][i]) / m;
      }
      p[b] = std::move(row);
    }
    return p;
  };

  const bool par = exec == Exec::parallel;
  double best_v = 0.0;
  std::uint64_t best_i = 0;
  bool have = false;
#ifdef _OPENMP
#pragma omp parallel if (par)
#endif
  {
    double loc_v = 0.0;
    std::uint64_t loc_i = 0;
    bool loc_have = false;
#ifdef _OPENMP
#pragma omp for schedule(dynamic, 64) nowait
#endif
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(total); ++i) {
      ParamChain c{sc.family, point_at(static_cast<std::uint64_t>(i))};
      const double v = eval_blocks(sc, obj, lay, c);
      if (!loc_have || v > loc_v || (v == loc_v && static_cast<std::uint64_t>(i) < loc_i)) {
        loc_v = v;
        loc_i = static_cast<std::uint64_t>(i);
        loc_have = true;
      }
    }
#ifdef _OPENMP
#pragma omp critical
#endif
    {
      if (loc_have &&
          (!have || loc_v > best_v || (loc_v == best_v && loc_i < best_i))) {
        best_v = loc_v;
        best_i = loc_i;
        have = true;
      }
    }
  }
  (void)par;

  GridResult g;
  g.points = total;
  g.best_value_bits = best_v;
  g.best_chain = ParamChain{sc.family, point_at(best_i)};
  return g;
}

}  // namespace jscc
