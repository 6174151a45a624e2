#include "jscc/network.hpp"

#include <cmath>

namespace jscc {

namespace {

void require_names(const std::vector<Variable>& vars,
                   const std::vector<std::string>& names, const char* what) {
  if (vars.size() != names.size()) {
    throw std::invalid_argument(std::string(what) + ": expected " +
                                std::to_string(names.size()) + " variables");
  }
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (vars[i].name != names[i]) {
      throw std::invalid_argument(std::string(what) + ": variable " +
                                  std::to_string(i) + " must be named '" +
                                  names[i] + "', got '" + vars[i].name + "'");
    }
  }
}

Kernel pmf_as_kernel(const JointPmf& p, const std::string& name) {
  require_names(p.variables(), {name}, "timesharing pmf");
  return Kernel({}, p.variables(), {p.probs()});
}

Kernel singleton_kernel(const std::string& name) {
  return Kernel({}, {Variable(name, 1)}, {{1.0}});
}

}  // namespace

SourceModel::SourceModel(JointPmf p) : pmf(std::move(p)) {
  require_names(pmf.variables(), {"S1", "S2", "W", "W3"}, "source");
}

ChannelModel::ChannelModel(Kernel k, std::optional<SomarcSplit> split)
    : kernel(std::move(k)), somarc(split) {
  require_names(kernel.given_vars(), {"X1", "X2", "X3"}, "channel inputs");
  require_names(kernel.output_vars(), {"Y", "Y3"}, "channel outputs");
  if (somarc) {
    if (somarc->yr_size * somarc->ys_size != y_size()) {
      throw std::invalid_argument("somarc split sizes do not multiply to |Y|");
    }
    if (!somarc_factorizable(*this)) {
      throw std::domain_error("channel tagged somarc does not factor as p(yr|x3) p(ys,y3|x1,x2)");
    }
  }
}

bool somarc_factorizable(const ChannelModel& ch, double tol) {
  if (!ch.somarc) return false;
  const int nx1 = ch.x1_size(), nx2 = ch.x2_size(), nx3 = ch.x3_size();
  const int nyr = ch.somarc->yr_size, nys = ch.somarc->ys_size, ny3 = ch.y3_size();
  const auto& rows = ch.kernel.rows();
  auto row_of = [&](int x1, int x2, int x3) -> const std::vector<double>& {
    return rows[(static_cast<std::size_t>(x1) * nx2 + x2) * nx3 + x3];
  };
  auto cell = [&](const std::vector<double>& row, int yr, int ys, int y3) {
    return row[(static_cast<std::size_t>(yr) * nys + ys) * ny3 + y3];
  };

  // Candidate factors read off at fixed complementary inputs; the product
  // must then reproduce every row.
  std::vector<double> f(static_cast<std::size_t>(nx3) * nyr, 0.0);  // p(yr|x3)
  for (int x3 = 0; x3 < nx3; ++x3) {
    const auto& row = row_of(0, 0, x3);
    for (int yr = 0; yr < nyr; ++yr) {
      double s = 0.0;
      for (int ys = 0; ys < nys; ++ys)
        for (int y3 = 0; y3 < ny3; ++y3) s += cell(row, yr, ys, y3);
      f[static_cast<std::size_t>(x3) * nyr + yr] = s;
    }
  }
  std::vector<double> g(static_cast<std::size_t>(nx1) * nx2 * nys * ny3, 0.0);  // p(ys,y3|x1,x2)
  for (int x1 = 0; x1 < nx1; ++x1) {
    for (int x2 = 0; x2 < nx2; ++x2) {
      const auto& row = row_of(x1, x2, 0);
      for (int ys = 0; ys < nys; ++ys) {
        for (int y3 = 0; y3 < ny3; ++y3) {
          double s = 0.0;
          for (int yr = 0; yr < nyr; ++yr) s += cell(row, yr, ys, y3);
          g[((static_cast<std::size_t>(x1) * nx2 + x2) * nys + ys) * ny3 + y3] = s;
        }
      }
    }
  }
  for (int x1 = 0; x1 < nx1; ++x1)
    for (int x2 = 0; x2 < nx2; ++x2)
      for (int x3 = 0; x3 < nx3; ++x3) {
        const auto& row = row_of(x1, x2, x3);
        for (int yr = 0; yr < nyr; ++yr)
          for (int ys = 0; ys < nys; ++ys)
            for (int y3 = 0; y3 < ny3; ++y3) {
              const double want = f[static_cast<std::size_t>(x3) * nyr + yr] *
                                  g[((static_cast<std::size_t>(x1) * nx2 + x2) * nys + ys) * ny3 + y3];
              if (std::abs(cell(row, yr, ys, y3) - want) > tol) return false;
            }
      }
  return true;
}

JointPmf assemble_joint(const SourceModel& src, const InputChainThm1& chain,
                        const ChannelModel& ch) {
  JointPmf j = compose(src.pmf, pmf_as_kernel(chain.p_v1, "V1"));
  j = compose(j, pmf_as_kernel(chain.p_v2, "V2"));
  j = compose(j, chain.x1_given_s1v1);
  j = compose(j, chain.x2_given_s2v2);
  j = compose(j, chain.x3_given_v1v2);
  return compose(j, ch.kernel);
}

JointPmf assemble_joint(const SourceModel& src, const InputChainThm2& chain,
                        const ChannelModel& ch) {
  JointPmf j = compose(src.pmf, singleton_kernel("V1"));
  j = compose(j, singleton_kernel("V2"));
  j = compose(j, chain.x1_given_s1);
  j = compose(j, chain.x2_given_s2);
  j = compose(j, chain.x3_given_s1s2);
  return compose(j, ch.kernel);
}

JointPmf assemble_joint(const SourceModel& src, const InputChainSeparation& chain,
                        const ChannelModel& ch) {
  JointPmf j = compose(src.pmf, pmf_as_kernel(chain.p_v1, "V1"));
  j = compose(j, pmf_as_kernel(chain.p_v2, "V2"));
  j = compose(j, chain.x1_given_v1);
  j = compose(j, chain.x2_given_v2);
  j = compose(j, chain.x3_given_v1v2);
  return compose(j, ch.kernel);
}

JointPmf split_somarc_output(const JointPmf& joint, const ChannelModel& ch) {
  if (!ch.somarc) throw std::invalid_argument("channel has no somarc split tags");
  return split_variable(joint, "Y", Variable("YR", ch.somarc->yr_size),
                        Variable("YS", ch.somarc->ys_size));
}

Kernel deterministic_kernel(
    const std::vector<Variable>& given, const std::vector<Variable>& outputs,
    const std::vector<std::function<int(const std::vector<int>&)>>& maps) {
  if (maps.size() != outputs.size()) {
    throw std::invalid_argument("deterministic_kernel: one map per output required");
  }
  std::size_t nrows = 1;
  for (const auto& v : given) nrows *= static_cast<std::size_t>(v.size);
  std::size_t ncols = 1;
  for (const auto& v : outputs) ncols *= static_cast<std::size_t>(v.size);

  std::vector<std::vector<double>> rows(nrows, std::vector<double>(ncols, 0.0));
  std::vector<int> coords(given.size(), 0);
  for (std::size_t r = 0; r < nrows; ++r) {
    std::size_t col = 0;
    for (std::size_t o = 0; o < outputs.size(); ++o) {
      const int sym = maps[o](coords);
      if (sym < 0 || sym >= outputs[o].size) {
        throw std::invalid_argument("deterministic_kernel: map value out of range for '" +
                                    outputs[o].name + "'");
      }
      col = col * static_cast<std::size_t>(outputs[o].size) + static_cast<std::size_t>(sym);
    }
    rows[r][col] = 1.0;
    for (std::size_t ax = given.size(); ax-- > 0;) {
      if (++coords[ax] < given[ax].size) break;
      coords[ax] = 0;
    }
  }
  return Kernel(given, outputs, std::move(rows));
}

SourceModel somarc_example_source() {
  // (S1,S2) uniform on {(0,0),(0,1),(1,1)}; no side information.
  const double third = 1.0 / 3.0;
  return SourceModel(JointPmf(
      {Variable("S1", 2), Variable("S2", 2), Variable("W", 1), Variable("W3", 1)},
      {third, third, 0.0, third}));
}

ChannelModel somarc_example_channel() {
  // yr = x3, y3 = x1 xor x2, ys = x1 + x2; Y packs (yr, ys) as yr*3 + ys.
  const std::vector<Variable> in = {Variable("X1", 2), Variable("X2", 2), Variable("X3", 2)};
  const std::vector<Variable> out = {Variable("Y", 6), Variable("Y3", 2)};
  auto y_map = [](const std::vector<int>& x) { return x[2] * 3 + (x[0] + x[1]); };
  auto y3_map = [](const std::vector<int>& x) { return x[0] ^ x[1]; };
  return ChannelModel(deterministic_kernel(in, out, {y_map, y3_map}), SomarcSplit{2, 3});
}

InputChainThm2 cpm_identity_chain(const SourceModel& src, const ChannelModel& ch) {
  if (ch.x1_size() != src.s1_size() || ch.x2_size() != src.s2_size()) {
    throw std::invalid_argument("cpm_identity_chain: input alphabets must match source alphabets");
  }
  auto ident = [](const std::vector<int>& c) { return c[0]; };
  auto zero = [](const std::vector<int>&) { return 0; };
  InputChainThm2 chain;
  chain.x1_given_s1 = deterministic_kernel({Variable("S1", src.s1_size())},
                                           {Variable("X1", ch.x1_size())}, {ident});
  chain.x2_given_s2 = deterministic_kernel({Variable("S2", src.s2_size())},
                                           {Variable("X2", ch.x2_size())}, {ident});
  chain.x3_given_s1s2 = deterministic_kernel(
      {Variable("S1", src.s1_size()), Variable("S2", src.s2_size())},
      {Variable("X3", ch.x3_size())}, {zero});
  return chain;
}

SourceModel crbc_specialize(const SourceModel& src) {
  JointPmf marg = marginalize(src.pmf, {"S1", "W", "W3"});
  // Reinsert S2 as a singleton axis; with |S2| = 1 the row-major layout is
  // unchanged, so the tensor carries over as-is.
  std::vector<Variable> vars = {marg.variables()[0], Variable("S2", 1),
                                marg.variables()[1], marg.variables()[2]};
  return SourceModel(JointPmf(std::move(vars), marg.probs()));
}

ChannelModel crbc_specialize(const ChannelModel& ch) {
  const int nx1 = ch.x1_size(), nx2 = ch.x2_size(), nx3 = ch.x3_size();
  std::vector<std::vector<double>> rows;
  rows.reserve(static_cast<std::size_t>(nx1) * nx3);
  for (int x1 = 0; x1 < nx1; ++x1) {
    for (int x3 = 0; x3 < nx3; ++x3) {
      // x2 pinned to 0.
      rows.push_back(ch.kernel.rows()[(static_cast<std::size_t>(x1) * nx2 + 0) * nx3 + x3]);
    }
  }
  Kernel k({Variable("X1", nx1), Variable("X2", 1), Variable("X3", nx3)},
           ch.kernel.output_vars(), std::move(rows));
  return ChannelModel(std::move(k), ch.somarc);
}

InputChainThm1 crbc_pair_chain(const SourceModel& src, const JointPmf& p_x1x3,
                               const ChannelModel& ch) {
  require_names(p_x1x3.variables(), {"X1", "X3"}, "crbc pair distribution");
  const int nx1 = p_x1x3.variables()[0].size;
  const int nx3 = p_x1x3.variables()[1].size;
  if (nx1 != ch.x1_size() || nx3 != ch.x3_size()) {
    throw std::invalid_argument("crbc_pair_chain: pair alphabets must match the channel");
  }
  if (ch.x2_size() != 1 || src.s2_size() != 1) {
    throw std::invalid_argument("crbc_pair_chain: expects a single-source specialized model");
  }
  InputChainThm1 chain;
  // V1 enumerates (x1, x3) pairs; both inputs are then read off it.
  chain.p_v1 = JointPmf({Variable("V1", nx1 * nx3)}, p_x1x3.probs());
  chain.p_v2 = JointPmf({Variable("V2", 1)}, {1.0});
  auto pick_x1 = [nx3](const std::vector<int>& c) { return c[1] / nx3; };
  auto pick_x3 = [nx3](const std::vector<int>& c) { return c[0] % nx3; };
  auto zero = [](const std::vector<int>&) { return 0; };
  chain.x1_given_s1v1 = deterministic_kernel(
      {Variable("S1", src.s1_size()), Variable("V1", nx1 * nx3)},
      {Variable("X1", nx1)}, {pick_x1});
  chain.x2_given_s2v2 = deterministic_kernel(
      {Variable("S2", 1), Variable("V2", 1)}, {Variable("X2", 1)}, {zero});
  chain.x3_given_v1v2 = deterministic_kernel(
      {Variable("V1", nx1 * nx3), Variable("V2", 1)}, {Variable("X3", nx3)}, {pick_x3});
  return chain;
}

}  // namespace jscc
