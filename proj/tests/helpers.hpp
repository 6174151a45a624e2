#pragma once

#include <sys/wait.h>

#include <cstdio>
#include <string>
#include <vector>

#include "jscc/network.hpp"
#include "jscc/rng.hpp"

namespace testutil {

// Runs a shell command, capturing stdout and the exit code.
struct CmdResult {
  int code = -1;
  std::string out;
};

inline CmdResult run_cmd(const std::string& cmd) {
  CmdResult r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t nread;
  while ((nread = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, nread);
  const int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

inline std::string cli_path() { return MARCJSCC_CLI_PATH; }
inline std::string scenario_path(const std::string& name) {
  return std::string(MARCJSCC_SCENARIO_DIR) + "/" + name;
}

// Random strictly positive pmf row.
inline std::vector<double> random_row(jscc::SplitMix& g, int width) {
  std::vector<double> r(width);
  double s = 0.0;
  for (double& x : r) {
    x = 0.05 + g.next_u01();
    s += x;
  }
  for (double& x : r) x /= s;
  return r;
}

inline std::vector<std::vector<double>> random_rows(jscc::SplitMix& g, int count, int width) {
  std::vector<std::vector<double>> rows;
  rows.reserve(count);
  for (int i = 0; i < count; ++i) rows.push_back(random_row(g, width));
  return rows;
}

inline jscc::SourceModel random_source(jscc::SplitMix& g, int s1, int s2, int w, int w3) {
  std::vector<jscc::Variable> vars = {{"S1", s1}, {"S2", s2}, {"W", w}, {"W3", w3}};
  return jscc::SourceModel(jscc::JointPmf(vars, random_row(g, s1 * s2 * w * w3)));
}

inline jscc::ChannelModel random_channel(jscc::SplitMix& g, int x1, int x2, int x3, int y,
                                         int y3) {
  jscc::Kernel k({{"X1", x1}, {"X2", x2}, {"X3", x3}}, {{"Y", y}, {"Y3", y3}},
                 random_rows(g, x1 * x2 * x3, y * y3));
  return jscc::ChannelModel(std::move(k));
}

inline jscc::InputChainThm2 random_thm2_chain(jscc::SplitMix& g, int s1, int s2, int x1,
                                              int x2, int x3) {
  return {jscc::Kernel({{"S1", s1}}, {{"X1", x1}}, random_rows(g, s1, x1)),
          jscc::Kernel({{"S2", s2}}, {{"X2", x2}}, random_rows(g, s2, x2)),
          jscc::Kernel({{"S1", s1}, {"S2", s2}}, {{"X3", x3}}, random_rows(g, s1 * s2, x3))};
}

inline jscc::InputChainThm1 random_thm1_chain(jscc::SplitMix& g, int s1, int s2, int v1,
                                              int v2, int x1, int x2, int x3) {
  return {jscc::JointPmf({{"V1", v1}}, random_row(g, v1)),
          jscc::JointPmf({{"V2", v2}}, random_row(g, v2)),
          jscc::Kernel({{"S1", s1}, {"V1", v1}}, {{"X1", x1}}, random_rows(g, s1 * v1, x1)),
          jscc::Kernel({{"S2", s2}, {"V2", v2}}, {{"X2", x2}}, random_rows(g, s2 * v2, x2)),
          jscc::Kernel({{"V1", v1}, {"V2", v2}}, {{"X3", x3}}, random_rows(g, v1 * v2, x3))};
}

// Random semi-orthogonal channel p(yr|x3) * p(ys,y3|x1,x2) with yr in {0,1},
// ys ternary, y3 binary and the packed output y = yr * 3 + ys.
inline jscc::ChannelModel random_somarc_channel(jscc::SplitMix& g) {
  const auto pr = random_rows(g, 2, 2);     // p(yr|x3)
  const auto ps = random_rows(g, 4, 6);     // p(ys,y3|x1,x2), row-major (ys,y3)
  std::vector<std::vector<double>> rows(8, std::vector<double>(12, 0.0));
  for (int x1 = 0; x1 < 2; ++x1)
    for (int x2 = 0; x2 < 2; ++x2)
      for (int x3 = 0; x3 < 2; ++x3) {
        auto& row = rows[(x1 * 2 + x2) * 2 + x3];
        for (int yr = 0; yr < 2; ++yr)
          for (int ys = 0; ys < 3; ++ys)
            for (int y3 = 0; y3 < 2; ++y3) {
              row[(yr * 3 + ys) * 2 + y3] = pr[x3][yr] * ps[x1 * 2 + x2][ys * 2 + y3];
            }
      }
  jscc::Kernel k({{"X1", 2}, {"X2", 2}, {"X3", 2}}, {{"Y", 6}, {"Y3", 2}}, std::move(rows));
  return jscc::ChannelModel(std::move(k), jscc::SomarcSplit{2, 3});
}

}  // namespace testutil
