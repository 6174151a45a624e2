#pragma once

#include <functional>
#include <optional>

#include "jscc/pmf.hpp"

namespace jscc {

// Canonical variable names. Every assembled system joint orders its axes
// S1, S2, W, W3, V1, V2, X1, X2, X3, Y, Y3; absent variables are carried as
// singleton alphabets so one set of formulas covers every degenerate case.
inline const std::vector<std::string> canonical_order = {
    "S1", "S2", "W", "W3", "V1", "V2", "X1", "X2", "X3", "Y", "Y3"};

// Correlated source pair with receiver side information W and relay side
// information W3. The pmf covers exactly (S1, S2, W, W3) in that order.
struct SourceModel {
  JointPmf pmf;

  explicit SourceModel(JointPmf p);
  SourceModel() = default;

  int s1_size() const { return pmf.variables()[0].size; }
  int s2_size() const { return pmf.variables()[1].size; }
  int w_size() const { return pmf.variables()[2].size; }
  int w3_size() const { return pmf.variables()[3].size; }
};

// Destination output Y may be a packed pair (YR, YS) with symbol
// y = yr * ys_size + ys; the tags let SOMARC-specific formulas unpack it.
struct SomarcSplit {
  int yr_size = 0;
  int ys_size = 0;
};

// Memoryless channel p(y, y3 | x1, x2, x3). given order (X1, X2, X3),
// output order (Y, Y3).
struct ChannelModel {
  Kernel kernel;
  std::optional<SomarcSplit> somarc;

  ChannelModel() = default;
  ChannelModel(Kernel k, std::optional<SomarcSplit> split = std::nullopt);

  int x1_size() const { return kernel.given_vars()[0].size; }
  int x2_size() const { return kernel.given_vars()[1].size; }
  int x3_size() const { return kernel.given_vars()[2].size; }
  int y_size() const { return kernel.output_vars()[0].size; }
  int y3_size() const { return kernel.output_vars()[1].size; }
};

// Returns true when the channel factors as p(yr|x3) * p(ys, y3|x1, x2) within
// tol; requires the somarc split tags.
bool somarc_factorizable(const ChannelModel& ch, double tol = 1e-12);

// Input chain p(v1)p(x1|s1,v1)p(v2)p(x2|s2,v2)p(x3|v1,v2): timesharing
// variables plus source-dependent encoders.
struct InputChainThm1 {
  JointPmf p_v1;            // over V1
  JointPmf p_v2;            // over V2
  Kernel x1_given_s1v1;     // given (S1, V1) -> X1
  Kernel x2_given_s2v2;     // given (S2, V2) -> X2
  Kernel x3_given_v1v2;     // given (V1, V2) -> X3
};

// Input chain p(x1|s1)p(x2|s2)p(x3|s1,s2): no timesharing variables; the
// relay input tracks both sources.
struct InputChainThm2 {
  Kernel x1_given_s1;       // given (S1) -> X1
  Kernel x2_given_s2;       // given (S2) -> X2
  Kernel x3_given_s1s2;     // given (S1, S2) -> X3
};

// Source-independent inputs p(v1)p(x1|v1)p(v2)p(x2|v2)p(x3|v1,v2).
struct InputChainSeparation {
  JointPmf p_v1;
  JointPmf p_v2;
  Kernel x1_given_v1;
  Kernel x2_given_v2;
  Kernel x3_given_v1v2;
};

// Full system joint over canonical_order. Singleton V1, V2 for the Thm2
// chain. The (S1,S2,W,W3) marginal of the result equals the source pmf.
JointPmf assemble_joint(const SourceModel& src, const InputChainThm1& chain,
                        const ChannelModel& ch);
JointPmf assemble_joint(const SourceModel& src, const InputChainThm2& chain,
                        const ChannelModel& ch);
JointPmf assemble_joint(const SourceModel& src, const InputChainSeparation& chain,
                        const ChannelModel& ch);

// Replaces the packed Y axis by (YR, YS) axes using the somarc tags.
JointPmf split_somarc_output(const JointPmf& joint, const ChannelModel& ch);

// Builds a kernel whose outputs are deterministic functions of the given
// variables. maps[i](given_coords) must return a symbol for output i.
Kernel deterministic_kernel(
    const std::vector<Variable>& given, const std::vector<Variable>& outputs,
    const std::vector<std::function<int(const std::vector<int>&)>>& maps);

// The worked semi-orthogonal example: ternary-support correlated binary
// sources (both side informations absent) and the deterministic channel
// yr = x3, y3 = x1 xor x2, ys = x1 + x2 with Y packed as (YR, YS).
SourceModel somarc_example_source();
ChannelModel somarc_example_channel();

// The Thm2 chain x1 = s1, x2 = s2 with x3 pinned to symbol 0 of the
// channel's X3 alphabet. Requires matching source/input alphabet sizes.
InputChainThm2 cpm_identity_chain(const SourceModel& src, const ChannelModel& ch);

// Single-source specialization: S2 and X2 forced to singletons. The source
// keeps its S1, W, W3 statistics with S2 summed out; the channel is sliced
// at x2 = 0. Idempotent.
SourceModel crbc_specialize(const SourceModel& src);
ChannelModel crbc_specialize(const ChannelModel& ch);

// Wraps a joint input distribution p(x1, x3) (independent of the source) as
// a Thm1 chain via a timesharing variable enumerating the (x1, x3) pairs.
InputChainThm1 crbc_pair_chain(const SourceModel& src, const JointPmf& p_x1x3,
                               const ChannelModel& ch);

}  // namespace jscc
