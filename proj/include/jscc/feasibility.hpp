#pragma once

#include <string>

#include "jscc/measures.hpp"
#include "jscc/network.hpp"

namespace jscc {

// Margins within boundary_tol of zero are flagged and reported unsatisfied;
// the inequalities are strict.
inline constexpr double boundary_tol = 1e-12;

enum class Scheme { thm1, thm2, separation, mac_cover, crbc9, crbc10, prop1 };

std::string scheme_name(Scheme s);

// One strict inequality lhs < rhs, evaluated in bits exactly as printed (no
// algebraic simplification).
struct Condition {
  std::string id;
  double lhs_bits = 0.0;
  double rhs_bits = 0.0;
  double margin_bits = 0.0;  // rhs - lhs
  bool satisfied = false;    // margin > boundary_tol
  bool boundary = false;     // |margin| <= boundary_tol
};

struct ConditionReport {
  Scheme scheme = Scheme::thm1;
  std::vector<Condition> conditions;
  bool overall = false;
  double min_margin_bits = 0.0;
  std::string note;  // e.g. timesharing alphabet sizes used by the chain
};

// Decode-and-forward conditions with timesharing inputs: three relay
// constraints then three destination constraints, ids 2a-2f.
ConditionReport check_thm1(const JointPmf& joint);

// Decode-and-forward conditions with source-conditioned inputs, ids 5a-5f.
ConditionReport check_thm2(const JointPmf& joint);

// Same six expressions evaluated on a source-independent chain; throws if
// the joint correlates inputs with sources.
ConditionReport check_separation(const JointPmf& joint);

// Single-relay degenerate: ids mac1, mac2, mac12. Requires singleton
// V1, V2, X3, W3.
ConditionReport check_mac_cover(const JointPmf& joint);

enum class CrbcStyle { pair_input, source_conditioned };

// Single-source relay conditions: ids 9a/9b for the pair-input style
// (inputs independent of the source), 10a/10b for the source-conditioned
// style. Requires singleton S2, X2 and the matching chain family.
ConditionReport check_crbc(const JointPmf& joint, CrbcStyle style);

// Cut-set sum-rate ceiling for the semi-orthogonal channel at independent
// input marginals: min of the direct cut I(X1,X2;Y3,YS) and the cooperative
// cut I(X3;YR) + I(X1,X2;YS).
struct SumBound {
  double bound_bits = 0.0;
  double direct_cut_bits = 0.0;
  double coop_cut_bits = 0.0;
};

SumBound somarc_sum_bound_terms(const ChannelModel& ch,
                                const std::vector<double>& p_x1,
                                const std::vector<double>& p_x2,
                                const std::vector<double>& p_x3);

double somarc_sum_bound(const ChannelModel& ch, const std::vector<double>& p_x1,
                        const std::vector<double>& p_x2,
                        const std::vector<double>& p_x3);

}  // namespace jscc
