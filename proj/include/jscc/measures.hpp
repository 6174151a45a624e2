#pragma once

#include "jscc/pmf.hpp"

namespace jscc {

// Information measures in bits (log base 2), computed exactly from dense
// tensors with the convention 0*log(0) = 0. Entropy sums use compensated
// accumulation so the mutual-information clamp below is meaningful.

// Mutual informations in [-mi_clamp_tol, 0) report as exactly 0; anything
// below -mi_clamp_tol is an internal-consistency failure and throws.
inline constexpr double mi_clamp_tol = 1e-12;

using VarList = std::vector<std::string>;

// H(targets) in bits.
double entropy(const JointPmf& pmf, const VarList& targets);

// H(targets | given) in bits. The two lists must be disjoint.
double conditional_entropy(const JointPmf& pmf, const VarList& targets,
                           const VarList& given);

// I(a ; b | c) in bits. The three lists must be pairwise disjoint.
double conditional_mutual_information(const JointPmf& pmf, const VarList& a,
                                      const VarList& b, const VarList& c);

double mutual_information(const JointPmf& pmf, const VarList& a, const VarList& b);

}  // namespace jscc
