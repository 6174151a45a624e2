#include "jscc/measures.hpp"

#include <cmath>
#include <unordered_set>

namespace jscc {

namespace {

// Neumaier-compensated sum of -p*log2(p) over the tensor cells.
double entropy_of_tensor(const std::vector<double>& p) {
  double sum = 0.0, comp = 0.0;
  for (double x : p) {
    if (x <= 0.0) continue;  // 0 log 0 = 0
    const double term = -x * std::log2(x);
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term)) {
      comp += (sum - t) + term;
    } else {
      comp += (term - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

void check_disjoint(const VarList& a, const VarList& b, const char* what) {
  std::unordered_set<std::string> sa(a.begin(), a.end());
  for (const auto& name : b) {
    if (sa.count(name)) {
      throw std::invalid_argument(std::string(what) + ": variable '" + name +
                                  "' appears on both sides");
    }
  }
}

VarList concat(const VarList& a, const VarList& b) {
  VarList out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace

double entropy(const JointPmf& pmf, const VarList& targets) {
  if (targets.empty()) return 0.0;
  return entropy_of_tensor(marginalize(pmf, targets).probs());
}

double conditional_entropy(const JointPmf& pmf, const VarList& targets,
                           const VarList& given) {
  check_disjoint(targets, given, "conditional_entropy");
  if (targets.empty()) return 0.0;
  if (given.empty()) return entropy(pmf, targets);
  // H(T|G) = H(T,G) - H(G)
  return entropy(pmf, concat(targets, given)) - entropy(pmf, given);
}

double conditional_mutual_information(const JointPmf& pmf, const VarList& a,
                                      const VarList& b, const VarList& c) {
  check_disjoint(a, b, "conditional_mutual_information");
  check_disjoint(a, c, "conditional_mutual_information");
  check_disjoint(b, c, "conditional_mutual_information");
  // I(A;B|C) = H(A|C) - H(A|B,C)
  const double value =
      conditional_entropy(pmf, a, c) - conditional_entropy(pmf, a, concat(b, c));
  if (value < 0.0) {
    if (value < -mi_clamp_tol) {
      throw std::domain_error(
          "mutual information " + std::to_string(value) +
          " below -1e-12: inconsistent tensor or accumulation failure");
    }
    return 0.0;
  }
  return value;
}

double mutual_information(const JointPmf& pmf, const VarList& a, const VarList& b) {
  return conditional_mutual_information(pmf, a, b, {});
}

}  // namespace jscc
