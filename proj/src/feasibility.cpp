#include "jscc/feasibility.hpp"

#include <cmath>

namespace jscc {

namespace {

Condition make_condition(std::string id, double lhs, double rhs) {
  Condition c;
  c.id = std::move(id);
  c.lhs_bits = lhs;
  c.rhs_bits = rhs;
  c.margin_bits = rhs - lhs;
  c.boundary = std::abs(c.margin_bits) <= boundary_tol;
  c.satisfied = c.margin_bits > boundary_tol;
  return c;
}

ConditionReport finish(Scheme scheme, std::vector<Condition> conds, std::string note = "") {
  ConditionReport r;
  r.scheme = scheme;
  r.conditions = std::move(conds);
  r.overall = true;
  r.min_margin_bits = r.conditions.empty() ? 0.0 : r.conditions.front().margin_bits;
  for (const auto& c : r.conditions) {
    r.overall = r.overall && c.satisfied;
    r.min_margin_bits = std::min(r.min_margin_bits, c.margin_bits);
  }
  r.note = std::move(note);
  return r;
}

void require_vars(const JointPmf& joint, std::initializer_list<const char*> names) {
  for (const char* n : names) {
    if (!joint.has_variable(n)) {
      throw std::invalid_argument(std::string("joint is missing variable '") + n + "'");
    }
  }
}

int var_size(const JointPmf& joint, const std::string& name) {
  return joint.variables()[joint.var_index(name)].size;
}

std::string timesharing_note(const JointPmf& joint) {
  return "timesharing alphabets |V1|=" + std::to_string(var_size(joint, "V1")) +
         ", |V2|=" + std::to_string(var_size(joint, "V2")) +
         " (fixed by the chain, not searched beyond it)";
}

}  // namespace

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::thm1: return "thm1";
    case Scheme::thm2: return "thm2";
    case Scheme::separation: return "separation";
    case Scheme::mac_cover: return "mac";
    case Scheme::crbc9: return "crbc9";
    case Scheme::crbc10: return "crbc10";
    case Scheme::prop1: return "prop1";
  }
  return "?";
}

ConditionReport check_thm1(const JointPmf& joint) {
  require_vars(joint, {"S1", "S2", "W", "W3", "V1", "V2", "X1", "X2", "X3", "Y", "Y3"});
  std::vector<Condition> c;
  c.push_back(make_condition(
      "2a", conditional_entropy(joint, {"S1"}, {"S2", "W3"}),
      conditional_mutual_information(joint, {"X1"}, {"Y3"}, {"S2", "X2", "V1", "X3", "W3"})));
  c.push_back(make_condition(
      "2b", conditional_entropy(joint, {"S2"}, {"S1", "W3"}),
      conditional_mutual_information(joint, {"X2"}, {"Y3"}, {"S1", "X1", "V2", "X3", "W3"})));
  c.push_back(make_condition(
      "2c", conditional_entropy(joint, {"S1", "S2"}, {"W3"}),
      conditional_mutual_information(joint, {"X1", "X2"}, {"Y3"}, {"V1", "V2", "X3", "W3"})));
  c.push_back(make_condition(
      "2d", conditional_entropy(joint, {"S1"}, {"S2", "W"}),
      conditional_mutual_information(joint, {"X1", "X3"}, {"Y"}, {"S1", "X2", "V2"})));
  c.push_back(make_condition(
      "2e", conditional_entropy(joint, {"S2"}, {"S1", "W"}),
      conditional_mutual_information(joint, {"X2", "X3"}, {"Y"}, {"S2", "X1", "V1"})));
  c.push_back(make_condition(
      "2f", conditional_entropy(joint, {"S1", "S2"}, {"W"}),
      conditional_mutual_information(joint, {"X1", "X2", "X3"}, {"Y"}, {"S1", "S2"})));
  return finish(Scheme::thm1, std::move(c), timesharing_note(joint));
}

ConditionReport check_thm2(const JointPmf& joint) {
  require_vars(joint, {"S1", "S2", "W", "W3", "X1", "X2", "X3", "Y", "Y3"});
  std::vector<Condition> c;
  c.push_back(make_condition(
      "5a", conditional_entropy(joint, {"S1"}, {"S2", "W3"}),
      conditional_mutual_information(joint, {"X1"}, {"Y3"}, {"S1", "X2", "X3"})));
  c.push_back(make_condition(
      "5b", conditional_entropy(joint, {"S2"}, {"S1", "W3"}),
      conditional_mutual_information(joint, {"X2"}, {"Y3"}, {"S2", "X1", "X3"})));
  c.push_back(make_condition(
      "5c", conditional_entropy(joint, {"S1", "S2"}, {"W3"}),
      conditional_mutual_information(joint, {"X1", "X2"}, {"Y3"}, {"S1", "S2", "X3"})));
  c.push_back(make_condition(
      "5d", conditional_entropy(joint, {"S1"}, {"S2", "W"}),
      conditional_mutual_information(joint, {"X1", "X3"}, {"Y"}, {"S2", "X2", "W"})));
  c.push_back(make_condition(
      "5e", conditional_entropy(joint, {"S2"}, {"S1", "W"}),
      conditional_mutual_information(joint, {"X2", "X3"}, {"Y"}, {"S1", "X1", "W"})));
  c.push_back(make_condition(
      "5f", conditional_entropy(joint, {"S1", "S2"}, {"W"}),
      conditional_mutual_information(joint, {"X1", "X2", "X3"}, {"Y"}, {"W"})));
  return finish(Scheme::thm2, std::move(c));
}

ConditionReport check_separation(const JointPmf& joint) {
  require_vars(joint, {"S1", "S2", "W", "W3", "V1", "V2", "X1", "X2", "X3", "Y", "Y3"});
  const double leak = conditional_mutual_information(
      joint, {"V1", "V2", "X1", "X2", "X3"}, {"S1", "S2", "W", "W3"}, {});
  if (leak > 1e-10) {
    throw std::invalid_argument(
        "separation check requires a source-independent chain; inputs leak " +
        std::to_string(leak) + " bits about the sources");
  }
  ConditionReport r = check_thm1(joint);
  r.scheme = Scheme::separation;
  return r;
}

ConditionReport check_mac_cover(const JointPmf& joint) {
  require_vars(joint, {"S1", "S2", "X1", "X2", "Y3"});
  for (const char* n : {"V1", "V2", "X3", "W3"}) {
    if (joint.has_variable(n) && var_size(joint, n) != 1) {
      throw std::invalid_argument(std::string("mac check requires singleton '") + n + "'");
    }
  }
  std::vector<Condition> c;
  c.push_back(make_condition(
      "mac1", conditional_entropy(joint, {"S1"}, {"S2"}),
      conditional_mutual_information(joint, {"X1"}, {"Y3"}, {"S2", "X2"})));
  c.push_back(make_condition(
      "mac2", conditional_entropy(joint, {"S2"}, {"S1"}),
      conditional_mutual_information(joint, {"X2"}, {"Y3"}, {"S1", "X1"})));
  c.push_back(make_condition(
      "mac12", entropy(joint, {"S1", "S2"}),
      mutual_information(joint, {"X1", "X2"}, {"Y3"})));
  return finish(Scheme::mac_cover, std::move(c));
}

ConditionReport check_crbc(const JointPmf& joint, CrbcStyle style) {
  require_vars(joint, {"S1", "S2", "W", "W3", "X1", "X2", "X3", "Y", "Y3"});
  if (var_size(joint, "S2") != 1 || var_size(joint, "X2") != 1) {
    throw std::invalid_argument("crbc check requires singleton S2 and X2");
  }
  if (style == CrbcStyle::pair_input) {
    const double leak = conditional_mutual_information(
        joint, {"X1", "X3"}, {"S1", "W", "W3"}, {});
    if (leak > 1e-9) {
      throw std::invalid_argument(
          "crbc pair-input style requires (X1,X3) independent of the source; leak " +
          std::to_string(leak) + " bits");
    }
    std::vector<Condition> c;
    c.push_back(make_condition(
        "9a", conditional_entropy(joint, {"S1"}, {"W3"}),
        conditional_mutual_information(joint, {"X1"}, {"Y3"}, {"X3"})));
    c.push_back(make_condition(
        "9b", conditional_entropy(joint, {"S1"}, {"W"}),
        mutual_information(joint, {"X1", "X3"}, {"Y"})));
    return finish(Scheme::crbc9, std::move(c));
  }
  const double cross = conditional_mutual_information(joint, {"X1"}, {"X3"}, {"S1"});
  const double leak =
      conditional_mutual_information(joint, {"X1", "X3"}, {"W", "W3"}, {"S1"});
  if (cross > 1e-9 || leak > 1e-9) {
    throw std::invalid_argument(
        "crbc source-conditioned style requires the chain p(x1|s1) p(x3|s1)");
  }
  std::vector<Condition> c;
  c.push_back(make_condition(
      "10a", conditional_entropy(joint, {"S1"}, {"W3"}),
      conditional_mutual_information(joint, {"X1"}, {"Y3"}, {"X3", "S1"})));
  c.push_back(make_condition(
      "10b", conditional_entropy(joint, {"S1"}, {"W"}),
      conditional_mutual_information(joint, {"X1", "X3"}, {"Y"}, {"W"})));
  return finish(Scheme::crbc10, std::move(c));
}

SumBound somarc_sum_bound_terms(const ChannelModel& ch,
                                const std::vector<double>& p_x1,
                                const std::vector<double>& p_x2,
                                const std::vector<double>& p_x3) {
  if (!ch.somarc || !somarc_factorizable(ch)) {
    throw std::invalid_argument("sum bound requires a somarc-factorizable channel");
  }
  JointPmf j({Variable("X1", ch.x1_size())}, p_x1);
  j = compose(j, Kernel({}, {Variable("X2", ch.x2_size())}, {p_x2}));
  j = compose(j, Kernel({}, {Variable("X3", ch.x3_size())}, {p_x3}));
  j = compose(j, ch.kernel);
  j = split_somarc_output(j, ch);

  SumBound b;
  b.direct_cut_bits = mutual_information(j, {"X1", "X2"}, {"Y3", "YS"});
  b.coop_cut_bits = mutual_information(j, {"X3"}, {"YR"}) +
                    mutual_information(j, {"X1", "X2"}, {"YS"});
  b.bound_bits = std::min(b.direct_cut_bits, b.coop_cut_bits);
  return b;
}

double somarc_sum_bound(const ChannelModel& ch, const std::vector<double>& p_x1,
                        const std::vector<double>& p_x2,
                        const std::vector<double>& p_x3) {
  return somarc_sum_bound_terms(ch, p_x1, p_x2, p_x3).bound_bits;
}

}  // namespace jscc
