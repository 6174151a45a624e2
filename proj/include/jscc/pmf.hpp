#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace jscc {

// Normalization targets: tensors must sum to 1 within norm_tol after
// construction; constructors silently renormalize only when the drift is
// at most norm_drift_max, otherwise they throw.
inline constexpr double norm_tol = 1e-12;
inline constexpr double norm_drift_max = 1e-9;

// A discrete random variable: a name and a finite alphabet {0, ..., size-1}.
struct Variable {
  std::string name;
  int size = 0;

  Variable() = default;
  Variable(std::string n, int s) : name(std::move(n)), size(s) {}
  bool operator==(const Variable&) const = default;
};

// Dense joint pmf over an ordered list of variables, stored row-major with
// the first variable slowest. Invariants: entries >= 0, total mass 1 within
// norm_tol, variable names unique, all alphabet sizes >= 1.
class JointPmf {
 public:
  JointPmf() = default;
  JointPmf(std::vector<Variable> vars, std::vector<double> probs);

  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<double>& probs() const { return probs_; }
  std::size_t size() const { return probs_.size(); }

  // Index of the named variable; throws if unknown.
  std::size_t var_index(const std::string& name) const;
  bool has_variable(const std::string& name) const;

  // Row-major stride of variable axis i.
  std::size_t stride(std::size_t i) const { return strides_[i]; }

  // Flat index for a full coordinate tuple (one symbol per variable).
  std::size_t flat_index(const std::vector<int>& coords) const;

  double at(const std::vector<int>& coords) const {
    return probs_[flat_index(coords)];
  }

 private:
  std::vector<Variable> vars_;
  std::vector<double> probs_;
  std::vector<std::size_t> strides_;
};

// Conditional pmf table p(outputs | given). Rows are indexed row-major over
// the given variables, columns row-major over the output variables. Each row
// is a pmf under the same normalization policy as JointPmf.
class Kernel {
 public:
  Kernel() = default;
  Kernel(std::vector<Variable> given, std::vector<Variable> outputs,
         std::vector<std::vector<double>> rows);

  const std::vector<Variable>& given_vars() const { return given_; }
  const std::vector<Variable>& output_vars() const { return outputs_; }
  const std::vector<std::vector<double>>& rows() const { return rows_; }

  std::size_t row_count() const { return rows_.size(); }
  std::size_t row_width() const { return rows_.empty() ? 0 : rows_[0].size(); }

  // Row index for a coordinate tuple over the given variables.
  std::size_t row_index(const std::vector<int>& given_coords) const;

 private:
  std::vector<Variable> given_;
  std::vector<Variable> outputs_;
  std::vector<std::vector<double>> rows_;
};

// Keeps only the named variables (input order preserved), summing out the
// rest. Unknown names throw.
JointPmf marginalize(const JointPmf& pmf, const std::vector<std::string>& keep);

// Extends a joint by a conditional: result covers base variables followed by
// kernel outputs. kernel.given_vars must be a subset of base's variables by
// name (sizes must agree); output names must not collide with base names.
JointPmf compose(const JointPmf& base, const Kernel& kernel);

// Conditions on an exact assignment {name -> symbol} and returns the
// renormalized pmf over the remaining variables. Zero-probability events and
// unknown names throw.
JointPmf condition_on_event(const JointPmf& pmf,
                            const std::vector<std::pair<std::string, int>>& event);

// Reorders variables (must be a permutation of the existing names).
JointPmf permute(const JointPmf& pmf, const std::vector<std::string>& order);

// Splits a product-alphabet variable into two adjacent axes, where the packed
// symbol is first * second_size + second. Pure relabeling of the tensor.
JointPmf split_variable(const JointPmf& pmf, const std::string& packed,
                        const Variable& first, const Variable& second);

}  // namespace jscc
