#include "jscc/pmf.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace jscc {

namespace {

std::vector<std::size_t> row_major_strides(const std::vector<Variable>& vars) {
  std::vector<std::size_t> strides(vars.size(), 1);
  for (std::size_t i = vars.size(); i-- > 1;) {
    strides[i - 1] = strides[i] * static_cast<std::size_t>(vars[i].size);
  }
  return strides;
}

std::size_t cell_count(const std::vector<Variable>& vars) {
  std::size_t n = 1;
  for (const auto& v : vars) {
    if (v.size < 1) throw std::invalid_argument("variable '" + v.name + "' has empty alphabet");
    n *= static_cast<std::size_t>(v.size);
  }
  return n;
}

void check_unique_names(const std::vector<Variable>& vars) {
  std::unordered_set<std::string> seen;
  for (const auto& v : vars) {
    if (!seen.insert(v.name).second) {
      throw std::invalid_argument("duplicate variable name '" + v.name + "'");
    }
  }
}

// Clamps tiny negative noise to zero and renormalizes when the total mass is
// within norm_drift_max of 1; anything worse is a caller error.
void normalize_in_place(std::vector<double>& p, const char* what) {
  double sum = 0.0;
  for (double& x : p) {
    if (x < 0.0) {
      if (x < -norm_tol) throw std::domain_error(std::string(what) + ": negative probability entry");
      x = 0.0;
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > norm_drift_max) {
    throw std::domain_error(std::string(what) + ": mass " + std::to_string(sum) +
                            " drifts from 1 by more than " + std::to_string(norm_drift_max));
  }
  for (double& x : p) x /= sum;
}

}  // namespace

JointPmf::JointPmf(std::vector<Variable> vars, std::vector<double> probs)
    : vars_(std::move(vars)), probs_(std::move(probs)) {
  check_unique_names(vars_);
  if (probs_.size() != cell_count(vars_)) {
    throw std::invalid_argument("pmf tensor size does not match alphabet product");
  }
  normalize_in_place(probs_, "joint pmf");
  strides_ = row_major_strides(vars_);
}

std::size_t JointPmf::var_index(const std::string& name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (vars_[i].name == name) return i;
  }
  throw std::invalid_argument("unknown variable '" + name + "'");
}

bool JointPmf::has_variable(const std::string& name) const {
  return std::any_of(vars_.begin(), vars_.end(),
                     [&](const Variable& v) { return v.name == name; });
}

std::size_t JointPmf::flat_index(const std::vector<int>& coords) const {
  if (coords.size() != vars_.size()) {
    throw std::invalid_argument("coordinate tuple arity mismatch");
  }
  std::size_t idx = 0;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i] < 0 || coords[i] >= vars_[i].size) {
      throw std::invalid_argument("symbol out of range for '" + vars_[i].name + "'");
    }
    idx += strides_[i] * static_cast<std::size_t>(coords[i]);
  }
  return idx;
}

Kernel::Kernel(std::vector<Variable> given, std::vector<Variable> outputs,
               std::vector<std::vector<double>> rows)
    : given_(std::move(given)), outputs_(std::move(outputs)), rows_(std::move(rows)) {
  std::vector<Variable> all = given_;
  all.insert(all.end(), outputs_.begin(), outputs_.end());
  check_unique_names(all);
  const std::size_t want_rows = cell_count(given_);
  const std::size_t want_cols = cell_count(outputs_);
  if (rows_.size() != want_rows) {
    throw std::invalid_argument("kernel row count does not match given alphabets");
  }
  for (auto& row : rows_) {
    if (row.size() != want_cols) {
      throw std::invalid_argument("kernel row width does not match output alphabets");
    }
    normalize_in_place(row, "kernel row");
  }
}

std::size_t Kernel::row_index(const std::vector<int>& given_coords) const {
  if (given_coords.size() != given_.size()) {
    throw std::invalid_argument("kernel row coordinate arity mismatch");
  }
  std::size_t idx = 0;
  for (std::size_t i = 0; i < given_.size(); ++i) {
    if (given_coords[i] < 0 || given_coords[i] >= given_[i].size) {
      throw std::invalid_argument("symbol out of range for '" + given_[i].name + "'");
    }
    idx = idx * static_cast<std::size_t>(given_[i].size) +
          static_cast<std::size_t>(given_coords[i]);
  }
  return idx;
}

JointPmf marginalize(const JointPmf& pmf, const std::vector<std::string>& keep) {
  std::unordered_set<std::string> keep_set(keep.begin(), keep.end());
  if (keep_set.size() != keep.size()) {
    throw std::invalid_argument("marginalize: repeated variable in keep list");
  }
  for (const auto& name : keep_set) pmf.var_index(name);  // validate

  // Kept axes in the pmf's own order, so strides stay row-major consistent.
  const auto& vars = pmf.variables();
  std::vector<Variable> out_vars;
  std::vector<std::size_t> kept_axes;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (keep_set.count(vars[i].name)) {
      out_vars.push_back(vars[i]);
      kept_axes.push_back(i);
    }
  }

  std::size_t out_cells = 1;
  for (const auto& v : out_vars) out_cells *= static_cast<std::size_t>(v.size);
  std::vector<double> out(out_cells, 0.0);

  // Walk the full tensor once with an odometer over all axes, accumulating
  // into the kept-axes index.
  std::vector<int> coords(vars.size(), 0);
  std::vector<std::size_t> out_strides(kept_axes.size(), 1);
  for (std::size_t i = kept_axes.size(); i-- > 1;) {
    out_strides[i - 1] = out_strides[i] * static_cast<std::size_t>(out_vars[i].size);
  }
  const auto& p = pmf.probs();
  for (std::size_t flat = 0; flat < p.size(); ++flat) {
    std::size_t oidx = 0;
    for (std::size_t k = 0; k < kept_axes.size(); ++k) {
      oidx += out_strides[k] * static_cast<std::size_t>(coords[kept_axes[k]]);
    }
    out[oidx] += p[flat];
    for (std::size_t ax = vars.size(); ax-- > 0;) {
      if (++coords[ax] < vars[ax].size) break;
      coords[ax] = 0;
    }
  }
  // Preserve ordering requested by the caller? The contract keeps the pmf's
  // own variable order; re-kept order equals input order of the tensor.
  return JointPmf(std::move(out_vars), std::move(out));
}

JointPmf compose(const JointPmf& base, const Kernel& kernel) {
  const auto& bvars = base.variables();
  // Map each kernel given-variable to its axis in the base.
  std::vector<std::size_t> given_axes;
  for (const auto& g : kernel.given_vars()) {
    const std::size_t ax = base.var_index(g.name);
    if (bvars[ax].size != g.size) {
      throw std::invalid_argument("compose: alphabet mismatch on '" + g.name + "'");
    }
    given_axes.push_back(ax);
  }
  for (const auto& o : kernel.output_vars()) {
    if (base.has_variable(o.name)) {
      throw std::invalid_argument("compose: output variable '" + o.name + "' already present");
    }
  }

  std::vector<Variable> out_vars = bvars;
  out_vars.insert(out_vars.end(), kernel.output_vars().begin(), kernel.output_vars().end());

  const auto& bp = base.probs();
  const std::size_t width = kernel.row_width();
  std::vector<double> out;
  out.resize(bp.size() * width);

  std::vector<int> coords(bvars.size(), 0);
  std::vector<int> gcoords(given_axes.size(), 0);
  for (std::size_t flat = 0; flat < bp.size(); ++flat) {
    for (std::size_t k = 0; k < given_axes.size(); ++k) {
      gcoords[k] = coords[given_axes[k]];
    }
    const auto& row = kernel.rows()[kernel.row_index(gcoords)];
    const double pb = bp[flat];
    double* dst = out.data() + flat * width;
    for (std::size_t j = 0; j < width; ++j) dst[j] = pb * row[j];
    for (std::size_t ax = bvars.size(); ax-- > 0;) {
      if (++coords[ax] < bvars[ax].size) break;
      coords[ax] = 0;
    }
  }
  return JointPmf(std::move(out_vars), std::move(out));
}

JointPmf condition_on_event(const JointPmf& pmf,
                            const std::vector<std::pair<std::string, int>>& event) {
  const auto& vars = pmf.variables();
  std::vector<int> fixed(vars.size(), -1);
  for (const auto& [name, sym] : event) {
    const std::size_t ax = pmf.var_index(name);
    if (fixed[ax] != -1) throw std::invalid_argument("condition_on_event: repeated variable");
    if (sym < 0 || sym >= vars[ax].size) {
      throw std::invalid_argument("condition_on_event: symbol out of range for '" + name + "'");
    }
    fixed[ax] = sym;
  }

  std::vector<Variable> out_vars;
  std::vector<std::size_t> free_axes;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (fixed[i] == -1) {
      out_vars.push_back(vars[i]);
      free_axes.push_back(i);
    }
  }
  if (free_axes.empty()) throw std::invalid_argument("condition_on_event: no variables left");

  std::size_t out_cells = 1;
  for (const auto& v : out_vars) out_cells *= static_cast<std::size_t>(v.size);
  std::vector<double> slice(out_cells, 0.0);

  std::vector<int> coords(out_vars.size(), 0);
  std::vector<int> full(vars.size(), 0);
  double mass = 0.0;
  for (std::size_t oidx = 0; oidx < out_cells; ++oidx) {
    for (std::size_t i = 0; i < vars.size(); ++i) full[i] = fixed[i];
    for (std::size_t k = 0; k < free_axes.size(); ++k) full[free_axes[k]] = coords[k];
    slice[oidx] = pmf.probs()[pmf.flat_index(full)];
    mass += slice[oidx];
    for (std::size_t ax = out_vars.size(); ax-- > 0;) {
      if (++coords[ax] < out_vars[ax].size) break;
      coords[ax] = 0;
    }
  }
  if (mass <= 0.0) throw std::domain_error("condition_on_event: zero-probability event");
  for (double& x : slice) x /= mass;
  return JointPmf(std::move(out_vars), std::move(slice));
}

JointPmf permute(const JointPmf& pmf, const std::vector<std::string>& order) {
  const auto& vars = pmf.variables();
  if (order.size() != vars.size()) {
    throw std::invalid_argument("permute: order must list every variable exactly once");
  }
  std::vector<std::size_t> src_axis;
  std::vector<Variable> out_vars;
  for (const auto& name : order) {
    src_axis.push_back(pmf.var_index(name));
    out_vars.push_back(vars[src_axis.back()]);
  }
  std::unordered_set<std::size_t> uniq(src_axis.begin(), src_axis.end());
  if (uniq.size() != src_axis.size()) {
    throw std::invalid_argument("permute: order repeats a variable");
  }

  std::vector<double> out(pmf.size(), 0.0);
  std::vector<std::size_t> out_strides(out_vars.size(), 1);
  for (std::size_t i = out_vars.size(); i-- > 1;) {
    out_strides[i - 1] = out_strides[i] * static_cast<std::size_t>(out_vars[i].size);
  }
  std::vector<int> coords(vars.size(), 0);
  for (std::size_t flat = 0; flat < pmf.size(); ++flat) {
    std::size_t oidx = 0;
    for (std::size_t k = 0; k < src_axis.size(); ++k) {
      oidx += out_strides[k] * static_cast<std::size_t>(coords[src_axis[k]]);
    }
    out[oidx] = pmf.probs()[flat];
    for (std::size_t ax = vars.size(); ax-- > 0;) {
      if (++coords[ax] < vars[ax].size) break;
      coords[ax] = 0;
    }
  }
  return JointPmf(std::move(out_vars), std::move(out));
}

JointPmf split_variable(const JointPmf& pmf, const std::string& packed,
                        const Variable& first, const Variable& second) {
  const std::size_t ax = pmf.var_index(packed);
  const auto& vars = pmf.variables();
  if (vars[ax].size != first.size * second.size) {
    throw std::invalid_argument("split_variable: factor sizes do not multiply to '" +
                                packed + "' alphabet");
  }
  // packed symbol = first * |second| + second and the axis is row-major, so
  // the flat tensor layout is unchanged; only the axis list is rewritten.
  std::vector<Variable> out_vars;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (i == ax) {
      out_vars.push_back(first);
      out_vars.push_back(second);
    } else {
      out_vars.push_back(vars[i]);
    }
  }
  return JointPmf(std::move(out_vars), pmf.probs());
}

}  // namespace jscc
