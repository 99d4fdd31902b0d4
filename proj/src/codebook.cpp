#include "proxibound/codebook.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "proxibound/errors.hpp"

namespace proxibound {

std::string to_string(VarRole role) {
  switch (role) {
    case VarRole::LatentConfounder: return "latent-confounder";
    case VarRole::LatentMediator: return "latent-mediator";
    case VarRole::Covariate: return "covariate";
    case VarRole::OutcomeProxy: return "outcome-proxy";
    case VarRole::TreatmentProxy: return "treatment-proxy";
    case VarRole::Treatment: return "treatment";
    case VarRole::Outcome: return "outcome";
  }
  throw SchemaError("unknown role");
}

VarRole role_from_string(const std::string& s) {
  if (s == "latent-confounder") return VarRole::LatentConfounder;
  if (s == "latent-mediator") return VarRole::LatentMediator;
  if (s == "covariate") return VarRole::Covariate;
  if (s == "outcome-proxy") return VarRole::OutcomeProxy;
  if (s == "treatment-proxy") return VarRole::TreatmentProxy;
  if (s == "treatment") return VarRole::Treatment;
  if (s == "outcome") return VarRole::Outcome;
  throw SchemaError("unknown variable role: " + s);
}

Codebook::Codebook(std::vector<Variable> vars, std::vector<double> y_values)
    : vars_(std::move(vars)), y_values_(std::move(y_values)) {
  std::set<std::string> names;
  std::set<VarRole> seen;
  for (const Variable& v : vars_) {
    if (v.name.empty()) throw SchemaError("variable name must be non-empty");
    if (!names.insert(v.name).second) throw SchemaError("duplicate variable name: " + v.name);
    if (v.cardinality < 1) throw SchemaError("cardinality must be >= 1 for " + v.name);
    if (v.role != VarRole::Covariate && !seen.insert(v.role).second)
      throw SchemaError("role " + to_string(v.role) + " appears more than once");
    if (v.role == VarRole::Treatment && v.cardinality != 2)
      throw SchemaError("treatment must be binary");
  }
  if (auto y = find_role(VarRole::Outcome)) {
    if (static_cast<int>(y_values_.size()) != cardinality(*y))
      throw SchemaError("y_values size must equal the outcome cardinality");
    for (std::size_t i = 0; i < y_values_.size(); ++i) {
      if (!std::isfinite(y_values_[i])) throw SchemaError("y_values must be finite");
      if (i > 0 && y_values_[i] <= y_values_[i - 1])
        throw SchemaError("y_values must be strictly increasing");
    }
  } else if (!y_values_.empty()) {
    throw SchemaError("y_values given but no outcome variable");
  }
}

int Codebook::axis(const std::string& name) const {
  if (auto ax = find_axis(name)) return *ax;
  throw SchemaError("no variable named " + name);
}

std::optional<int> Codebook::find_axis(const std::string& name) const {
  for (int i = 0; i < n_axes(); ++i)
    if (vars_[i].name == name) return i;
  return std::nullopt;
}

std::optional<int> Codebook::find_role(VarRole role) const {
  for (int i = 0; i < n_axes(); ++i)
    if (vars_[i].role == role) return i;
  return std::nullopt;
}

std::vector<int> Codebook::covariate_axes() const {
  std::vector<int> out;
  for (int i = 0; i < n_axes(); ++i)
    if (vars_[i].role == VarRole::Covariate) out.push_back(i);
  return out;
}

double Codebook::y_inf() const {
  if (y_values_.empty()) throw SchemaError("codebook has no outcome values");
  return y_values_.front();
}

double Codebook::y_sup() const {
  if (y_values_.empty()) throw SchemaError("codebook has no outcome values");
  return y_values_.back();
}

std::vector<int> Codebook::dims() const {
  std::vector<int> d(vars_.size());
  for (std::size_t i = 0; i < vars_.size(); ++i) d[i] = vars_[i].cardinality;
  return d;
}

bool Codebook::is_latent(int axis) const {
  VarRole r = vars_[axis].role;
  return r == VarRole::LatentConfounder || r == VarRole::LatentMediator;
}

Codebook Codebook::observed() const {
  std::vector<int> keep;
  for (int i = 0; i < n_axes(); ++i)
    if (!is_latent(i)) keep.push_back(i);
  return restricted(keep);
}

Codebook Codebook::restricted(const std::vector<int>& keep_axes) const {
  std::vector<Variable> vars;
  bool keeps_y = false;
  for (int ax : keep_axes) {
    vars.push_back(vars_[ax]);
    keeps_y = keeps_y || vars_[ax].role == VarRole::Outcome;
  }
  return Codebook(std::move(vars), keeps_y ? y_values_ : std::vector<double>{});
}

}  // namespace proxibound
