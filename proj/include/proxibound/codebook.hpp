#pragma once

#include <optional>
#include <string>
#include <vector>

namespace proxibound {

enum class VarRole {
  LatentConfounder,  // U
  LatentMediator,    // M
  Covariate,         // X (any number of axes; estimators flatten them)
  OutcomeProxy,      // W
  TreatmentProxy,    // Z
  Treatment,         // A, always binary
  Outcome,           // Y, carries y_values
};

std::string to_string(VarRole role);
VarRole role_from_string(const std::string& s);

struct Variable {
  std::string name;
  int cardinality = 0;
  VarRole role = VarRole::Covariate;

  bool operator==(const Variable&) const = default;
};

// Axis dictionary for a joint table or dataset: variable names, cardinalities,
// roles, and the numeric values attached to outcome levels. Non-covariate
// roles appear at most once; treatment is binary; y_values are strictly
// increasing with one value per outcome level.
class Codebook {
 public:
  Codebook() = default;
  Codebook(std::vector<Variable> vars, std::vector<double> y_values);

  int n_axes() const { return static_cast<int>(vars_.size()); }
  const std::vector<Variable>& variables() const { return vars_; }
  const Variable& var(int axis) const { return vars_[axis]; }
  int cardinality(int axis) const { return vars_[axis].cardinality; }

  int axis(const std::string& name) const;                 // throws SchemaError
  std::optional<int> find_axis(const std::string& name) const;
  std::optional<int> find_role(VarRole role) const;        // first (only) match
  std::vector<int> covariate_axes() const;

  const std::vector<double>& y_values() const { return y_values_; }
  double y_inf() const;
  double y_sup() const;

  std::vector<int> dims() const;
  bool is_latent(int axis) const;
  Codebook observed() const;  // drops latent axes

  // Keeps only the listed axes (strictly increasing), preserving y_values iff
  // the outcome survives.
  Codebook restricted(const std::vector<int>& keep_axes) const;

  bool operator==(const Codebook&) const = default;

 private:
  std::vector<Variable> vars_;
  std::vector<double> y_values_;
};

}  // namespace proxibound
