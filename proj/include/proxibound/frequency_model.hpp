#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "proxibound/codebook.hpp"
#include "proxibound/dataset.hpp"
#include "proxibound/joint_pmf.hpp"
#include "proxibound/tensor.hpp"

namespace proxibound {

// One (conditional-table, cell) pair whose raw count/mass is zero. Cell
// indices are in (target..., conditioning...) order of the table name.
struct AuditEntry {
  std::string table;
  std::vector<int> cell;
};

// Every conditional table the estimators consume, built either from data
// counts with add-lambda smoothing or exactly from a joint's observed margin
// (population mode; the estimators cannot tell the difference). Covariate
// axes are flattened row-major into one composite X axis.
//
// Smoothing is per conditional: numerator cell +lambda, denominator +K*lambda
// with K the target cardinality. With lambda = 0 a conditional is defined only
// where its conditioning cell has positive raw mass; asking elsewhere throws
// ZeroConditioningMass.
class FrequencyModel {
 public:
  static FrequencyModel from_dataset(const Dataset& data, double lambda);
  static FrequencyModel from_dataset(const Dataset& data, std::span<const std::size_t> rows,
                                     double lambda);
  static FrequencyModel from_joint(const JointPMF& joint);

  bool population() const { return population_; }
  double lambda() const { return lambda_; }

  int x_card() const { return nx_; }
  int w_card() const { return nw_; }
  int z_card() const { return nz_; }
  int y_card() const { return ny_; }
  bool has_w() const { return nw_ > 0; }
  bool has_z() const { return nz_ > 0; }
  const std::vector<double>& y_values() const { return y_values_; }
  double y_inf() const { return y_values_.front(); }
  double y_sup() const { return y_values_.back(); }

  // Smoothed conditionals.
  double p_w_given_ax(int w, int a, int x) const;
  double p_z_given_ax(int z, int a, int x) const;
  double p_wz_given_ax(int w, int z, int a, int x) const;
  double p_a_given_wx(int a, int w, int x) const;
  double mean_y_given_ax(int a, int x) const;
  double mean_y_given_zax(int z, int a, int x) const;
  double p_x_given_a(int x, int a) const;
  double p_x(int x) const;
  double p_a(int a) const;
  double mean_y_given_a(int a) const;
  double p_ax(int a, int x) const { return p_x_given_a(x, a) * p_a(a); }

  // Raw (unsmoothed) support, used to pick extremum sets and detect
  // empty-cell hazards at lambda = 0.
  bool occupied_ax(int a, int x) const { return c_ax_.at(std::array{a, x}) > 0.0; }
  bool occupied_wax(int w, int a, int x) const { return c_wax_.at(std::array{w, a, x}) > 0.0; }
  bool occupied_zax(int z, int a, int x) const { return c_zax_.at(std::array{z, a, x}) > 0.0; }
  bool occupied_wx(int w, int x) const { return c_wx_.at(std::array{w, x}) > 0.0; }
  bool occupied_a(int a) const { return c_a_[a] > 0.0; }

  // A proxy cell belongs to an extremum set when its smoothed conditioning
  // mass is positive: every cell under smoothing, occupied cells otherwise.
  bool w_in_support(int w, int a, int x) const { return lambda_ > 0.0 || occupied_wax(w, a, x); }
  bool z_in_support(int z, int a, int x) const { return lambda_ > 0.0 || occupied_zax(z, a, x); }

  const std::vector<AuditEntry>& positivity_audit() const { return audit_; }
  const Codebook& observed_codebook() const { return cb_; }
  const std::vector<std::string>& x_axis_names() const { return x_names_; }
  double total_mass() const { return n_; }

 private:
  FrequencyModel() = default;
  void init_axes(const Codebook& cb, double lambda, bool population);
  void add_record(std::span<const int32_t> rec, double weight);
  void finish();

  Codebook cb_;  // observed codebook as supplied (covariates unflattened)
  std::vector<std::string> x_names_;
  std::vector<int> x_axes_;  // covariate axis ids in cb_
  int ax_w_ = -1, ax_z_ = -1, ax_a_ = -1, ax_y_ = -1;
  int nx_ = 1, nw_ = 0, nz_ = 0, ny_ = 0;
  std::vector<double> y_values_;
  double lambda_ = 0.0;
  bool population_ = false;
  double n_ = 0.0;

  // Raw mass marginals (counts, or probabilities in population mode).
  Tensor c_ax_, c_wax_, c_zax_, c_wzax_, c_yax_, c_yzax_, c_xa_, c_wx_;
  std::vector<double> c_a_, c_x_;
  Tensor c_ya_;
  std::vector<AuditEntry> audit_;
};

}  // namespace proxibound
