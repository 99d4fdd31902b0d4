#include "proxibound/frequency_model.hpp"

#include <cmath>

#include "proxibound/errors.hpp"

namespace proxibound {

namespace {

void audit_tensor(const std::string& name, const Tensor& t, std::vector<AuditEntry>& out) {
  std::vector<int> idx(t.rank());
  for (std::size_t flat = 0; flat < t.size(); ++flat) {
    if (t[flat] > 0.0) continue;
    t.unravel(flat, idx);
    out.push_back(AuditEntry{name, idx});
  }
}

void audit_vector(const std::string& name, const std::vector<double>& v,
                  std::vector<AuditEntry>& out) {
  for (int i = 0; i < static_cast<int>(v.size()); ++i)
    if (v[i] <= 0.0) out.push_back(AuditEntry{name, {i}});
}

}  // namespace

void FrequencyModel::init_axes(const Codebook& cb, double lambda, bool population) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw SchemaError("lambda must be finite and >= 0");
  cb_ = cb;
  lambda_ = lambda;
  population_ = population;

  auto a = cb_.find_role(VarRole::Treatment);
  auto y = cb_.find_role(VarRole::Outcome);
  if (!a || !y) throw SchemaError("frequency model needs treatment and outcome variables");
  ax_a_ = *a;
  ax_y_ = *y;
  ny_ = cb_.cardinality(ax_y_);
  y_values_ = cb_.y_values();

  if (auto w = cb_.find_role(VarRole::OutcomeProxy)) {
    ax_w_ = *w;
    nw_ = cb_.cardinality(*w);
  }
  if (auto z = cb_.find_role(VarRole::TreatmentProxy)) {
    ax_z_ = *z;
    nz_ = cb_.cardinality(*z);
  }
  x_axes_ = cb_.covariate_axes();
  nx_ = 1;
  for (int ax : x_axes_) {
    nx_ *= cb_.cardinality(ax);
    x_names_.push_back(cb_.var(ax).name);
  }

  c_ax_ = Tensor({2, nx_});
  c_xa_ = Tensor({nx_, 2});
  c_yax_ = Tensor({ny_, 2, nx_});
  c_ya_ = Tensor({ny_, 2});
  c_a_.assign(2, 0.0);
  c_x_.assign(nx_, 0.0);
  if (nw_ > 0) {
    c_wax_ = Tensor({nw_, 2, nx_});
    c_wx_ = Tensor({nw_, nx_});
  }
  if (nz_ > 0) {
    c_zax_ = Tensor({nz_, 2, nx_});
    c_yzax_ = Tensor({ny_, nz_, 2, nx_});
  }
  if (nw_ > 0 && nz_ > 0) c_wzax_ = Tensor({nw_, nz_, 2, nx_});
}

void FrequencyModel::add_record(std::span<const int32_t> rec, double weight) {
  int x = 0;
  for (int ax : x_axes_) x = x * cb_.cardinality(ax) + rec[ax];
  const int a = rec[ax_a_];
  const int y = rec[ax_y_];

  n_ += weight;
  c_a_[a] += weight;
  c_x_[x] += weight;
  c_ax_.at(std::array{a, x}) += weight;
  c_xa_.at(std::array{x, a}) += weight;
  c_yax_.at(std::array{y, a, x}) += weight;
  c_ya_.at(std::array{y, a}) += weight;
  if (nw_ > 0) {
    const int w = rec[ax_w_];
    c_wax_.at(std::array{w, a, x}) += weight;
    c_wx_.at(std::array{w, x}) += weight;
  }
  if (nz_ > 0) {
    const int z = rec[ax_z_];
    c_zax_.at(std::array{z, a, x}) += weight;
    c_yzax_.at(std::array{y, z, a, x}) += weight;
  }
  if (nw_ > 0 && nz_ > 0) c_wzax_.at(std::array{rec[ax_w_], rec[ax_z_], a, x}) += weight;
}

void FrequencyModel::finish() {
  // Each underlying count table is audited once; p(a|w,x) shares its zero
  // cells with p(w|a,x) up to index order.
  if (nw_ > 0) audit_tensor("p(w|a,x)", c_wax_, audit_);
  if (nz_ > 0) {
    audit_tensor("p(z|a,x)", c_zax_, audit_);
    audit_tensor("p(y|z,a,x)", c_yzax_, audit_);
  }
  if (nw_ > 0 && nz_ > 0) audit_tensor("p(w,z|a,x)", c_wzax_, audit_);
  audit_tensor("p(y|a,x)", c_yax_, audit_);
  audit_tensor("p(x|a)", c_xa_, audit_);
  audit_tensor("p(y|a)", c_ya_, audit_);
  audit_vector("p(a)", c_a_, audit_);
  audit_vector("p(x)", c_x_, audit_);
}

FrequencyModel FrequencyModel::from_dataset(const Dataset& data, double lambda) {
  FrequencyModel m;
  m.init_axes(data.codebook(), lambda, false);
  for (std::size_t i = 0; i < data.n(); ++i) m.add_record(data.record(i), 1.0);
  m.finish();
  return m;
}

FrequencyModel FrequencyModel::from_dataset(const Dataset& data, std::span<const std::size_t> rows,
                                            double lambda) {
  FrequencyModel m;
  m.init_axes(data.codebook(), lambda, false);
  for (std::size_t r : rows) m.add_record(data.record(r), 1.0);
  m.finish();
  return m;
}

FrequencyModel FrequencyModel::from_joint(const JointPMF& joint) {
  JointPMF obs = joint.observed_margin();
  FrequencyModel m;
  m.init_axes(obs.codebook(), 0.0, true);
  const Tensor& t = obs.table();
  std::vector<int> idx(t.rank());
  std::vector<int32_t> rec(t.rank());
  for (std::size_t flat = 0; flat < t.size(); ++flat) {
    if (t[flat] <= 0.0) continue;
    t.unravel(flat, idx);
    for (std::size_t i = 0; i < idx.size(); ++i) rec[i] = idx[i];
    m.add_record(rec, t[flat]);
  }
  m.finish();
  return m;
}

double FrequencyModel::p_w_given_ax(int w, int a, int x) const {
  if (nw_ == 0) throw Error("model has no outcome proxy W");
  double denom = c_ax_.at(std::array{a, x});
  if (lambda_ == 0.0 && denom <= 0.0) throw ZeroConditioningMass("p(w|a,x): empty (a,x) cell");
  return (c_wax_.at(std::array{w, a, x}) + lambda_) / (denom + nw_ * lambda_);
}

double FrequencyModel::p_z_given_ax(int z, int a, int x) const {
  if (nz_ == 0) throw Error("model has no treatment proxy Z");
  double denom = c_ax_.at(std::array{a, x});
  if (lambda_ == 0.0 && denom <= 0.0) throw ZeroConditioningMass("p(z|a,x): empty (a,x) cell");
  return (c_zax_.at(std::array{z, a, x}) + lambda_) / (denom + nz_ * lambda_);
}

double FrequencyModel::p_wz_given_ax(int w, int z, int a, int x) const {
  if (nw_ == 0 || nz_ == 0) throw Error("model needs both W and Z proxies");
  double denom = c_ax_.at(std::array{a, x});
  if (lambda_ == 0.0 && denom <= 0.0) throw ZeroConditioningMass("p(w,z|a,x): empty (a,x) cell");
  return (c_wzax_.at(std::array{w, z, a, x}) + lambda_) / (denom + nw_ * nz_ * lambda_);
}

double FrequencyModel::p_a_given_wx(int a, int w, int x) const {
  if (nw_ == 0) throw Error("model has no outcome proxy W");
  double denom = c_wx_.at(std::array{w, x});
  if (lambda_ == 0.0 && denom <= 0.0) throw ZeroConditioningMass("p(a|w,x): empty (w,x) cell");
  return (c_wax_.at(std::array{w, a, x}) + lambda_) / (denom + 2 * lambda_);
}

double FrequencyModel::mean_y_given_ax(int a, int x) const {
  double denom = c_ax_.at(std::array{a, x});
  if (lambda_ == 0.0 && denom <= 0.0) throw ZeroConditioningMass("E[Y|a,x]: empty (a,x) cell");
  double m = 0.0;
  for (int y = 0; y < ny_; ++y)
    m += y_values_[y] * (c_yax_.at(std::array{y, a, x}) + lambda_) / (denom + ny_ * lambda_);
  return m;
}

double FrequencyModel::mean_y_given_zax(int z, int a, int x) const {
  if (nz_ == 0) throw Error("model has no treatment proxy Z");
  double denom = c_zax_.at(std::array{z, a, x});
  if (lambda_ == 0.0 && denom <= 0.0) throw ZeroConditioningMass("E[Y|z,a,x]: empty (z,a,x) cell");
  double m = 0.0;
  for (int y = 0; y < ny_; ++y)
    m += y_values_[y] * (c_yzax_.at(std::array{y, z, a, x}) + lambda_) / (denom + ny_ * lambda_);
  return m;
}

double FrequencyModel::p_x_given_a(int x, int a) const {
  double denom = c_a_[a];
  if (lambda_ == 0.0 && denom <= 0.0) throw ZeroConditioningMass("p(x|a): no records with A=a");
  return (c_xa_.at(std::array{x, a}) + lambda_) / (denom + nx_ * lambda_);
}

double FrequencyModel::p_x(int x) const { return (c_x_[x] + lambda_) / (n_ + nx_ * lambda_); }

double FrequencyModel::p_a(int a) const { return (c_a_[a] + lambda_) / (n_ + 2 * lambda_); }

double FrequencyModel::mean_y_given_a(int a) const {
  double denom = c_a_[a];
  if (lambda_ == 0.0 && denom <= 0.0) throw ZeroConditioningMass("E[Y|a]: no records with A=a");
  double m = 0.0;
  for (int y = 0; y < ny_; ++y)
    m += y_values_[y] * (c_ya_.at(std::array{y, a}) + lambda_) / (denom + ny_ * lambda_);
  return m;
}

}  // namespace proxibound
