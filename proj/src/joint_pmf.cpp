#include "proxibound/joint_pmf.hpp"

#include <algorithm>
#include <cmath>

#include "proxibound/errors.hpp"

namespace proxibound {

namespace {

// Resolves {name: value} to parallel (axis, value) vectors, validating range.
void resolve_given(const Codebook& cb, const std::map<std::string, int>& given,
                   std::vector<int>& axes, std::vector<int>& vals) {
  for (const auto& [name, value] : given) {
    int ax = cb.axis(name);
    if (value < 0 || value >= cb.cardinality(ax))
      throw SchemaError("value out of range for " + name);
    axes.push_back(ax);
    vals.push_back(value);
  }
}

}  // namespace

JointPMF::JointPMF(Codebook cb, Tensor table) : cb_(std::move(cb)), table_(std::move(table)) {
  if (table_.dims() != cb_.dims()) throw SchemaError("joint table dims do not match codebook");
  double total = 0.0;
  for (std::size_t i = 0; i < table_.size(); ++i) {
    double v = table_[i];
    if (!std::isfinite(v)) throw SchemaError("joint table entry not finite");
    if (v < 0) {
      if (v < -1e-12) throw SchemaError("joint table entry negative");
      table_[i] = 0.0;  // absorb sign noise from upstream arithmetic
      continue;
    }
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-6) throw SchemaError("joint table mass far from 1");
  table_.scale(1.0 / table_.sum());
}

JointPMF JointPMF::marginal(const std::vector<std::string>& keep) const {
  std::vector<int> axes;
  for (const std::string& name : keep) axes.push_back(cb_.axis(name));
  std::sort(axes.begin(), axes.end());
  if (std::adjacent_find(axes.begin(), axes.end()) != axes.end())
    throw SchemaError("duplicate axis in marginal");
  return JointPMF(cb_.restricted(axes), table_.marginal(axes));
}

Tensor JointPMF::conditional(const std::vector<std::string>& target,
                             const std::map<std::string, int>& given) const {
  std::vector<int> gaxes, gvals;
  resolve_given(cb_, given, gaxes, gvals);
  std::vector<int> taxes;
  for (const std::string& name : target) taxes.push_back(cb_.axis(name));
  std::sort(taxes.begin(), taxes.end());
  for (int ax : taxes)
    for (int gax : gaxes)
      if (ax == gax) throw SchemaError("axis appears in both target and given");

  std::vector<int> tdims;
  for (int ax : taxes) tdims.push_back(cb_.cardinality(ax));
  Tensor out(tdims);
  std::vector<int> idx(cb_.n_axes());
  std::vector<int> tidx(taxes.size());
  double mass = 0.0;
  for (std::size_t flat = 0; flat < table_.size(); ++flat) {
    table_.unravel(flat, idx);
    bool match = true;
    for (std::size_t i = 0; i < gaxes.size(); ++i)
      if (idx[gaxes[i]] != gvals[i]) { match = false; break; }
    if (!match) continue;
    mass += table_[flat];
    for (std::size_t i = 0; i < taxes.size(); ++i) tidx[i] = idx[taxes[i]];
    out.at(tidx) += table_[flat];
  }
  if (mass <= 0.0) throw ZeroConditioningMass("conditioning event has zero probability");
  out.scale(1.0 / mass);
  return out;
}

double JointPMF::cond_mean_y(const std::map<std::string, int>& given) const {
  auto yopt = cb_.find_role(VarRole::Outcome);
  if (!yopt) throw SchemaError("no outcome axis");
  int yax = *yopt;
  Tensor py = conditional({cb_.var(yax).name}, given);
  double m = 0.0;
  for (int y = 0; y < cb_.cardinality(yax); ++y) m += cb_.y_values()[y] * py[y];
  return m;
}

double JointPMF::prob(const std::map<std::string, int>& given) const {
  std::vector<int> gaxes, gvals;
  resolve_given(cb_, given, gaxes, gvals);
  std::vector<int> idx(cb_.n_axes());
  double mass = 0.0;
  for (std::size_t flat = 0; flat < table_.size(); ++flat) {
    table_.unravel(flat, idx);
    bool match = true;
    for (std::size_t i = 0; i < gaxes.size(); ++i)
      if (idx[gaxes[i]] != gvals[i]) { match = false; break; }
    if (match) mass += table_[flat];
  }
  return mass;
}

JointPMF JointPMF::observed_margin() const {
  std::vector<std::string> keep;
  for (int i = 0; i < cb_.n_axes(); ++i)
    if (!cb_.is_latent(i)) keep.push_back(cb_.var(i).name);
  return marginal(keep);
}

}  // namespace proxibound
