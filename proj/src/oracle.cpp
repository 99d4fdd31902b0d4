#include "proxibound/oracle.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "proxibound/errors.hpp"

namespace proxibound {

namespace {

using Assignment = std::map<std::string, int>;

// All assignments over the listed axes.
std::vector<Assignment> enumerate_cells(const Codebook& cb, const std::vector<int>& axes) {
  std::vector<Assignment> out;
  std::vector<int> idx(axes.size(), 0);
  while (true) {
    Assignment cell;
    for (std::size_t i = 0; i < axes.size(); ++i) cell[cb.var(axes[i]).name] = idx[i];
    out.push_back(std::move(cell));
    int k = static_cast<int>(axes.size()) - 1;
    for (; k >= 0; --k) {
      if (++idx[k] < cb.cardinality(axes[k])) break;
      idx[k] = 0;
    }
    if (k < 0) break;
  }
  return out;
}

// Back-door adjustment over the given cell set: E[Y^(a)] and E[Y^(a)|A=a'],
// valid for the confounder family (cells = covariates x U) and for fully
// observed joints (cells = covariates).
OracleTruth adjustment_oracle(const JointPMF& joint, const std::vector<int>& adjust_axes,
                              const std::string& a_name) {
  OracleTruth truth;
  const double pa[2] = {joint.prob({{a_name, 0}}), joint.prob({{a_name, 1}})};
  if (pa[0] <= 0.0 || pa[1] <= 0.0)
    throw PositivityViolation("oracle: a treatment arm has zero marginal probability");

  for (const Assignment& cell : enumerate_cells(joint.codebook(), adjust_axes)) {
    double pc = joint.prob(cell);
    if (pc <= 0.0) continue;
    double ey[2], pca[2];
    for (int a : {0, 1}) {
      Assignment with_a = cell;
      with_a[a_name] = a;
      pca[a] = joint.prob(with_a);
      if (pca[a] <= 0.0)
        throw PositivityViolation("oracle: p(a | adjustment cell) = 0 somewhere");
      ey[a] = joint.cond_mean_y(with_a);
    }
    for (int a : {0, 1}) {
      truth.po_mean[a] += pc * ey[a];
      truth.ett_mean[a] += (pca[1 - a] / pa[1 - a]) * ey[a];
    }
  }
  return truth;
}

}  // namespace

OracleTruth oracle_estimands(const JointPMF& joint) {
  const Codebook& cb = joint.codebook();
  auto u_ax = cb.find_role(VarRole::LatentConfounder);
  auto m_ax = cb.find_role(VarRole::LatentMediator);
  auto a_ax = cb.find_role(VarRole::Treatment);
  if (!a_ax || !cb.find_role(VarRole::Outcome))
    throw SchemaError("oracle needs treatment and outcome axes");
  const std::string a_name = cb.var(*a_ax).name;

  OracleTruth truth;
  if (!m_ax) {
    // confounder family (or fully observed): adjust for U and the covariates
    std::vector<int> adjust = cb.covariate_axes();
    if (u_ax) adjust.push_back(*u_ax);
    std::sort(adjust.begin(), adjust.end());
    truth = adjustment_oracle(joint, adjust, a_name);
  } else if (!u_ax) {
    // mediation family: nested formula over the latent mediator
    const std::string m_name = cb.var(*m_ax).name;
    const int nm = cb.cardinality(*m_ax);
    const double pa[2] = {joint.prob({{a_name, 0}}), joint.prob({{a_name, 1}})};
    if (pa[0] <= 0.0 || pa[1] <= 0.0)
      throw PositivityViolation("oracle: a treatment arm has zero marginal probability");
    truth.has_mediation = true;
    for (const Assignment& xcell : enumerate_cells(cb, cb.covariate_axes())) {
      double px = joint.prob(xcell);
      if (px <= 0.0) continue;
      double px_arm[2];
      for (int a : {0, 1}) {
        Assignment g = xcell;
        g[a_name] = a;
        double paxc = joint.prob(g);
        if (paxc <= 0.0) throw PositivityViolation("oracle: p(a|x) = 0 somewhere");
        px_arm[a] = paxc / pa[a];
      }
      // inner(a_y, a_m) = sum_m p(m|a_m,x) E[Y|a_y,x,m]
      auto inner = [&](int a_y, int a_m) {
        Assignment g_m = xcell;
        g_m[a_name] = a_m;
        Tensor pm = joint.conditional({m_name}, g_m);
        double s = 0.0;
        for (int m = 0; m < nm; ++m) {
          if (pm[m] <= 0.0) continue;
          Assignment g_y = xcell;
          g_y[a_name] = a_y;
          g_y[m_name] = m;
          if (joint.prob(g_y) <= 0.0)
            throw PositivityViolation("oracle: (a,x,m) cell needed by the nested formula is empty");
          s += pm[m] * joint.cond_mean_y(g_y);
        }
        return s;
      };
      double in00 = inner(0, 0), in11 = inner(1, 1), in10 = inner(1, 0);
      truth.po_mean[0] += px * in00;
      truth.po_mean[1] += px * in11;
      truth.cross_world += px * in10;
      truth.ett_mean[0] += px_arm[1] * in00;  // px_arm[a] is already p(x | A=a)
      truth.ett_mean[1] += px_arm[0] * in11;
    }
    truth.nie = truth.po_mean[1] - truth.cross_world;
    truth.nde = truth.cross_world - truth.po_mean[0];
  } else {
    // front-door family: U confounds A and Y, M mediates, Y has no direct A
    // edge, so E[Y|m,x,u] (A marginalized) is the structural outcome mean
    const std::string m_name = cb.var(*m_ax).name;
    const std::string u_name = cb.var(*u_ax).name;
    const int nm = cb.cardinality(*m_ax);
    const double pa[2] = {joint.prob({{a_name, 0}}), joint.prob({{a_name, 1}})};
    if (pa[0] <= 0.0 || pa[1] <= 0.0)
      throw PositivityViolation("oracle: a treatment arm has zero marginal probability");
    std::vector<int> ux_axes = cb.covariate_axes();
    ux_axes.push_back(*u_ax);
    std::sort(ux_axes.begin(), ux_axes.end());
    for (const Assignment& cell : enumerate_cells(cb, ux_axes)) {
      double puc = joint.prob(cell);
      if (puc <= 0.0) continue;
      Assignment xcell = cell;
      xcell.erase(u_name);
      double pca[2];
      for (int a : {0, 1}) {
        Assignment g = cell;
        g[a_name] = a;
        pca[a] = joint.prob(g);
        Assignment gx = xcell;
        gx[a_name] = a;
        if (joint.prob(gx) <= 0.0) throw PositivityViolation("oracle: p(a|x) = 0 somewhere");
      }
      auto inner = [&](int a_m) {
        Assignment g_m = xcell;
        g_m[a_name] = a_m;
        Tensor pm = joint.conditional({m_name}, g_m);  // p(m|a,x)
        double s = 0.0;
        for (int m = 0; m < nm; ++m) {
          if (pm[m] <= 0.0) continue;
          Assignment g_y = cell;
          g_y[m_name] = m;
          if (joint.prob(g_y) <= 0.0)
            throw PositivityViolation("oracle: (u,x,m) cell needed by the nested formula is empty");
          s += pm[m] * joint.cond_mean_y(g_y);
        }
        return s;
      };
      double in0 = inner(0), in1 = inner(1);
      truth.po_mean[0] += puc * in0;
      truth.po_mean[1] += puc * in1;
      truth.ett_mean[0] += (pca[1] / pa[1]) * in0;
      truth.ett_mean[1] += (pca[0] / pa[0]) * in1;
    }
  }

  truth.treated_mean = joint.cond_mean_y({{a_name, 1}});
  truth.theta_ett = truth.treated_mean - truth.ett_mean[0];
  truth.theta_ate = truth.po_mean[1] - truth.po_mean[0];
  return truth;
}

}  // namespace proxibound
