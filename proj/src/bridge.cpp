#include "proxibound/bridge.hpp"

#include <cmath>
#include <sstream>

#include "proxibound/errors.hpp"
#include "proxibound/nnls.hpp"

namespace proxibound {

std::string to_string(BridgeKind k) {
  return k == BridgeKind::OutcomeH ? "outcome-h" : "treatment-q";
}

std::string to_string(BridgeVariant v) {
  switch (v) {
    case BridgeVariant::Confounder: return "confounder";
    case BridgeVariant::Mediation: return "mediation";
    case BridgeVariant::Frontdoor: return "frontdoor";
  }
  throw Error("unknown bridge variant");
}

BridgeVariant bridge_variant_from_string(const std::string& s) {
  if (s == "confounder") return BridgeVariant::Confounder;
  if (s == "mediation") return BridgeVariant::Mediation;
  if (s == "frontdoor") return BridgeVariant::Frontdoor;
  throw SchemaError("unknown bridge variant: " + s);
}

namespace {

// Clip solver sign noise, then report the infinity-norm residual.
void finish_cell(const Eigen::MatrixXd& K, const Eigen::VectorXd& rhs, const NnlsResult& sol,
                 double tol, BridgeCell& cell) {
  Eigen::VectorXd h = sol.x;
  for (int i = 0; i < h.size(); ++i) {
    if (h[i] < 0.0 && h[i] >= -1e-10) h[i] = 0.0;
  }
  Eigen::VectorXd resid = K * h - rhs;
  cell.residual = resid.size() ? resid.cwiseAbs().maxCoeff() : 0.0;
  cell.feasible = sol.converged && cell.residual <= tol;
  cell.solution.assign(h.data(), h.data() + h.size());
  if (!sol.converged) cell.note += "solver iteration cap hit; ";
}

// All assignments over the covariate axes, as (name, value) lists.
std::vector<std::vector<std::pair<std::string, int>>> covariate_cells(const Codebook& cb) {
  std::vector<int> axes = cb.covariate_axes();
  std::vector<std::vector<std::pair<std::string, int>>> out;
  std::vector<int> idx(axes.size(), 0);
  while (true) {
    std::vector<std::pair<std::string, int>> cell;
    for (std::size_t i = 0; i < axes.size(); ++i) cell.emplace_back(cb.var(axes[i]).name, idx[i]);
    out.push_back(cell);
    int k = static_cast<int>(axes.size()) - 1;
    for (; k >= 0; --k) {
      if (++idx[k] < cb.cardinality(axes[k])) break;
      idx[k] = 0;
    }
    if (k < 0) break;
  }
  return out;
}

int required_axis(const Codebook& cb, VarRole role, const char* what) {
  auto ax = cb.find_role(role);
  if (!ax) throw SchemaError(std::string("bridge check needs a ") + what + " variable");
  return *ax;
}

}  // namespace

BridgeCheckResult check_outcome_bridge(const JointPMF& joint, BridgeVariant variant, double tol) {
  const Codebook& cb = joint.codebook();
  const int ax_w = required_axis(cb, VarRole::OutcomeProxy, "outcome proxy");
  const VarRole latent_role =
      variant == BridgeVariant::Confounder ? VarRole::LatentConfounder : VarRole::LatentMediator;
  const int ax_l = required_axis(cb, latent_role, "latent");
  required_axis(cb, VarRole::Treatment, "treatment");
  const std::string w_name = cb.var(ax_w).name;
  const std::string l_name = cb.var(ax_l).name;
  const std::string a_name = cb.var(*cb.find_role(VarRole::Treatment)).name;
  const int nw = cb.cardinality(ax_w);
  const int nl = cb.cardinality(ax_l);

  BridgeCheckResult res;
  res.kind = BridgeKind::OutcomeH;
  res.variant = variant;
  res.tolerance = tol;

  // Mediation pins the treated arm; the other variants run one system per arm.
  std::vector<int> arms = variant == BridgeVariant::Mediation ? std::vector<int>{1}
                                                              : std::vector<int>{0, 1};
  bool any_evaluated = false;
  bool all_ok = true;
  for (const auto& xcell : covariate_cells(cb)) {
    for (int a : arms) {
      BridgeCell cell;
      cell.cell = xcell;
      if (variant != BridgeVariant::Mediation) cell.cell.emplace_back(a_name, a);

      std::map<std::string, int> given_ax(xcell.begin(), xcell.end());
      // mediation conditions the kernel on x only; the rhs still needs arm mass
      std::map<std::string, int> base = given_ax;
      if (variant != BridgeVariant::Mediation) base[a_name] = a;
      if (joint.prob(base) <= 0.0) {
        cell.skipped = true;
        cell.note = "degenerate conditioning cell (zero mass); skipped";
        res.cells.push_back(std::move(cell));
        continue;
      }

      // rows: latent levels with mass in the conditioning cell; the mediation
      // rhs additionally needs treated mass at (x, m)
      std::vector<int> rows, dropped;
      for (int l = 0; l < nl; ++l) {
        std::map<std::string, int> g = base;
        g[l_name] = l;
        if (joint.prob(g) <= 0.0) continue;
        if (variant == BridgeVariant::Mediation) {
          std::map<std::string, int> g1 = g;
          g1[a_name] = 1;
          if (joint.prob(g1) <= 0.0) {
            dropped.push_back(l);
            continue;
          }
        }
        rows.push_back(l);
      }
      if (!dropped.empty()) {
        std::ostringstream os;
        os << "rows without treated mass skipped:";
        for (int l : dropped) os << " " << l;
        os << "; ";
        cell.note += os.str();
      }
      if (rows.empty()) {
        cell.skipped = true;
        cell.note = "no latent level has mass in this cell; skipped";
        res.cells.push_back(std::move(cell));
        continue;
      }

      Eigen::MatrixXd K(rows.size(), nw);
      Eigen::VectorXd rhs(rows.size());
      for (std::size_t r = 0; r < rows.size(); ++r) {
        std::map<std::string, int> g_kernel = given_ax;
        g_kernel[l_name] = rows[r];
        if (variant != BridgeVariant::Mediation) g_kernel[a_name] = a;
        Tensor pw = joint.conditional({w_name}, g_kernel);
        for (int w = 0; w < nw; ++w) K(r, w) = pw[w];
        std::map<std::string, int> g_rhs = g_kernel;
        g_rhs[a_name] = variant == BridgeVariant::Mediation ? 1 : a;
        rhs[r] = joint.cond_mean_y(g_rhs);
      }
      NnlsResult sol = nnls(K, rhs);
      finish_cell(K, rhs, sol, tol, cell);
      any_evaluated = true;
      all_ok = all_ok && cell.feasible;
      res.cells.push_back(std::move(cell));
    }
  }
  res.overall_feasible = any_evaluated && all_ok;
  return res;
}

BridgeCheckResult check_treatment_bridge(const JointPMF& joint, double tol) {
  const Codebook& cb = joint.codebook();
  const int ax_z = required_axis(cb, VarRole::TreatmentProxy, "treatment proxy");
  const int ax_u = required_axis(cb, VarRole::LatentConfounder, "latent confounder");
  const int ax_a = required_axis(cb, VarRole::Treatment, "treatment");
  const std::string z_name = cb.var(ax_z).name;
  const std::string u_name = cb.var(ax_u).name;
  const std::string a_name = cb.var(ax_a).name;
  const int nz = cb.cardinality(ax_z);
  const int nu = cb.cardinality(ax_u);

  BridgeCheckResult res;
  res.kind = BridgeKind::TreatmentQ;
  res.variant = BridgeVariant::Confounder;
  res.tolerance = tol;

  bool any_evaluated = false;
  bool all_ok = true;
  for (const auto& xcell : covariate_cells(cb)) {
    for (int a : {0, 1}) {
      BridgeCell cell;
      cell.cell = xcell;
      cell.cell.emplace_back(a_name, a);

      std::map<std::string, int> base(xcell.begin(), xcell.end());
      std::map<std::string, int> comp = base;
      base[a_name] = a;
      comp[a_name] = 1 - a;
      if (joint.prob(base) <= 0.0 || joint.prob(comp) <= 0.0) {
        cell.skipped = true;
        cell.note = "an arm has zero mass in this covariate cell; skipped";
        res.cells.push_back(std::move(cell));
        continue;
      }

      Tensor pu_a = joint.conditional({u_name}, base);    // p(u|a,x)
      Tensor pu_comp = joint.conditional({u_name}, comp);  // p(u|1-a,x)
      std::vector<int> rows;
      for (int u = 0; u < nu; ++u) {
        if (pu_a[u] <= 0.0 && pu_comp[u] <= 0.0) continue;  // level absent here
        if (pu_a[u] <= 0.0) {
          std::ostringstream os;
          os << "treatment bridge rhs undefined: p(u=" << u << "|a=" << a
             << ",x)=0 but the complement arm has mass there";
          throw PositivityViolation(os.str());
        }
        rows.push_back(u);
      }

      Eigen::MatrixXd K(rows.size(), nz);
      Eigen::VectorXd rhs(rows.size());
      for (std::size_t r = 0; r < rows.size(); ++r) {
        std::map<std::string, int> g = base;
        g[u_name] = rows[r];
        Tensor pz = joint.conditional({z_name}, g);
        for (int z = 0; z < nz; ++z) K(r, z) = pz[z];
        rhs[r] = pu_comp[rows[r]] / pu_a[rows[r]];
      }
      NnlsResult sol = nnls(K, rhs);
      finish_cell(K, rhs, sol, tol, cell);

      // q's defining property integrates to 1 against p(z|a,x); recorded so
      // callers can audit feasible solutions.
      Tensor pz_ax = joint.conditional({z_name}, base);
      double norm = 0.0;
      for (int z = 0; z < nz; ++z) norm += cell.solution[z] * pz_ax[z];
      cell.q_normalization = norm;

      any_evaluated = true;
      all_ok = all_ok && cell.feasible;
      res.cells.push_back(std::move(cell));
    }
  }
  res.overall_feasible = any_evaluated && all_ok;
  return res;
}

}  // namespace proxibound
