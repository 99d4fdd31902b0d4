#include "proxibound/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "proxibound/errors.hpp"
#include "proxibound/lse.hpp"

namespace proxibound {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_alpha(double alpha) {
  if (std::isnan(alpha) || alpha <= 0.0) throw SchemaError("alpha must be positive (or infinite)");
}

// The ratio-family derivations multiply extremized factors by conditional
// outcome means and keep inequalities only when those means are non-negative.
void require_nonneg_y(const FrequencyModel& m, const char* who) {
  if (m.y_inf() < 0.0)
    throw SchemaError(std::string(who) + " requires non-negative outcome values");
}

void echo_audit(const FrequencyModel& m, std::vector<std::string>& diags) {
  if (m.lambda() > 0.0 || m.positivity_audit().empty()) return;
  std::map<std::string, int> per_table;
  for (const AuditEntry& e : m.positivity_audit()) ++per_table[e.table];
  std::ostringstream os;
  os << "positivity audit: empty raw cells in";
  for (const auto& [table, count] : per_table) os << " " << table << "(" << count << ")";
  diags.push_back(os.str());
}

struct RatioCore {
  double s_lo = 0.0, s_hi = 0.0;  // sums of hard extremized terms
  double t_lo = 0.0, t_hi = 0.0;  // same with lse in place of min/max
  std::vector<RatioDetail> details;
  std::vector<std::string> diags;
};

// Shared accumulation for every estimator that extremizes the proxy-density
// ratio p(w|num_arm,x)/p(w|den_arm,x) scaled by E[Y|mean_arm,x], over
// covariate cells weighted by `weight`. A cell where some numerator-occupied
// w has zero denominator mass is RatioUndefined and contributes the trivial
// [inf Y, sup Y] slice instead.
RatioCore ratio_core(const FrequencyModel& m, int num_arm, int den_arm, int mean_arm,
                     const std::function<double(int)>& weight, double alpha) {
  const bool finite_alpha = std::isfinite(alpha);
  const double y_lo = m.y_inf(), y_hi = m.y_sup();
  RatioCore out;
  std::vector<double> ratios;
  for (int x = 0; x < m.x_card(); ++x) {
    double wt = weight(x);
    if (wt <= 0.0) continue;

    ratios.clear();
    bool undefined = false;
    for (int w = 0; w < m.w_card(); ++w) {
      if (m.w_in_support(w, den_arm, x))
        continue;  // collected below once support is known complete
      if (m.occupied_wax(w, num_arm, x)) undefined = true;
    }
    if (!undefined) {
      for (int w = 0; w < m.w_card(); ++w)
        if (m.w_in_support(w, den_arm, x))
          ratios.push_back(m.p_w_given_ax(w, num_arm, x) / m.p_w_given_ax(w, den_arm, x));
    }
    if (undefined || ratios.empty()) {
      out.s_lo += wt * y_lo;
      out.s_hi += wt * y_hi;
      out.t_lo += wt * y_lo;
      out.t_hi += wt * y_hi;
      out.details.push_back({x, kNaN, kNaN, kNaN, kNaN, true});
      std::ostringstream os;
      os << "RatioUndefined at x=" << x << ": proxy cell with zero denominator mass; "
         << "slice clamped to the trivial bound";
      out.diags.push_back(os.str());
      continue;
    }
    const double mx = m.mean_y_given_ax(mean_arm, x);
    const double r_min = *std::min_element(ratios.begin(), ratios.end());
    const double r_max = *std::max_element(ratios.begin(), ratios.end());
    const double l_lo = finite_alpha ? lse(ratios, -alpha) : r_min;
    const double l_hi = finite_alpha ? lse(ratios, alpha) : r_max;
    out.s_lo += wt * r_min * mx;
    out.s_hi += wt * r_max * mx;
    out.t_lo += wt * l_lo * mx;
    out.t_hi += wt * l_hi * mx;
    out.details.push_back({x, r_min, r_max, l_lo, l_hi, false});
  }
  return out;
}

// Outer step shared by the clamped ratio estimators: hard bound clamps the
// accumulated sum against the trivial value, smoothed bound replaces the
// clamp by a two-element lse with the log(2)/alpha slack.
void finish_clamped(BoundsReport& r, double trivial_lo, double trivial_hi, const RatioCore& core,
                    double alpha, double offset = 0.0) {
  r.hard.lower = offset + std::max(trivial_lo, core.s_lo);
  r.hard.upper = offset + std::min(trivial_hi, core.s_hi);
  r.clamped.lower = trivial_lo >= core.s_lo;
  r.clamped.upper = trivial_hi <= core.s_hi;
  if (std::isfinite(alpha)) {
    r.smoothed.lower = offset + lse2(trivial_lo, core.t_lo, alpha) - std::log(2.0) / alpha;
    r.smoothed.upper = offset + lse2(trivial_hi, core.t_hi, -alpha) + std::log(2.0) / alpha;
  } else {
    r.smoothed = r.hard;
  }
  r.ratio_details = core.details;
  r.diagnostics = core.diags;
}

BoundsReport make_point_report(Estimand e, Method method, double value, double alpha) {
  BoundsReport r;
  r.estimand = e;
  r.method = method;
  r.alpha = alpha;
  r.hard = {value, value};
  r.smoothed = r.hard;
  r.diagnostics.push_back("point-identified component");
  return r;
}

// Difference composition target = plus - minus, run through compose_effect for
// both the hard and smoothed intervals.
BoundsReport composed_report(Estimand target, Method method, const BoundsReport& plus,
                             const BoundsReport& minus, double alpha) {
  std::map<Estimand, Interval> hard{{plus.estimand, plus.hard}, {minus.estimand, minus.hard}};
  std::map<Estimand, Interval> smoothed{{plus.estimand, plus.smoothed},
                                        {minus.estimand, minus.smoothed}};
  BoundsReport r;
  r.estimand = target;
  r.method = method;
  r.alpha = alpha;
  r.hard = compose_effect(hard, target);
  r.smoothed = compose_effect(smoothed, target);
  r.clamped.lower = plus.clamped.lower || minus.clamped.upper;
  r.clamped.upper = plus.clamped.upper || minus.clamped.lower;
  r.diagnostics.push_back("composed from " + to_string(plus.estimand) + " and " +
                          to_string(minus.estimand));
  for (const auto& d : plus.diagnostics) r.diagnostics.push_back("(+) " + d);
  for (const auto& d : minus.diagnostics) r.diagnostics.push_back("(-) " + d);
  return r;
}

void check_arm(int a) {
  if (a != 0 && a != 1) throw SchemaError("treatment arm must be 0 or 1");
}

}  // namespace

BoundsReport ett_bounds_w(const FrequencyModel& m, int a, double alpha) {
  check_alpha(alpha);
  check_arm(a);
  require_nonneg_y(m, "ett_bounds_w");
  if (!m.has_w()) throw SchemaError("ett_bounds_w needs an outcome proxy W");
  BoundsReport r;
  r.estimand = ett_mean(a);
  r.method = Method::W;
  r.alpha = alpha;
  RatioCore core = ratio_core(
      m, /*num_arm=*/1 - a, /*den_arm=*/a, /*mean_arm=*/a,
      [&](int x) { return m.p_x_given_a(x, 1 - a); }, alpha);
  finish_clamped(r, m.y_inf(), m.y_sup(), core, alpha);
  echo_audit(m, r.diagnostics);
  return r;
}

BoundsReport po_bounds_w(const FrequencyModel& m, int a, double alpha) {
  check_alpha(alpha);
  check_arm(a);
  require_nonneg_y(m, "po_bounds_w");
  if (!m.has_w()) throw SchemaError("po_bounds_w needs an outcome proxy W");
  const bool finite_alpha = std::isfinite(alpha);
  BoundsReport r;
  r.estimand = po_mean(a);
  r.method = Method::W;
  r.alpha = alpha;

  const double point = m.mean_y_given_a(a) * m.p_a(a);
  const double trivial_lo = m.y_inf() * m.p_a(1 - a) + point;
  const double trivial_hi = m.y_sup() * m.p_a(1 - a) + point;

  // E[ I(A=a) Y / extremum_w p(a|w,X) ] with the extremum over occupied
  // (w,x) cells; a zero minimum propensity sends the upper term to +inf and
  // the trivial bound takes over.
  double ipw_lo = 0.0, ipw_hi = 0.0, ipw_lo_sm = 0.0, ipw_hi_sm = 0.0;
  std::vector<double> inv;
  for (int x = 0; x < m.x_card(); ++x) {
    double pax = m.p_ax(a, x);
    if (pax <= 0.0 || (m.lambda() == 0.0 && !m.occupied_ax(a, x))) continue;
    inv.clear();
    for (int w = 0; w < m.w_card(); ++w) {
      if (m.lambda() == 0.0 && !m.occupied_wx(w, x)) continue;
      double p = m.p_a_given_wx(a, w, x);
      inv.push_back(p > 0.0 ? 1.0 / p : kInf);
    }
    if (inv.empty()) throw ZeroConditioningMass("po_bounds_w: no occupied (w,x) cell at x");
    const double inv_min = *std::min_element(inv.begin(), inv.end());
    const double inv_max = *std::max_element(inv.begin(), inv.end());
    const double coef = pax * m.mean_y_given_ax(a, x);  // >= 0; guards 0 * inf below
    ipw_lo += coef * inv_min;
    ipw_hi += coef == 0.0 ? 0.0 : coef * inv_max;  // +inf when some propensity is exactly 0
    double l_lo = inv_min, l_hi = inv_max;
    if (finite_alpha) {
      l_lo = lse(inv, -alpha);
      l_hi = std::isfinite(inv_max) ? lse(inv, alpha) : kInf;
      ipw_lo_sm += coef * l_lo;
      ipw_hi_sm += coef == 0.0 ? 0.0 : coef * l_hi;
    }
    r.ratio_details.push_back({x, inv_min, inv_max, l_lo, l_hi, false});
    if (!std::isfinite(inv_max)) {
      std::ostringstream os;
      os << "RatioUndefined at x=" << x << ": p(a|w,x)=0 for some occupied w; "
         << "upper IPW term infinite, trivial bound binds";
      r.diagnostics.push_back(os.str());
    }
  }
  r.hard.lower = std::max(trivial_lo, ipw_lo);
  r.hard.upper = std::min(trivial_hi, ipw_hi);
  r.clamped.lower = trivial_lo >= ipw_lo;
  r.clamped.upper = trivial_hi <= ipw_hi;
  if (finite_alpha) {
    r.smoothed.lower = lse2(trivial_lo, ipw_lo_sm, alpha) - std::log(2.0) / alpha;
    r.smoothed.upper = lse2(trivial_hi, ipw_hi_sm, -alpha) + std::log(2.0) / alpha;
  } else {
    r.smoothed = r.hard;
  }
  echo_audit(m, r.diagnostics);
  return r;
}

BoundsReport ett_bounds_z(const FrequencyModel& m, int a, double alpha) {
  check_alpha(alpha);
  check_arm(a);
  if (!m.has_z()) throw SchemaError("ett_bounds_z needs a treatment proxy Z");
  const bool finite_alpha = std::isfinite(alpha);
  BoundsReport r;
  r.estimand = ett_mean(a);
  r.method = Method::Z;
  r.alpha = alpha;

  double s_lo = 0.0, s_hi = 0.0, t_lo = 0.0, t_hi = 0.0;
  std::vector<double> vals;
  for (int x = 0; x < m.x_card(); ++x) {
    double wt = m.p_x_given_a(x, 1 - a);
    if (wt <= 0.0) continue;
    vals.clear();
    for (int z = 0; z < m.z_card(); ++z)
      if (m.z_in_support(z, a, x)) vals.push_back(m.mean_y_given_zax(z, a, x));
    if (vals.empty())
      throw ZeroConditioningMass("ett_bounds_z: no occupied (z,a,x) cell at x=" +
                                 std::to_string(x));
    const double v_min = *std::min_element(vals.begin(), vals.end());
    const double v_max = *std::max_element(vals.begin(), vals.end());
    const double l_lo = finite_alpha ? lse(vals, -alpha) : v_min;
    const double l_hi = finite_alpha ? lse(vals, alpha) : v_max;
    s_lo += wt * v_min;
    s_hi += wt * v_max;
    t_lo += wt * l_lo;
    t_hi += wt * l_hi;
    r.ratio_details.push_back({x, v_min, v_max, l_lo, l_hi, false});
  }
  r.hard = {s_lo, s_hi};
  r.smoothed = finite_alpha ? Interval{t_lo, t_hi} : r.hard;
  // The hard interval is a weighted average of conditional means, so it must
  // already sit inside the outcome range; asserted rather than clamped.
  if (s_lo < m.y_inf() - 1e-9 || s_hi > m.y_sup() + 1e-9)
    throw Error("ett_bounds_z: hard bound escaped the outcome range");
  echo_audit(m, r.diagnostics);
  return r;
}

namespace {

// E[Y^(a)] = E[Y^(a)|A=1-a] p(1-a) + E[Y|A=a] p(a): scale an ETT-mean report
// into a PO-mean report. When p(1-a)=0 the interval collapses to the point
// arm without touching the ETT estimator.
BoundsReport po_from_ett(const FrequencyModel& m, int a, double alpha, Estimand target,
                         const std::function<BoundsReport()>& run_ett) {
  const double point = m.mean_y_given_a(a) * m.p_a(a);
  const double p_comp = m.p_a(1 - a);
  BoundsReport r;
  if (p_comp <= 0.0) {
    r.estimand = target;
    r.alpha = alpha;
    r.hard = {point, point};
    r.smoothed = r.hard;
    r.diagnostics.push_back("no mass on arm " + std::to_string(1 - a) +
                            "; interval collapses to the point arm");
    echo_audit(m, r.diagnostics);
    return r;
  }
  BoundsReport ett = run_ett();
  r = ett;
  r.estimand = target;
  r.hard = {ett.hard.lower * p_comp + point, ett.hard.upper * p_comp + point};
  r.smoothed = {ett.smoothed.lower * p_comp + point, ett.smoothed.upper * p_comp + point};
  return r;
}

}  // namespace

BoundsReport po_bounds_z(const FrequencyModel& m, int a, double alpha) {
  check_alpha(alpha);
  check_arm(a);
  BoundsReport r =
      po_from_ett(m, a, alpha, po_mean(a), [&] { return ett_bounds_z(m, a, alpha); });
  r.method = Method::Z;
  return r;
}

BoundsReport ett_bounds_wz(const FrequencyModel& m, int a, double alpha) {
  check_alpha(alpha);
  check_arm(a);
  require_nonneg_y(m, "ett_bounds_wz");
  if (!m.has_w() || !m.has_z()) throw SchemaError("ett_bounds_wz needs both proxies");
  const bool finite_alpha = std::isfinite(alpha);
  BoundsReport r;
  r.estimand = ett_mean(a);
  r.method = Method::WZ;
  r.alpha = alpha;

  RatioCore core;
  std::vector<double> rho;
  for (int x = 0; x < m.x_card(); ++x) {
    double wt = m.p_x_given_a(x, 1 - a);
    if (wt <= 0.0) continue;
    if (m.lambda() == 0.0 && !m.occupied_ax(a, x)) {
      // every (w,z) marginal under (a,x) is empty: same trivial-slice fallback
      // as the single-proxy ratio estimators
      core.s_lo += wt * m.y_inf();
      core.s_hi += wt * m.y_sup();
      core.t_lo += wt * m.y_inf();
      core.t_hi += wt * m.y_sup();
      core.details.push_back({x, kNaN, kNaN, kNaN, kNaN, true});
      core.diags.push_back("RatioUndefined at x=" + std::to_string(x) +
                           ": empty (a,x) cell; slice clamped to the trivial bound");
      continue;
    }
    rho.clear();
    for (int w = 0; w < m.w_card(); ++w) {
      if (!m.w_in_support(w, a, x)) continue;
      double pw = m.p_w_given_ax(w, a, x);
      for (int z = 0; z < m.z_card(); ++z) {
        if (!m.z_in_support(z, a, x)) continue;
        double pz = m.p_z_given_ax(z, a, x);
        rho.push_back(m.p_wz_given_ax(w, z, a, x) / (pw * pz));
      }
    }
    const double mx = m.mean_y_given_ax(a, x);
    const double r_min = *std::min_element(rho.begin(), rho.end());
    const double r_max = *std::max_element(rho.begin(), rho.end());
    const double l_lo = finite_alpha ? lse(rho, -alpha) : r_min;
    const double l_hi = finite_alpha ? lse(rho, alpha) : r_max;
    core.s_lo += wt * r_min * mx;
    core.s_hi += wt * r_max * mx;
    core.t_lo += wt * l_lo * mx;
    core.t_hi += wt * l_hi * mx;
    core.details.push_back({x, r_min, r_max, l_lo, l_hi, false});
  }
  finish_clamped(r, m.y_inf(), m.y_sup(), core, alpha);
  echo_audit(m, r.diagnostics);
  return r;
}

BoundsReport mediation_bound(const FrequencyModel& m, double alpha) {
  check_alpha(alpha);
  require_nonneg_y(m, "mediation_bound");
  if (!m.has_w()) throw SchemaError("mediation_bound needs an outcome proxy W");
  BoundsReport r;
  r.estimand = Estimand::MedCrossWorld;
  r.method = Method::Mediation;
  r.alpha = alpha;
  // ratio p(w|A=0,x)/p(w|A=1,x) scaled by E[Y|A=1,x], weighted by p(x)
  RatioCore core = ratio_core(
      m, /*num_arm=*/0, /*den_arm=*/1, /*mean_arm=*/1, [&](int x) { return m.p_x(x); }, alpha);
  finish_clamped(r, m.y_inf(), m.y_sup(), core, alpha);
  echo_audit(m, r.diagnostics);
  return r;
}

BoundsReport frontdoor_po_bounds(const FrequencyModel& m, int a, double alpha) {
  check_alpha(alpha);
  check_arm(a);
  require_nonneg_y(m, "frontdoor_po_bounds");
  if (!m.has_w()) throw SchemaError("frontdoor_po_bounds needs an outcome proxy W");
  BoundsReport r;
  r.estimand = fd_po_mean(a);
  r.method = Method::Frontdoor;
  r.alpha = alpha;

  const double p_comp = m.p_a(1 - a);
  const double point = m.occupied_a(a) || m.lambda() > 0.0 ? m.mean_y_given_a(a) * m.p_a(a) : 0.0;
  if (p_comp <= 0.0) {
    r.hard = {point, point};
    r.smoothed = r.hard;
    r.diagnostics.push_back("no mass on arm " + std::to_string(1 - a) +
                            "; interval collapses to E[I(A=a)Y]");
    echo_audit(m, r.diagnostics);
    return r;
  }
  // ratio p(w|a,x)/p(w|1-a,x) scaled by E[Y|1-a,x], weighted by p(1-a,x)
  RatioCore core = ratio_core(
      m, /*num_arm=*/a, /*den_arm=*/1 - a, /*mean_arm=*/1 - a,
      [&](int x) { return m.p_ax(1 - a, x); }, alpha);
  finish_clamped(r, m.y_inf() * p_comp, m.y_sup() * p_comp, core, alpha, point);
  echo_audit(m, r.diagnostics);
  return r;
}

BoundsReport estimate_bounds(const FrequencyModel& m, Method method, Estimand estimand,
                             double alpha) {
  check_alpha(alpha);
  auto unsupported = [&]() -> BoundsReport {
    throw SchemaError("estimand " + to_string(estimand) + " is not available under method " +
                      to_string(method));
  };
  switch (method) {
    case Method::W:
    case Method::Z:
    case Method::WZ: {
      auto ett = [&](int a) {
        if (method == Method::W) return ett_bounds_w(m, a, alpha);
        if (method == Method::Z) return ett_bounds_z(m, a, alpha);
        return ett_bounds_wz(m, a, alpha);
      };
      auto po = [&](int a) {
        if (method == Method::W) return po_bounds_w(m, a, alpha);
        if (method == Method::Z) return po_bounds_z(m, a, alpha);
        BoundsReport r = po_from_ett(m, a, alpha, po_mean(a), [&] { return ett(a); });
        r.method = Method::WZ;
        return r;
      };
      switch (estimand) {
        case Estimand::EttMean0: return ett(0);
        case Estimand::EttMean1: return ett(1);
        case Estimand::PoMean0: return po(0);
        case Estimand::PoMean1: return po(1);
        case Estimand::Ate: return composed_report(Estimand::Ate, method, po(1), po(0), alpha);
        case Estimand::Ett: {
          BoundsReport treated =
              make_point_report(Estimand::TreatedMean, method, m.mean_y_given_a(1), alpha);
          return composed_report(Estimand::Ett, method, treated, ett(0), alpha);
        }
        default: return unsupported();
      }
    }
    case Method::Mediation: {
      // E[Y^(a)] is point-identified by the covariate g-formula in this
      // configuration; NIE/NDE compose it with the cross-world interval.
      auto gf = [&](int a) {
        double v = 0.0;
        for (int x = 0; x < m.x_card(); ++x) {
          double px = m.p_x(x);
          if (px > 0.0) v += px * m.mean_y_given_ax(a, x);
        }
        return make_point_report(po_mean(a), Method::Mediation, v, alpha);
      };
      switch (estimand) {
        case Estimand::MedCrossWorld: return mediation_bound(m, alpha);
        case Estimand::PoMean0: return gf(0);
        case Estimand::PoMean1: return gf(1);
        case Estimand::Nie:
          return composed_report(Estimand::Nie, Method::Mediation, gf(1), mediation_bound(m, alpha),
                                 alpha);
        case Estimand::Nde:
          return composed_report(Estimand::Nde, Method::Mediation, mediation_bound(m, alpha), gf(0),
                                 alpha);
        case Estimand::Ate:
          return composed_report(Estimand::Ate, Method::Mediation, gf(1), gf(0), alpha);
        default: return unsupported();
      }
    }
    case Method::Frontdoor: {
      switch (estimand) {
        case Estimand::PoMean0:
        case Estimand::FdPoMean0: return frontdoor_po_bounds(m, 0, alpha);
        case Estimand::PoMean1:
        case Estimand::FdPoMean1: return frontdoor_po_bounds(m, 1, alpha);
        case Estimand::Ate:
          return composed_report(Estimand::Ate, Method::Frontdoor, frontdoor_po_bounds(m, 1, alpha),
                                 frontdoor_po_bounds(m, 0, alpha), alpha);
        default: return unsupported();
      }
    }
  }
  return unsupported();
}

}  // namespace proxibound
