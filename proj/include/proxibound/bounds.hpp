#pragma once

#include <limits>
#include <string>
#include <vector>

#include "proxibound/frequency_model.hpp"
#include "proxibound/interval.hpp"

namespace proxibound {

// Summary of the per-covariate-cell list the estimator extremizes: its hard
// extrema and the log-sum-exp relaxations at -alpha / +alpha. For W-family
// methods the list holds proxy-density ratios, for the Z method conditional
// outcome means, for the PO-W method inverse propensities.
struct RatioDetail {
  int x = 0;
  double min = 0.0;
  double max = 0.0;
  double lse_neg = 0.0;
  double lse_pos = 0.0;
  bool clamped_slice = false;  // RatioUndefined forced this cell to the trivial value
};

struct ClampFlags {
  bool lower = false;  // inf-Y side of the hard bound came from the trivial term
  bool upper = false;
};

struct BoundsReport {
  Estimand estimand = Estimand::EttMean0;
  Method method = Method::W;
  Interval hard;
  Interval smoothed;  // == hard when alpha is infinite
  double alpha = std::numeric_limits<double>::infinity();
  ClampFlags clamped;
  std::vector<RatioDetail> ratio_details;
  std::vector<std::string> diagnostics;
};

// Bounds on E[Y^(a) | A=1-a] from the outcome proxy W.
BoundsReport ett_bounds_w(const FrequencyModel& m, int a, double alpha);

// Bounds on E[Y^(a)] from W via inverse extremized propensities.
BoundsReport po_bounds_w(const FrequencyModel& m, int a, double alpha);

// Bounds on E[Y^(a) | A=1-a] from the treatment proxy Z. Extrema are over
// conditional outcome means, never clamped to the Y range.
BoundsReport ett_bounds_z(const FrequencyModel& m, int a, double alpha);

// Bounds on E[Y^(a)] by arm-mixing the Z interval with the point arm.
BoundsReport po_bounds_z(const FrequencyModel& m, int a, double alpha);

// Bounds on E[Y^(a) | A=1-a] from both proxies jointly via the dependence
// ratio p(w,z|a,x) / (p(w|a,x) p(z|a,x)).
BoundsReport ett_bounds_wz(const FrequencyModel& m, int a, double alpha);

// Bounds on the cross-world mean E[Y^(1, M^(0))]; W proxies the latent
// mediator.
BoundsReport mediation_bound(const FrequencyModel& m, double alpha);

// Bounds on E[Y^(a)] in the front-door configuration, W proxying the latent
// mediator with U allowed to confound A and Y.
BoundsReport frontdoor_po_bounds(const FrequencyModel& m, int a, double alpha);

// Uniform entry point: dispatches a (method, estimand) pair to the estimators
// above, composing difference estimands (ATE/ETT/NIE/NDE) from their parts.
BoundsReport estimate_bounds(const FrequencyModel& m, Method method, Estimand estimand,
                             double alpha);

}  // namespace proxibound
