#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "proxibound/bounds.hpp"
#include "proxibound/dataset.hpp"

namespace proxibound {

// What to estimate on each (re)sample.
struct EstimatorSpec {
  Method method = Method::W;
  Estimand estimand = Estimand::EttMean0;
  double alpha = 50.0;
  double lambda = 0.0;
};

struct ReplicateSummary {
  double min = 0, q25 = 0, median = 0, q75 = 0, max = 0;
};

struct CIReport {
  EstimatorSpec spec;
  int B = 0;
  double level = 0.95;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string rng_id;
  Interval point_hard;
  Interval point_smoothed;  // the (psi_L, psi_U) the CI is anchored to
  Interval ci;
  bool widened = false;     // raw CI missed part of the point interval; hull reported
  int retries_used = 0;     // replicate re-draws after estimator preconditions failed
  ReplicateSummary lower_summary, upper_summary;
  std::vector<double> rep_lower, rep_upper;  // all B replicate endpoint pairs
};

// Basic bootstrap for the smoothed bound pair: resamples whole records B
// times, lower CI end 2*psi_L - Q_{1-(1-level)/2}(psi*_L), upper end
// 2*psi_U - Q_{(1-level)/2}(psi*_U), with nearest-rank quantiles
// (index ceil(B*beta), floored at 1). A recentred interval that fails to
// contain the point smoothed interval (inversion included) is widened to
// their containing hull and flagged, so the CI always covers the estimated
// identified set. Replicate b draws from the derived stream
// (seed, b, attempt); a replicate whose estimator raises a precondition
// error is retried on a fresh derived stream up to 10 times before the
// whole call gives up. Deterministic for any worker count.
CIReport bootstrap_ci(const Dataset& data, const EstimatorSpec& spec, int B, double level,
                      std::uint64_t seed, int workers = 1);

}  // namespace proxibound
