// Bootstrap tests: worker-count invariance of every replicate, the basic-CI
// arithmetic recomputed independently from the exposed replicates, retry
// behavior on resamples that lose a whole treatment arm, and input checks.

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "proxibound/bootstrap.hpp"
#include "proxibound/dgp.hpp"
#include "proxibound/errors.hpp"
#include "proxibound/rng.hpp"

using namespace proxibound;
using doctest::Approx;

namespace {

// Independent nearest-rank quantile: 1-based rank ceil(B*beta), floored at 1.
double my_rank(std::vector<double> v, double beta) {
  std::sort(v.begin(), v.end());
  int rank = static_cast<int>(std::ceil(v.size() * beta));
  if (rank < 1) rank = 1;
  if (rank > static_cast<int>(v.size())) rank = static_cast<int>(v.size());
  return v[rank - 1];
}

// Recompute the reported CI (including the containment guard) from scratch.
Interval my_ci(const CIReport& r, bool* widened) {
  double beta_lo = (1.0 - r.level) / 2.0;
  double lo = 2.0 * r.point_smoothed.lower - my_rank(r.rep_lower, 1.0 - beta_lo);
  double hi = 2.0 * r.point_smoothed.upper - my_rank(r.rep_upper, beta_lo);
  *widened = lo > r.point_smoothed.lower || hi < r.point_smoothed.upper;
  if (*widened)
    return {std::min({lo, hi, r.point_smoothed.lower}),
            std::max({lo, hi, r.point_smoothed.upper})};
  return {lo, hi};
}

Dataset sparse_arm_dataset() {
  // seven treated records, exactly one control: resamples drop the control arm
  // with probability (7/8)^8, which trips the lambda=0 Z estimator
  Codebook cb({{"Z", 2, VarRole::TreatmentProxy}, {"A", 2, VarRole::Treatment},
               {"Y", 2, VarRole::Outcome}},
              {0.0, 1.0});
  return Dataset(cb, {0, 0, 1,   //
                      0, 1, 1,  1, 1, 0,  0, 1, 1,  1, 1, 1,  0, 1, 0,  1, 1, 1,  0, 1, 1});
}

}  // namespace

TEST_CASE("bootstrap replicates and CI are identical for any worker count") {
  JointPMF joint = build_joint(pbt::load_spec_small());
  Dataset data = draw_dataset(joint, 400, 61);
  EstimatorSpec spec{Method::W, Estimand::EttMean0, 50.0, 0.5};
  CIReport base = bootstrap_ci(data, spec, 64, 0.95, 1234, 1);
  for (int workers : {4, 16}) {
    CIReport other = bootstrap_ci(data, spec, 64, 0.95, 1234, workers);
    CHECK(other.rep_lower == base.rep_lower);  // bitwise equality expected
    CHECK(other.rep_upper == base.rep_upper);
    CHECK(other.ci.lower == base.ci.lower);
    CHECK(other.ci.upper == base.ci.upper);
    CHECK(other.retries_used == base.retries_used);
  }
  CHECK(base.rng_id == Rng::kAlgorithmId);
  CHECK(base.n == 400);
  CHECK(base.B == 64);

  // different seed moves the replicates
  CIReport shifted = bootstrap_ci(data, spec, 64, 0.95, 1235, 1);
  CHECK(shifted.rep_lower != base.rep_lower);
}

TEST_CASE("CI endpoints follow the basic-bootstrap arithmetic exactly") {
  JointPMF joint = build_joint(pbt::load_spec_small());
  Dataset data = draw_dataset(joint, 300, 62);
  for (auto [method, estimand] : std::vector<std::pair<Method, Estimand>>{
           {Method::W, Estimand::EttMean0},
           {Method::Z, Estimand::PoMean1},
           {Method::WZ, Estimand::Ate}}) {
    EstimatorSpec spec{method, estimand, 50.0, 0.5};
    for (double level : {0.95, 0.8}) {
      CIReport r = bootstrap_ci(data, spec, 33, level, 99, 4);
      bool widened = false;
      Interval want = my_ci(r, &widened);
      CHECK(r.ci.lower == Approx(want.lower).epsilon(1e-14));
      CHECK(r.ci.upper == Approx(want.upper).epsilon(1e-14));
      CHECK(r.widened == widened);
      CHECK(r.ci.lower <= r.ci.upper);  // guard forbids inverted output
      // the guarded CI always covers the estimated identified set
      CHECK(r.ci.lower <= r.point_smoothed.lower);
      CHECK(r.ci.upper >= r.point_smoothed.upper);

      // replicates summarize consistently
      CHECK(r.lower_summary.min ==
            Approx(*std::min_element(r.rep_lower.begin(), r.rep_lower.end())));
      CHECK(r.upper_summary.max ==
            Approx(*std::max_element(r.rep_upper.begin(), r.rep_upper.end())));
      CHECK(r.lower_summary.median == Approx(my_rank(r.rep_lower, 0.5)));
      CHECK(r.upper_summary.q75 == Approx(my_rank(r.rep_upper, 0.75)));
    }
  }
}

TEST_CASE("point intervals equal a direct estimate on the full data") {
  JointPMF joint = build_joint(pbt::load_spec_small());
  Dataset data = draw_dataset(joint, 250, 63);
  EstimatorSpec spec{Method::Z, Estimand::EttMean0, 50.0, 0.5};
  CIReport r = bootstrap_ci(data, spec, 5, 0.95, 7, 1);
  FrequencyModel m = FrequencyModel::from_dataset(data, spec.lambda);
  BoundsReport direct = estimate_bounds(m, spec.method, spec.estimand, spec.alpha);
  CHECK(r.point_hard.lower == direct.hard.lower);
  CHECK(r.point_hard.upper == direct.hard.upper);
  CHECK(r.point_smoothed.lower == direct.smoothed.lower);
  CHECK(r.point_smoothed.upper == direct.smoothed.upper);
}

TEST_CASE("B=1 degenerates to a single replicate") {
  JointPMF joint = build_joint(pbt::load_spec_small());
  Dataset data = draw_dataset(joint, 200, 64);
  EstimatorSpec spec{Method::W, Estimand::EttMean0, 50.0, 0.5};
  CIReport r = bootstrap_ci(data, spec, 1, 0.95, 11, 1);
  REQUIRE(r.rep_lower.size() == 1);
  if (!r.widened) {
    CHECK(r.ci.lower == Approx(2 * r.point_smoothed.lower - r.rep_lower[0]).epsilon(1e-14));
    CHECK(r.ci.upper == Approx(2 * r.point_smoothed.upper - r.rep_upper[0]).epsilon(1e-14));
  }
  CHECK(r.lower_summary.min == r.lower_summary.max);
}

TEST_CASE("resamples that drop an arm are retried deterministically") {
  Dataset data = sparse_arm_dataset();
  EstimatorSpec spec{Method::Z, Estimand::EttMean0, 50.0, 0.0};
  CIReport r = bootstrap_ci(data, spec, 30, 0.95, 5, 1);
  CHECK(r.retries_used > 0);  // (7/8)^8 ~ 0.34 per replicate: some must retry
  CIReport again = bootstrap_ci(data, spec, 30, 0.95, 5, 4);
  CHECK(again.retries_used == r.retries_used);
  CHECK(again.rep_lower == r.rep_lower);
  CHECK(again.rep_upper == r.rep_upper);

  // smoothing defines every conditional, so no retries are ever needed
  EstimatorSpec smooth{Method::Z, Estimand::EttMean0, 50.0, 0.5};
  CIReport rs = bootstrap_ci(data, smooth, 30, 0.95, 5, 1);
  CHECK(rs.retries_used == 0);
}

TEST_CASE("bootstrap validates B and level") {
  Dataset data = sparse_arm_dataset();
  EstimatorSpec spec{Method::Z, Estimand::EttMean0, 50.0, 0.5};
  CHECK_THROWS_AS(bootstrap_ci(data, spec, 0, 0.95, 1, 1), SchemaError);
  CHECK_THROWS_AS(bootstrap_ci(data, spec, -3, 0.95, 1, 1), SchemaError);
  CHECK_THROWS_AS(bootstrap_ci(data, spec, 10, 1.0, 1, 1), SchemaError);
  CHECK_THROWS_AS(bootstrap_ci(data, spec, 10, -0.1, 1, 1), SchemaError);
  CHECK_NOTHROW(bootstrap_ci(data, spec, 2, 0.0, 1, 1));  // level 0: both medians
}
