#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "proxibound/dgp.hpp"
#include "proxibound/interval.hpp"
#include "proxibound/oracle.hpp"

namespace proxibound {

// One cardinality/sample-size combination to replicate at.
struct StudyPoint {
  std::map<std::string, int> cards;
  std::size_t n = 0;
};

// Monte Carlo study: for every grid point, R independent replications of
// sample spec -> build joint -> oracle -> draw data -> bounds (+ CI), then
// per-(point, method) aggregation.
struct StudyConfig {
  Family family = Family::Confounder;
  std::vector<StudyPoint> grid;  // evaluated in order
  int R = 1;
  std::vector<Method> methods;
  Estimand estimand = Estimand::EttMean0;
  double alpha = 50.0;
  double lambda = 0.0;
  // Condition each replication's spec on bridge feasibility (rejection
  // re-draw): outcome + treatment bridge for the confounder family, outcome
  // bridge for the mediation families. Off by default.
  bool require_feasible = false;
  bool with_ci = false;
  int B = 500;
  double level = 0.95;
  std::uint64_t seed = 0;
  int workers = 1;
};

struct StudyRow {
  int grid_index = 0;
  std::map<std::string, int> cards;
  std::size_t n = 0;
  Method method = Method::W;
  int ok = 0;
  int failed = 0;
  double avg_hard_width = 0.0;
  double avg_smoothed_width = 0.0;
  double hard_coverage = 0.0;      // fraction of ok reps whose hard interval holds the truth
  double smoothed_coverage = 0.0;
  double avg_ci_width = 0.0;       // NaN-free only when with_ci
  double ci_coverage = 0.0;
  double ci_point_coverage = 0.0;  // fraction where the CI contains the point interval
};

struct StudyFailure {
  int grid_index = 0;
  int replication = 0;
  std::string message;
};

struct StudyResult {
  StudyConfig config;
  std::vector<StudyRow> rows;        // grid-major, then config method order
  std::vector<StudyFailure> failures;
};

// Replication r at grid point g runs on streams derived from
// key = derive_key(seed, g*R + r): spec seed derive_key(key, 0), data seed
// derive_key(key, 1), bootstrap seed for method i derive_key(key, 2 + i).
// With require_feasible, candidate t of the rejection loop uses spec seed
// derive_key(derive_key(key, 0), t); t = 0 therefore reproduces the
// unconditioned draw whenever that draw is already feasible.
// A replication that raises any library error is quarantined: logged,
// excluded from every aggregate at that grid point, and counted in `failed`.
// Output is byte-identical for any worker count.
StudyResult run_study(const StudyConfig& config);

void write_study_csv(std::ostream& out, const StudyResult& res);

nlohmann::json study_config_to_json(const StudyConfig& config);
StudyConfig study_config_from_json(const nlohmann::json& j);
nlohmann::json study_to_json(const StudyResult& res);

// The oracle ground truth for one estimand; SchemaError when the truth does
// not carry that estimand (mediation values outside the mediation family).
double oracle_value(const OracleTruth& truth, Estimand e);

}  // namespace proxibound
