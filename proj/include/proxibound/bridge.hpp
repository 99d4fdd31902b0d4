#pragma once

#include <string>
#include <utility>
#include <vector>

#include "proxibound/joint_pmf.hpp"

namespace proxibound {

enum class BridgeKind { OutcomeH, TreatmentQ };
enum class BridgeVariant { Confounder, Mediation, Frontdoor };

std::string to_string(BridgeKind k);
std::string to_string(BridgeVariant v);
BridgeVariant bridge_variant_from_string(const std::string& s);

struct BridgeCell {
  std::vector<std::pair<std::string, int>> cell;  // conditioning assignment
  bool skipped = false;
  bool feasible = false;
  double residual = 0.0;             // infinity norm of K h - rhs after clipping
  std::vector<double> solution;      // h over W categories, or q over Z
  double q_normalization = 0.0;      // sum_z q(z) p(z|a,x); only for TreatmentQ
  std::string note;
};

struct BridgeCheckResult {
  BridgeKind kind = BridgeKind::OutcomeH;
  BridgeVariant variant = BridgeVariant::Confounder;
  double tolerance = 1e-8;
  std::vector<BridgeCell> cells;
  bool overall_feasible = false;  // AND over evaluated cells
};

// Discrete outcome-bridge feasibility: one non-negative least-squares system
// per conditioning cell, feasible when the residual infinity-norm is within
// tolerance. Confounder variant matches h over W to E[Y|a,x,u] against the
// kernel p(w|a,x,u); mediation matches E[Y|A=1,x,m] against p(w|x,m);
// front-door matches E[Y|a,x,m] against p(w|a,x,m).
BridgeCheckResult check_outcome_bridge(const JointPMF& joint, BridgeVariant variant,
                                       double tol = 1e-8);

// Treatment-bridge feasibility (confounder configuration): q over Z with
// sum_z q(z) p(z|a,x,u) = p(u|1-a,x)/p(u|a,x) for all u. Throws
// PositivityViolation when the ratio's denominator vanishes where the
// numerator does not.
BridgeCheckResult check_treatment_bridge(const JointPMF& joint, double tol = 1e-8);

}  // namespace proxibound
