#pragma once

#include "proxibound/joint_pmf.hpp"

namespace proxibound {

// Ground-truth estimands computed from a full joint (latents visible), by
// direct summation over the relevant adjustment or nesting formula. The
// family is inferred from which latent roles the codebook carries.
struct OracleTruth {
  double ett_mean[2] = {0.0, 0.0};  // E[Y^(a) | A=1-a]
  double po_mean[2] = {0.0, 0.0};   // E[Y^(a)]
  double treated_mean = 0.0;        // E[Y | A=1]
  double theta_ett = 0.0;           // E[Y^(1)-Y^(0) | A=1]
  double theta_ate = 0.0;
  bool has_mediation = false;       // cross_world/nie/nde populated
  double cross_world = 0.0;         // E[Y^(1, M^(0))]
  double nie = 0.0;
  double nde = 0.0;
};

OracleTruth oracle_estimands(const JointPMF& joint);

}  // namespace proxibound
