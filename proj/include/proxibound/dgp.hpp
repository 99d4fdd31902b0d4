#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "proxibound/dataset.hpp"
#include "proxibound/joint_pmf.hpp"

namespace proxibound {

enum class Family { Confounder, Mediation, Frontdoor };

std::string to_string(Family f);
Family family_from_string(const std::string& s);

// One softmax conditional: level t given parent values v gets the logit
// beta[t][0] + sum_j beta[t][1+j] * v_j, where a parent's numeric value is
// its 0-based category index.
struct SoftmaxCoef {
  std::vector<std::string> parents;
  std::vector<std::vector<double>> beta;  // [target level][1 + #parents]
};

// Full description of a latent-variable simulation model. Factorizations:
//   confounder: p(u,x) p(w|u,x) p(z|u,x) p(a|u,x,z) p(y|u,x,w,a)
//   mediation:  p(x) p(a|x) p(m|a,x) p(w|m,x) p(y|m,a,x,w)
//   front-door: p(u,x) p(a|u,x) p(m|a,x) p(w|m,x) p(y|m,x,w,u)
struct DGPSpec {
  Family family = Family::Confounder;
  std::uint64_t seed = 0;
  int card_u = 0, card_x = 0, card_m = 0, card_w = 0, card_z = 0, card_y = 0;  // 0 = absent
  std::vector<double> base_weights;  // p(U,X) row-major (or p(X) for mediation)
  SoftmaxCoef coef_a, coef_w, coef_z, coef_m, coef_y;
  std::vector<double> y_values;  // empty = default 1..card_y

  std::vector<double> effective_y_values() const;
  Codebook codebook() const;
};

// Draws base weights Unif[0.1,1] (then normalized) and every softmax
// coefficient Unif[-0.5,0.5]; proxy-relevance coefficients (U->W and U->Z in
// the confounder family, M->W otherwise) are redrawn until |beta| >= 0.01.
// cards keys: family axes ("U","X","W","Z","Y" / "X","M","W","Y" /
// "U","X","M","W","Y"). Latent cardinalities may be 1; observed ones need
// >= 2. Deterministic in (family, cards, seed).
DGPSpec sample_dgp_spec(Family family, const std::map<std::string, int>& cards,
                        std::uint64_t seed);

// Expands the factorization into the exact joint table.
JointPMF build_joint(const DGPSpec& spec);

// n i.i.d. draws from the observed margin; deterministic in (joint, n, seed).
Dataset draw_dataset(const JointPMF& joint, std::size_t n, std::uint64_t seed);

}  // namespace proxibound
