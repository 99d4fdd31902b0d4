#pragma once

#include <map>
#include <string>
#include <vector>

#include "proxibound/codebook.hpp"
#include "proxibound/tensor.hpp"

namespace proxibound {

// Exact joint distribution over every codebook axis (latent ones included).
// Entries are non-negative and renormalized to sum exactly to 1 on
// construction, so downstream conditionals never inherit rounding drift.
class JointPMF {
 public:
  JointPMF(Codebook cb, Tensor table);

  const Codebook& codebook() const { return cb_; }
  const Tensor& table() const { return table_; }

  // p(keep-axes); axis order follows the codebook.
  JointPMF marginal(const std::vector<std::string>& keep) const;

  // p(target-axes | given assignment) as a Tensor over the target axes (in
  // codebook order). Throws ZeroConditioningMass when p(given) = 0.
  Tensor conditional(const std::vector<std::string>& target,
                     const std::map<std::string, int>& given) const;

  // E[Y | given] using the codebook's y_values.
  double cond_mean_y(const std::map<std::string, int>& given) const;

  // p(given-event).
  double prob(const std::map<std::string, int>& given) const;

  JointPMF observed_margin() const;

 private:
  Codebook cb_;
  Tensor table_;
};

}  // namespace proxibound
