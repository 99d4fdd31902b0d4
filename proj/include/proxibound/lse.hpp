#pragma once

#include <span>

namespace proxibound {

// Scaled log-sum-exp: lse(x; alpha) = log(sum_i exp(alpha * x_i)) / alpha.
// alpha > 0 approaches max x_i from above, alpha < 0 approaches min x_i from
// below; in both directions the error is at most log(n)/|alpha|. Evaluated
// with the extremal element shifted out, so large |alpha * x| cannot overflow.
double lse(std::span<const double> values, double alpha);

double lse2(double a, double b, double alpha);

}  // namespace proxibound
