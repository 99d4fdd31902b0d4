#include "proxibound/lse.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "proxibound/errors.hpp"

namespace proxibound {

double lse(std::span<const double> values, double alpha) {
  if (values.empty()) throw Error("lse of an empty list");
  if (alpha == 0.0 || !std::isfinite(alpha)) throw Error("lse needs finite nonzero alpha");
  // Shift by the element the limit selects: alpha*(x - shift) <= 0 for all x.
  double shift = alpha > 0 ? *std::max_element(values.begin(), values.end())
                           : *std::min_element(values.begin(), values.end());
  double acc = 0.0;
  for (double v : values) acc += std::exp(alpha * (v - shift));
  return shift + std::log(acc) / alpha;
}

double lse2(double a, double b, double alpha) {
  std::array<double, 2> v{a, b};
  return lse(v, alpha);
}

}  // namespace proxibound
