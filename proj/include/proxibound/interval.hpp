#pragma once

#include <map>
#include <span>
#include <string>

namespace proxibound {

struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  double width() const { return upper - lower; }
  bool contains(double v, double tol = 0.0) const { return v >= lower - tol && v <= upper + tol; }
  bool contains(const Interval& o, double tol = 0.0) const {
    return o.lower >= lower - tol && o.upper <= upper + tol;
  }
};

inline Interval operator-(const Interval& a, const Interval& b) {
  return {a.lower - b.upper, a.upper - b.lower};
}
inline Interval operator+(const Interval& a, const Interval& b) {
  return {a.lower + b.lower, a.upper + b.upper};
}

// Identification target. The (a) variants carry the treatment arm in the name;
// helpers below map between the two spellings.
enum class Estimand {
  EttMean0,      // E[Y^(0) | A=1]
  EttMean1,      // E[Y^(1) | A=0]
  PoMean0,       // E[Y^(0)]
  PoMean1,       // E[Y^(1)]
  Ett,           // E[Y^(1)-Y^(0) | A=1]
  Ate,           // E[Y^(1)-Y^(0)]
  MedCrossWorld, // E[Y^(1, M^(0))]
  Nie,           // E[Y^(1)] - E[Y^(1, M^(0))]
  Nde,           // E[Y^(1, M^(0))] - E[Y^(0)]
  FdPoMean0,     // E[Y^(0)], front-door identification
  FdPoMean1,     // E[Y^(1)], front-door identification
  TreatedMean,   // E[Y | A=1], point-identified composition input
};

enum class Method { W, Z, WZ, Mediation, Frontdoor };

std::string to_string(Estimand e);
std::string to_string(Method m);
Estimand estimand_from_string(const std::string& s);
Method method_from_string(const std::string& s);

Estimand ett_mean(int a);
Estimand po_mean(int a);
Estimand fd_po_mean(int a);

// Interval difference composition for ATE / ETT / NIE / NDE from the required
// component intervals; throws when a component is missing.
Interval compose_effect(const std::map<Estimand, Interval>& parts, Estimand target);

// Pointwise intersection; throws EmptyIntersection when the result is empty.
Interval intersect_bounds(std::span<const Interval> intervals);

}  // namespace proxibound
