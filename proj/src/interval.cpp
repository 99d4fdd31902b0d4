#include "proxibound/interval.hpp"

#include <algorithm>
#include <cctype>

#include "proxibound/errors.hpp"

namespace proxibound {

std::string to_string(Estimand e) {
  switch (e) {
    case Estimand::EttMean0: return "ETT-mean(0)";
    case Estimand::EttMean1: return "ETT-mean(1)";
    case Estimand::PoMean0: return "PO-mean(0)";
    case Estimand::PoMean1: return "PO-mean(1)";
    case Estimand::Ett: return "ETT";
    case Estimand::Ate: return "ATE";
    case Estimand::MedCrossWorld: return "mediation-cross-world";
    case Estimand::Nie: return "NIE";
    case Estimand::Nde: return "NDE";
    case Estimand::FdPoMean0: return "frontdoor-PO-mean(0)";
    case Estimand::FdPoMean1: return "frontdoor-PO-mean(1)";
    case Estimand::TreatedMean: return "treated-outcome-mean";
  }
  throw Error("unknown estimand");
}

std::string to_string(Method m) {
  switch (m) {
    case Method::W: return "W";
    case Method::Z: return "Z";
    case Method::WZ: return "WZ";
    case Method::Mediation: return "mediation";
    case Method::Frontdoor: return "frontdoor";
  }
  throw Error("unknown method");
}

namespace {

// Lowercase with separators dropped, so CLI spellings like "ett-mean-0" and
// the canonical "ETT-mean(0)" both resolve.
std::string canon(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '-' || c == '_' || c == '(' || c == ')' || c == ' ') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

}  // namespace

Estimand estimand_from_string(const std::string& s) {
  const std::string c = canon(s);
  for (Estimand e : {Estimand::EttMean0, Estimand::EttMean1, Estimand::PoMean0, Estimand::PoMean1,
                     Estimand::Ett, Estimand::Ate, Estimand::MedCrossWorld, Estimand::Nie,
                     Estimand::Nde, Estimand::FdPoMean0, Estimand::FdPoMean1, Estimand::TreatedMean})
    if (canon(to_string(e)) == c) return e;
  if (c == "crossworld" || c == "mediationcrossworld") return Estimand::MedCrossWorld;
  throw SchemaError("unknown estimand: " + s);
}

Method method_from_string(const std::string& s) {
  const std::string c = canon(s);
  for (Method m : {Method::W, Method::Z, Method::WZ, Method::Mediation, Method::Frontdoor})
    if (canon(to_string(m)) == c) return m;
  throw SchemaError("unknown method: " + s);
}

Estimand ett_mean(int a) { return a == 0 ? Estimand::EttMean0 : Estimand::EttMean1; }
Estimand po_mean(int a) { return a == 0 ? Estimand::PoMean0 : Estimand::PoMean1; }
Estimand fd_po_mean(int a) { return a == 0 ? Estimand::FdPoMean0 : Estimand::FdPoMean1; }

namespace {

const Interval& part(const std::map<Estimand, Interval>& parts, Estimand key) {
  auto it = parts.find(key);
  if (it == parts.end()) throw Error("compose_effect: missing component " + to_string(key));
  return it->second;
}

// Looks for the plain PO-mean first, then the front-door identification.
const Interval& po_part(const std::map<Estimand, Interval>& parts, int a) {
  if (auto it = parts.find(po_mean(a)); it != parts.end()) return it->second;
  return part(parts, fd_po_mean(a));
}

}  // namespace

Interval compose_effect(const std::map<Estimand, Interval>& parts, Estimand target) {
  switch (target) {
    case Estimand::Ate:
      return po_part(parts, 1) - po_part(parts, 0);
    case Estimand::Ett:
      return part(parts, Estimand::TreatedMean) - part(parts, Estimand::EttMean0);
    case Estimand::Nie:
      return po_part(parts, 1) - part(parts, Estimand::MedCrossWorld);
    case Estimand::Nde:
      return part(parts, Estimand::MedCrossWorld) - po_part(parts, 0);
    default:
      throw Error("compose_effect target must be ATE, ETT, NIE or NDE");
  }
}

Interval intersect_bounds(std::span<const Interval> intervals) {
  if (intervals.empty()) throw Error("intersect_bounds of an empty list");
  Interval out = intervals[0];
  for (const Interval& i : intervals.subspan(1)) {
    out.lower = std::max(out.lower, i.lower);
    out.upper = std::min(out.upper, i.upper);
  }
  if (out.lower > out.upper) throw EmptyIntersection("intervals have empty intersection");
  return out;
}

}  // namespace proxibound
