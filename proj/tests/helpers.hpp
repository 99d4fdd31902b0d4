#pragma once

#include <map>
#include <string>
#include <vector>

#include "proxibound/dgp.hpp"
#include "proxibound/joint_pmf.hpp"
#include "proxibound/serialize.hpp"

namespace pbt {

inline std::string fixture(const std::string& name) {
  return std::string(PROXIBOUND_FIXTURES_DIR) + "/" + name;
}

inline proxibound::JointPMF load_tiny() {
  return proxibound::joint_from_json(proxibound::load_json_file(fixture("tiny.json")));
}

inline proxibound::DGPSpec load_spec_small() {
  return proxibound::dgp_spec_from_json(proxibound::load_json_file(fixture("spec_small.json")));
}

// Standard sampling grids used by the property suites.
inline std::map<std::string, int> conf_cards(int u, int x, int w, int z, int y = 3) {
  return {{"U", u}, {"X", x}, {"W", w}, {"Z", z}, {"Y", y}};
}
inline std::map<std::string, int> med_cards(int x, int m, int w, int y = 3) {
  return {{"X", x}, {"M", m}, {"W", w}, {"Y", y}};
}
inline std::map<std::string, int> fd_cards(int u, int x, int m, int w, int y = 3) {
  return {{"U", u}, {"X", x}, {"M", m}, {"W", w}, {"Y", y}};
}

}  // namespace pbt
