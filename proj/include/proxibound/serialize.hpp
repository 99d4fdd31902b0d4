#pragma once

#include <string>

#include <json.hpp>

#include "proxibound/bootstrap.hpp"
#include "proxibound/bounds.hpp"
#include "proxibound/bridge.hpp"
#include "proxibound/codebook.hpp"
#include "proxibound/dataset.hpp"
#include "proxibound/dgp.hpp"
#include "proxibound/joint_pmf.hpp"
#include "proxibound/oracle.hpp"

namespace proxibound {

using nlohmann::json;

json to_json(const Codebook& cb);
Codebook codebook_from_json(const json& j);

json to_json(const JointPMF& pmf);
JointPMF joint_from_json(const json& j);

json to_json(const DGPSpec& spec);
DGPSpec dgp_spec_from_json(const json& j);

json to_json(const OracleTruth& truth);
json to_json(const Interval& iv);
json to_json(const BoundsReport& report);
json to_json(const CIReport& report, bool include_replicates = false);
json to_json(const BridgeCheckResult& result);

// File helpers; IoError on filesystem trouble, SchemaError on malformed JSON.
json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const json& j);
Dataset load_dataset_csv(const std::string& path, const Codebook& observed_cb);
void save_dataset_csv(const std::string& path, const Dataset& data);
void save_replicates_csv(const std::string& path, const CIReport& report);

}  // namespace proxibound
