// proxibound: partial-identification bounds for causal effects under
// proxy-measured confounding, from the command line.
//
// Subcommands: simulate | bounds | ci | bridge-check | study.
// Exit codes: 0 success, 2 config/schema error, 3 estimator precondition
// failure, 4 I/O error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "proxibound/bootstrap.hpp"
#include "proxibound/bounds.hpp"
#include "proxibound/bridge.hpp"
#include "proxibound/errors.hpp"
#include "proxibound/frequency_model.hpp"
#include "proxibound/rng.hpp"
#include "proxibound/serialize.hpp"
#include "proxibound/study.hpp"

namespace pb = proxibound;
using pb::json;

namespace {

double parse_alpha(const std::string& s) {
  if (s == "inf" || s == "infinity" || s == "hard")
    return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw pb::SchemaError("cannot parse alpha '" + s + "' (number or 'inf')");
  }
}

std::map<std::string, int> parse_cards(const std::string& s) {
  std::map<std::string, int> cards;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw pb::SchemaError("cards entry '" + item + "' is not NAME=COUNT");
    try {
      cards[item.substr(0, eq)] = std::stoi(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw pb::SchemaError("cards entry '" + item + "' is not NAME=COUNT");
    }
  }
  if (cards.empty()) throw pb::SchemaError("empty --cards");
  return cards;
}

void emit(const json& j, const std::string& out_path) {
  if (out_path.empty())
    std::cout << j.dump(2) << '\n';
  else
    pb::save_json_file(out_path, j);
}

// Effective-configuration echo carried by every report.
json config_echo(std::initializer_list<std::pair<std::string, json>> kv) {
  json j{{"rng", std::string(pb::Rng::kAlgorithmId)}};
  for (const auto& [k, v] : kv) j[k] = v;
  return j;
}

struct SimulateArgs {
  std::string family = "confounder";
  std::string cards = "U=4,X=4,W=4,Z=4,Y=3";
  std::string spec_path;
  std::size_t n = 5000;
  int R = 1;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
};

int cmd_simulate(const SimulateArgs& a) {
  std::error_code ec;
  std::filesystem::create_directories(a.out_dir, ec);
  if (ec) throw pb::IoError("cannot create directory '" + a.out_dir + "': " + ec.message());

  json manifest;
  manifest["config"] = config_echo({{"command", "simulate"},
                                    {"family", a.family},
                                    {"n", a.n},
                                    {"R", a.R},
                                    {"seed", a.seed},
                                    {"out_dir", a.out_dir}});
  json files = json::array();
  for (int r = 0; r < a.R; ++r) {
    pb::DGPSpec spec;
    if (!a.spec_path.empty()) {
      spec = pb::dgp_spec_from_json(pb::load_json_file(a.spec_path));
    } else {
      spec = pb::sample_dgp_spec(pb::family_from_string(a.family), parse_cards(a.cards),
                                 pb::Rng::derive_key(a.seed, static_cast<std::uint64_t>(r)));
    }
    pb::JointPMF joint = pb::build_joint(spec);
    pb::OracleTruth truth = pb::oracle_estimands(joint);
    std::uint64_t draw_seed = a.spec_path.empty()
                                  ? spec.seed
                                  : pb::Rng::derive_key(a.seed, static_cast<std::uint64_t>(r));
    pb::Dataset data = pb::draw_dataset(joint, a.n, draw_seed);

    char tag[32];
    std::snprintf(tag, sizeof(tag), "%04d", r);
    std::string base = a.out_dir + "/rep_" + tag;
    pb::save_json_file(base + "_spec.json", pb::to_json(spec));
    pb::save_json_file(base + "_oracle.json", pb::to_json(truth));
    pb::save_dataset_csv(base + "_data.csv", data);
    files.push_back({{"spec", base + "_spec.json"},
                     {"oracle", base + "_oracle.json"},
                     {"data", base + "_data.csv"}});
  }
  manifest["files"] = std::move(files);
  pb::save_json_file(a.out_dir + "/manifest.json", manifest);
  std::cout << manifest.dump(2) << '\n';
  return 0;
}

struct BoundsArgs {
  std::string data_path, codebook_path;
  std::string method = "W";
  std::string estimand = "ETT-mean(0)";
  std::string alpha = "50";
  double lambda = 0.0;
  std::string out_path;
};

int cmd_bounds(const BoundsArgs& a) {
  pb::Codebook cb = pb::codebook_from_json(pb::load_json_file(a.codebook_path)).observed();
  pb::Dataset data = pb::load_dataset_csv(a.data_path, cb);
  pb::FrequencyModel model = pb::FrequencyModel::from_dataset(data, a.lambda);
  pb::BoundsReport report =
      pb::estimate_bounds(model, pb::method_from_string(a.method),
                          pb::estimand_from_string(a.estimand), parse_alpha(a.alpha));
  json out{{"config", config_echo({{"command", "bounds"},
                                   {"data", a.data_path},
                                   {"codebook", a.codebook_path},
                                   {"lambda", a.lambda},
                                   {"n", data.n()}})},
           {"result", pb::to_json(report)}};
  emit(out, a.out_path);
  return 0;
}

struct CiArgs {
  std::string data_path, codebook_path;
  std::string method = "W";
  std::string estimand = "ETT-mean(0)";
  std::string alpha = "50";
  double lambda = 0.0;
  int B = 500;
  double level = 0.95;
  std::uint64_t seed = 1;
  int workers = 1;
  std::string out_path, replicates_csv;
};

int cmd_ci(const CiArgs& a) {
  pb::Codebook cb = pb::codebook_from_json(pb::load_json_file(a.codebook_path)).observed();
  pb::Dataset data = pb::load_dataset_csv(a.data_path, cb);
  pb::EstimatorSpec spec{pb::method_from_string(a.method), pb::estimand_from_string(a.estimand),
                         parse_alpha(a.alpha), a.lambda};
  pb::CIReport report = pb::bootstrap_ci(data, spec, a.B, a.level, a.seed, a.workers);
  if (!a.replicates_csv.empty()) pb::save_replicates_csv(a.replicates_csv, report);
  json out{{"config", config_echo({{"command", "ci"},
                                   {"data", a.data_path},
                                   {"codebook", a.codebook_path},
                                   {"workers", a.workers}})},
           {"result", pb::to_json(report)}};
  emit(out, a.out_path);
  return 0;
}

struct BridgeArgs {
  std::string input_path;
  std::string kind = "outcome-h";
  std::string variant;
  double tol = 1e-8;
  std::string out_path;
};

int cmd_bridge_check(const BridgeArgs& a) {
  json j = pb::load_json_file(a.input_path);
  pb::JointPMF joint = [&] {
    if (j.contains("family")) return pb::build_joint(pb::dgp_spec_from_json(j));
    return pb::joint_from_json(j);
  }();
  pb::BridgeVariant variant = pb::BridgeVariant::Confounder;
  if (!a.variant.empty()) {
    variant = pb::bridge_variant_from_string(a.variant);
  } else if (j.contains("family")) {
    switch (pb::family_from_string(j["family"].get<std::string>())) {
      case pb::Family::Confounder: variant = pb::BridgeVariant::Confounder; break;
      case pb::Family::Mediation: variant = pb::BridgeVariant::Mediation; break;
      case pb::Family::Frontdoor: variant = pb::BridgeVariant::Frontdoor; break;
    }
  }
  pb::BridgeCheckResult result;
  if (a.kind == "outcome-h")
    result = pb::check_outcome_bridge(joint, variant, a.tol);
  else if (a.kind == "treatment-q")
    result = pb::check_treatment_bridge(joint, a.tol);
  else
    throw pb::SchemaError("unknown bridge kind '" + a.kind + "' (outcome-h | treatment-q)");
  json out{{"config",
            config_echo({{"command", "bridge-check"}, {"input", a.input_path}, {"tol", a.tol}})},
           {"result", pb::to_json(result)}};
  emit(out, a.out_path);
  return 0;
}

struct StudyArgs {
  std::string config_path;
  std::string out_csv = "study.csv";
  std::string out_json = "study.json";
  // -1 / empty sentinel = keep the config file's value.
  int R = -1, B = -1, workers = -1;
  std::int64_t seed = -1;
  std::string estimand, alpha;
  int with_ci = -1;
};

int cmd_study(const StudyArgs& a) {
  pb::StudyConfig config = pb::study_config_from_json(pb::load_json_file(a.config_path));
  if (a.R >= 0) config.R = a.R;
  if (a.B >= 0) config.B = a.B;
  if (a.workers >= 0) config.workers = a.workers;
  if (a.seed >= 0) config.seed = static_cast<std::uint64_t>(a.seed);
  if (!a.estimand.empty()) config.estimand = pb::estimand_from_string(a.estimand);
  if (!a.alpha.empty()) config.alpha = parse_alpha(a.alpha);
  if (a.with_ci >= 0) config.with_ci = a.with_ci != 0;

  pb::StudyResult result = pb::run_study(config);

  std::ofstream csv(a.out_csv);
  if (!csv) throw pb::IoError("cannot open '" + a.out_csv + "' for writing");
  pb::write_study_csv(csv, result);
  if (!csv) throw pb::IoError("failed writing '" + a.out_csv + "'");
  pb::save_json_file(a.out_json, pb::study_to_json(result));
  std::cout << "study: " << result.rows.size() << " summary rows, " << result.failures.size()
            << " quarantined replications -> " << a.out_csv << ", " << a.out_json << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partial-identification bounds on causal effects from proxy variables"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Sample DGPs, datasets, and oracle truths");
  c_sim->add_option("--family", sim.family, "confounder | mediation | frontdoor");
  c_sim->add_option("--cards", sim.cards, "cardinalities, e.g. U=4,X=4,W=4,Z=4,Y=3");
  c_sim->add_option("--spec", sim.spec_path, "existing DGPSpec JSON (instead of sampling)");
  c_sim->add_option("--n", sim.n, "records per dataset");
  c_sim->add_option("--R", sim.R, "replications");
  c_sim->add_option("--seed", sim.seed, "master seed");
  c_sim->add_option("--out-dir", sim.out_dir, "output directory");

  BoundsArgs bnd;
  auto* c_bnd = app.add_subcommand("bounds", "Bounds from a dataset");
  c_bnd->add_option("--data", bnd.data_path, "dataset CSV")->required();
  c_bnd->add_option("--codebook", bnd.codebook_path, "codebook JSON")->required();
  c_bnd->add_option("--method", bnd.method, "W | Z | WZ | mediation | frontdoor");
  c_bnd->add_option("--estimand", bnd.estimand, "e.g. ETT-mean(0), PO-mean(1), ATE");
  c_bnd->add_option("--alpha", bnd.alpha, "smoothing sharpness; 'inf' = hard bounds");
  c_bnd->add_option("--lambda", bnd.lambda, "add-lambda cell smoothing");
  c_bnd->add_option("--out", bnd.out_path, "report JSON path (default stdout)");

  CiArgs ci;
  auto* c_ci = app.add_subcommand("ci", "Bootstrap confidence interval for the bounds");
  c_ci->add_option("--data", ci.data_path, "dataset CSV")->required();
  c_ci->add_option("--codebook", ci.codebook_path, "codebook JSON")->required();
  c_ci->add_option("--method", ci.method, "W | Z | WZ | mediation | frontdoor");
  c_ci->add_option("--estimand", ci.estimand, "target estimand");
  c_ci->add_option("--alpha", ci.alpha, "smoothing sharpness; 'inf' = hard bounds");
  c_ci->add_option("--lambda", ci.lambda, "add-lambda cell smoothing");
  c_ci->add_option("--B", ci.B, "bootstrap replicates");
  c_ci->add_option("--level", ci.level, "confidence level");
  c_ci->add_option("--seed", ci.seed, "bootstrap seed");
  c_ci->add_option("--workers", ci.workers, "worker threads");
  c_ci->add_option("--replicates-csv", ci.replicates_csv, "dump replicate endpoints CSV");
  c_ci->add_option("--out", ci.out_path, "report JSON path (default stdout)");

  BridgeArgs br;
  auto* c_br = app.add_subcommand("bridge-check", "Bridge-function feasibility on a joint");
  c_br->add_option("--input", br.input_path, "DGPSpec JSON or joint JSON")->required();
  c_br->add_option("--kind", br.kind, "outcome-h | treatment-q");
  c_br->add_option("--variant", br.variant, "confounder | mediation | frontdoor");
  c_br->add_option("--tol", br.tol, "feasibility residual tolerance");
  c_br->add_option("--out", br.out_path, "report JSON path (default stdout)");

  StudyArgs st;
  auto* c_st = app.add_subcommand("study", "Monte Carlo study from a config file");
  c_st->add_option("--config", st.config_path, "StudyConfig JSON")->required();
  c_st->add_option("--out-csv", st.out_csv, "summary CSV path");
  c_st->add_option("--out-json", st.out_json, "summary JSON path");
  c_st->add_option("--R", st.R, "override replications");
  c_st->add_option("--B", st.B, "override bootstrap replicates");
  c_st->add_option("--workers", st.workers, "override worker threads");
  c_st->add_option("--seed", st.seed, "override seed");
  c_st->add_option("--estimand", st.estimand, "override estimand");
  c_st->add_option("--alpha", st.alpha, "override alpha");
  c_st->add_option("--with-ci", st.with_ci, "override CI toggle (0/1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*c_sim) return cmd_simulate(sim);
    if (*c_bnd) return cmd_bounds(bnd);
    if (*c_ci) return cmd_ci(ci);
    if (*c_br) return cmd_bridge_check(br);
    if (*c_st) return cmd_study(st);
  } catch (const pb::SchemaError& e) {
    std::cerr << "error (config/schema): " << e.what() << '\n';
    return 2;
  } catch (const pb::IoError& e) {
    std::cerr << "error (i/o): " << e.what() << '\n';
    return 4;
  } catch (const pb::Error& e) {
    std::cerr << "error (estimator precondition): " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
