#include "proxibound/serialize.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "proxibound/errors.hpp"

namespace proxibound {
namespace {

// JSON has no infinity literal; alpha = inf (hard bounds) round-trips as "inf".
json alpha_to_json(double alpha) {
  if (std::isfinite(alpha)) return alpha;
  return "inf";
}

const json& require_key(const json& j, const char* key, const char* ctx) {
  auto it = j.find(key);
  if (it == j.end())
    throw SchemaError(std::string(ctx) + ": missing required key '" + key + "'");
  return *it;
}

json summary_to_json(const ReplicateSummary& s) {
  return json{{"min", s.min}, {"q25", s.q25}, {"median", s.median}, {"q75", s.q75}, {"max", s.max}};
}

json coef_to_json(const SoftmaxCoef& c) {
  return json{{"parents", c.parents}, {"beta", c.beta}};
}

SoftmaxCoef coef_from_json(const json& j, const std::string& target) {
  if (!j.is_object()) throw SchemaError("coefficients." + target + ": expected an object");
  SoftmaxCoef c;
  c.parents = require_key(j, "parents", "coefficients").get<std::vector<std::string>>();
  c.beta = require_key(j, "beta", "coefficients").get<std::vector<std::vector<double>>>();
  for (const auto& row : c.beta)
    if (row.size() != 1 + c.parents.size())
      throw SchemaError("coefficients." + target + ": beta rows need 1 + #parents entries");
  return c;
}

}  // namespace

json to_json(const Codebook& cb) {
  json vars = json::array();
  for (const auto& v : cb.variables())
    vars.push_back({{"name", v.name}, {"cardinality", v.cardinality}, {"role", to_string(v.role)}});
  return json{{"variables", std::move(vars)}, {"y_values", cb.y_values()}};
}

Codebook codebook_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("codebook: expected an object");
  const json& jv = require_key(j, "variables", "codebook");
  if (!jv.is_array()) throw SchemaError("codebook.variables: expected an array");
  std::vector<Variable> vars;
  for (const auto& e : jv) {
    Variable v;
    v.name = require_key(e, "name", "codebook.variables").get<std::string>();
    v.cardinality = require_key(e, "cardinality", "codebook.variables").get<int>();
    v.role = role_from_string(require_key(e, "role", "codebook.variables").get<std::string>());
    vars.push_back(std::move(v));
  }
  std::vector<double> yv;
  if (auto it = j.find("y_values"); it != j.end()) yv = it->get<std::vector<double>>();
  return Codebook(std::move(vars), std::move(yv));
}

json to_json(const JointPMF& pmf) {
  return json{{"codebook", to_json(pmf.codebook())}, {"table", pmf.table().data()}};
}

JointPMF joint_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("joint: expected an object");
  Codebook cb = codebook_from_json(require_key(j, "codebook", "joint"));
  auto flat = require_key(j, "table", "joint").get<std::vector<double>>();
  Tensor t(cb.dims());
  if (t.size() != flat.size())
    throw SchemaError("joint.table: expected " + std::to_string(t.size()) + " entries, got " +
                      std::to_string(flat.size()));
  t.data() = std::move(flat);
  return JointPMF(std::move(cb), std::move(t));
}

json to_json(const DGPSpec& spec) {
  json cards = json::object();
  auto put = [&](const char* k, int c) {
    if (c > 0) cards[k] = c;
  };
  put("U", spec.card_u);
  put("X", spec.card_x);
  put("M", spec.card_m);
  put("W", spec.card_w);
  put("Z", spec.card_z);
  put("Y", spec.card_y);

  json coefs = json::object();
  auto put_coef = [&](const char* k, const SoftmaxCoef& c) {
    if (!c.beta.empty()) coefs[k] = coef_to_json(c);
  };
  put_coef("A", spec.coef_a);
  put_coef("M", spec.coef_m);
  put_coef("W", spec.coef_w);
  put_coef("Z", spec.coef_z);
  put_coef("Y", spec.coef_y);

  json out{{"family", to_string(spec.family)},
           {"seed", spec.seed},
           {"cardinalities", std::move(cards)},
           {"base_weights", spec.base_weights},
           {"coefficients", std::move(coefs)}};
  if (!spec.y_values.empty()) out["y_values"] = spec.y_values;
  return out;
}

DGPSpec dgp_spec_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("dgp spec: expected an object");
  DGPSpec spec;
  spec.family = family_from_string(require_key(j, "family", "dgp spec").get<std::string>());
  if (auto it = j.find("seed"); it != j.end()) spec.seed = it->get<std::uint64_t>();

  const json& cards = require_key(j, "cardinalities", "dgp spec");
  for (const auto& [key, val] : cards.items()) {
    int c = val.get<int>();
    if (key == "U")
      spec.card_u = c;
    else if (key == "X")
      spec.card_x = c;
    else if (key == "M")
      spec.card_m = c;
    else if (key == "W")
      spec.card_w = c;
    else if (key == "Z")
      spec.card_z = c;
    else if (key == "Y")
      spec.card_y = c;
    else
      throw SchemaError("dgp spec: unknown cardinality key '" + key + "'");
  }

  spec.base_weights = require_key(j, "base_weights", "dgp spec").get<std::vector<double>>();

  const json& coefs = require_key(j, "coefficients", "dgp spec");
  for (const auto& [key, val] : coefs.items()) {
    SoftmaxCoef c = coef_from_json(val, key);
    if (key == "A")
      spec.coef_a = std::move(c);
    else if (key == "M")
      spec.coef_m = std::move(c);
    else if (key == "W")
      spec.coef_w = std::move(c);
    else if (key == "Z")
      spec.coef_z = std::move(c);
    else if (key == "Y")
      spec.coef_y = std::move(c);
    else
      throw SchemaError("dgp spec: unknown coefficient target '" + key + "'");
  }

  if (auto it = j.find("y_values"); it != j.end()) spec.y_values = it->get<std::vector<double>>();
  return spec;
}

json to_json(const OracleTruth& truth) {
  json out{{"ett_mean", {truth.ett_mean[0], truth.ett_mean[1]}},
           {"po_mean", {truth.po_mean[0], truth.po_mean[1]}},
           {"treated_mean", truth.treated_mean},
           {"theta_ett", truth.theta_ett},
           {"theta_ate", truth.theta_ate}};
  if (truth.has_mediation) {
    out["cross_world"] = truth.cross_world;
    out["nie"] = truth.nie;
    out["nde"] = truth.nde;
  }
  return out;
}

json to_json(const Interval& iv) {
  return json{{"lower", iv.lower}, {"upper", iv.upper}, {"width", iv.width()}};
}

json to_json(const BoundsReport& report) {
  json details = json::array();
  for (const auto& d : report.ratio_details)
    details.push_back({{"x", d.x},
                       {"min", d.min},
                       {"max", d.max},
                       {"lse_neg", d.lse_neg},
                       {"lse_pos", d.lse_pos},
                       {"clamped_slice", d.clamped_slice}});
  return json{{"estimand", to_string(report.estimand)},
              {"method", to_string(report.method)},
              {"alpha", alpha_to_json(report.alpha)},
              {"hard", to_json(report.hard)},
              {"smoothed", to_json(report.smoothed)},
              {"clamped", {{"lower", report.clamped.lower}, {"upper", report.clamped.upper}}},
              {"ratio_details", std::move(details)},
              {"diagnostics", report.diagnostics}};
}

json to_json(const CIReport& report, bool include_replicates) {
  json out{{"method", to_string(report.spec.method)},
           {"estimand", to_string(report.spec.estimand)},
           {"alpha", alpha_to_json(report.spec.alpha)},
           {"lambda", report.spec.lambda},
           {"B", report.B},
           {"level", report.level},
           {"n", report.n},
           {"seed", report.seed},
           {"rng", report.rng_id},
           {"point_hard", to_json(report.point_hard)},
           {"point_smoothed", to_json(report.point_smoothed)},
           {"ci", to_json(report.ci)},
           {"widened", report.widened},
           {"retries_used", report.retries_used},
           {"replicate_summaries",
            {{"lower", summary_to_json(report.lower_summary)},
             {"upper", summary_to_json(report.upper_summary)}}}};
  if (include_replicates)
    out["replicates"] = json{{"lower", report.rep_lower}, {"upper", report.rep_upper}};
  return out;
}

json to_json(const BridgeCheckResult& result) {
  json cells = json::array();
  for (const auto& c : result.cells) {
    json cell = json::object();
    for (const auto& [name, level] : c.cell) cell[name] = level;
    json e{{"cell", std::move(cell)},
           {"skipped", c.skipped},
           {"feasible", c.feasible},
           {"residual", c.residual},
           {"solution", c.solution},
           {"note", c.note}};
    if (result.kind == BridgeKind::TreatmentQ) e["q_normalization"] = c.q_normalization;
    cells.push_back(std::move(e));
  }
  return json{{"kind", to_string(result.kind)},
              {"variant", to_string(result.variant)},
              {"tolerance", result.tolerance},
              {"overall_feasible", result.overall_feasible},
              {"cells", std::move(cells)}};
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError("malformed JSON in '" + path + "': " + e.what());
  }
}

void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
  if (!out) throw IoError("failed writing '" + path + "'");
}

Dataset load_dataset_csv(const std::string& path, const Codebook& observed_cb) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return Dataset::from_csv(in, observed_cb);
}

void save_dataset_csv(const std::string& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  data.to_csv(out);
  if (!out) throw IoError("failed writing '" + path + "'");
}

void save_replicates_csv(const std::string& path, const CIReport& report) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "replicate,lower,upper\n" << std::setprecision(17);
  for (std::size_t b = 0; b < report.rep_lower.size(); ++b)
    out << b << ',' << report.rep_lower[b] << ',' << report.rep_upper[b] << '\n';
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace proxibound
