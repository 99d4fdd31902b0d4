#include "proxibound/study.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "proxibound/bootstrap.hpp"
#include "proxibound/bounds.hpp"
#include "proxibound/bridge.hpp"
#include "proxibound/errors.hpp"
#include "proxibound/frequency_model.hpp"
#include "proxibound/parallel.hpp"
#include "proxibound/rng.hpp"
#include "proxibound/serialize.hpp"

namespace proxibound {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kCoverTol = 1e-12;  // guards boundary-rounding misses only

// One replication's per-method measurements.
struct RepOutcome {
  bool failed = false;
  std::string error;
  std::vector<double> hard_w, smooth_w, ci_w;
  std::vector<char> hard_cov, smooth_cov, ci_cov, ci_point_cov;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void validate(const StudyConfig& c) {
  if (c.grid.empty()) throw SchemaError("study config: empty grid");
  if (c.R < 1) throw SchemaError("study config: R must be >= 1");
  if (c.methods.empty()) throw SchemaError("study config: no methods listed");
  if (c.with_ci && c.B < 1) throw SchemaError("study config: B must be >= 1");
  if (c.level < 0.0 || c.level >= 1.0) throw SchemaError("study config: level must be in [0,1)");
  if (c.workers < 1) throw SchemaError("study config: workers must be >= 1");
  for (const auto& p : c.grid)
    if (p.n < 1) throw SchemaError("study config: n must be >= 1");
}

// Bridge-feasibility gate matching each family's bound assumptions: both
// bridges for the confounder family, the outcome bridge for the mediation
// families.
bool spec_feasible(Family family, const JointPMF& joint) {
  switch (family) {
    case Family::Confounder:
      return check_outcome_bridge(joint, BridgeVariant::Confounder).overall_feasible &&
             check_treatment_bridge(joint).overall_feasible;
    case Family::Mediation:
      return check_outcome_bridge(joint, BridgeVariant::Mediation).overall_feasible;
    case Family::Frontdoor:
      return check_outcome_bridge(joint, BridgeVariant::Frontdoor).overall_feasible;
  }
  return false;
}

RepOutcome run_replication(const StudyConfig& c, const StudyPoint& point, std::uint64_t task_key) {
  RepOutcome out;
  try {
    const std::uint64_t spec_key = Rng::derive_key(task_key, 0);
    DGPSpec spec = sample_dgp_spec(c.family, point.cards, spec_key);
    JointPMF joint = build_joint(spec);
    if (c.require_feasible) {
      constexpr int kMaxCandidates = 20000;
      int t = 0;
      while (!spec_feasible(c.family, joint)) {
        if (++t >= kMaxCandidates)
          throw SchemaError("no bridge-feasible spec within " + std::to_string(kMaxCandidates) +
                            " candidate draws");
        spec = sample_dgp_spec(c.family, point.cards, Rng::derive_key(spec_key, t));
        joint = build_joint(spec);
      }
    }
    OracleTruth truth = oracle_estimands(joint);
    double target = oracle_value(truth, c.estimand);
    Dataset data = draw_dataset(joint, point.n, Rng::derive_key(task_key, 1));
    FrequencyModel model = FrequencyModel::from_dataset(data, c.lambda);
    for (std::size_t mi = 0; mi < c.methods.size(); ++mi) {
      BoundsReport rep = estimate_bounds(model, c.methods[mi], c.estimand, c.alpha);
      out.hard_w.push_back(rep.hard.width());
      out.smooth_w.push_back(rep.smoothed.width());
      out.hard_cov.push_back(rep.hard.contains(target, kCoverTol));
      out.smooth_cov.push_back(rep.smoothed.contains(target, kCoverTol));
      if (c.with_ci) {
        EstimatorSpec es{c.methods[mi], c.estimand, c.alpha, c.lambda};
        CIReport ci = bootstrap_ci(data, es, c.B, c.level,
                                   Rng::derive_key(task_key, 2 + static_cast<std::uint64_t>(mi)),
                                   /*workers=*/1);
        out.ci_w.push_back(ci.ci.width());
        out.ci_cov.push_back(ci.ci.contains(target, kCoverTol));
        out.ci_point_cov.push_back(ci.ci.contains(ci.point_smoothed, kCoverTol));
      }
    }
  } catch (const Error& e) {
    out = RepOutcome{};
    out.failed = true;
    out.error = e.what();
  }
  return out;
}

}  // namespace

double oracle_value(const OracleTruth& truth, Estimand e) {
  switch (e) {
    case Estimand::EttMean0: return truth.ett_mean[0];
    case Estimand::EttMean1: return truth.ett_mean[1];
    case Estimand::PoMean0: return truth.po_mean[0];
    case Estimand::PoMean1: return truth.po_mean[1];
    case Estimand::Ett: return truth.theta_ett;
    case Estimand::Ate: return truth.theta_ate;
    case Estimand::FdPoMean0: return truth.po_mean[0];
    case Estimand::FdPoMean1: return truth.po_mean[1];
    case Estimand::TreatedMean: return truth.treated_mean;
    case Estimand::MedCrossWorld:
    case Estimand::Nie:
    case Estimand::Nde:
      if (!truth.has_mediation)
        throw SchemaError("oracle truth carries no mediation estimands for this family");
      if (e == Estimand::MedCrossWorld) return truth.cross_world;
      return e == Estimand::Nie ? truth.nie : truth.nde;
  }
  throw SchemaError("unknown estimand");
}

StudyResult run_study(const StudyConfig& config) {
  validate(config);
  const std::size_t n_points = config.grid.size();
  const std::size_t reps = static_cast<std::size_t>(config.R);
  std::vector<RepOutcome> slots(n_points * reps);

  parallel_for(slots.size(), config.workers, [&](std::size_t t) {
    const StudyPoint& point = config.grid[t / reps];
    slots[t] = run_replication(config, point, Rng::derive_key(config.seed, t));
  });

  StudyResult res;
  res.config = config;
  for (std::size_t g = 0; g < n_points; ++g) {
    // Quarantine failures once per grid point so every method aggregates over
    // the same replication set.
    int failed = 0;
    for (std::size_t r = 0; r < reps; ++r) {
      const RepOutcome& o = slots[g * reps + r];
      if (o.failed) {
        ++failed;
        res.failures.push_back(
            {static_cast<int>(g), static_cast<int>(r), o.error});
      }
    }
    for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
      StudyRow row;
      row.grid_index = static_cast<int>(g);
      row.cards = config.grid[g].cards;
      row.n = config.grid[g].n;
      row.method = config.methods[mi];
      row.failed = failed;
      double hw = 0, sw = 0, cw = 0;
      int hc = 0, sc = 0, cc = 0, cpc = 0;
      for (std::size_t r = 0; r < reps; ++r) {
        const RepOutcome& o = slots[g * reps + r];
        if (o.failed) continue;
        ++row.ok;
        hw += o.hard_w[mi];
        sw += o.smooth_w[mi];
        hc += o.hard_cov[mi];
        sc += o.smooth_cov[mi];
        if (config.with_ci) {
          cw += o.ci_w[mi];
          cc += o.ci_cov[mi];
          cpc += o.ci_point_cov[mi];
        }
      }
      const double denom = row.ok > 0 ? row.ok : 1;
      row.avg_hard_width = hw / denom;
      row.avg_smoothed_width = sw / denom;
      row.hard_coverage = hc / denom;
      row.smoothed_coverage = sc / denom;
      row.avg_ci_width = config.with_ci ? cw / denom : kNaN;
      row.ci_coverage = config.with_ci ? cc / denom : kNaN;
      row.ci_point_coverage = config.with_ci ? cpc / denom : kNaN;
      res.rows.push_back(std::move(row));
    }
  }
  return res;
}

void write_study_csv(std::ostream& out, const StudyResult& res) {
  out << "family,grid_index,card_u,card_x,card_m,card_w,card_z,card_y,n,method,estimand,"
         "replications,ok,failed,avg_hard_width,avg_smoothed_width,hard_coverage,"
         "smoothed_coverage,avg_ci_width,ci_coverage,ci_point_coverage\n";
  auto card = [](const std::map<std::string, int>& cards, const char* k) {
    auto it = cards.find(k);
    return it == cards.end() ? 0 : it->second;
  };
  for (const auto& row : res.rows) {
    out << to_string(res.config.family) << ',' << row.grid_index << ',' << card(row.cards, "U")
        << ',' << card(row.cards, "X") << ',' << card(row.cards, "M") << ',' << card(row.cards, "W")
        << ',' << card(row.cards, "Z") << ',' << card(row.cards, "Y") << ',' << row.n << ','
        << to_string(row.method) << ',' << to_string(res.config.estimand) << ',' << res.config.R
        << ',' << row.ok << ',' << row.failed << ',' << fmt(row.avg_hard_width) << ','
        << fmt(row.avg_smoothed_width) << ',' << fmt(row.hard_coverage) << ','
        << fmt(row.smoothed_coverage) << ',';
    if (res.config.with_ci)
      out << fmt(row.avg_ci_width) << ',' << fmt(row.ci_coverage) << ','
          << fmt(row.ci_point_coverage);
    else
      out << ",,";
    out << '\n';
  }
}

json study_config_to_json(const StudyConfig& config) {
  json grid = json::array();
  for (const auto& p : config.grid) grid.push_back({{"cardinalities", p.cards}, {"n", p.n}});
  json methods = json::array();
  for (Method m : config.methods) methods.push_back(to_string(m));
  return json{{"family", to_string(config.family)},
              {"grid", std::move(grid)},
              {"R", config.R},
              {"methods", std::move(methods)},
              {"estimand", to_string(config.estimand)},
              {"alpha", std::isfinite(config.alpha) ? json(config.alpha) : json("inf")},
              {"lambda", config.lambda},
              {"require_feasible", config.require_feasible},
              {"with_ci", config.with_ci},
              {"B", config.B},
              {"level", config.level},
              {"seed", config.seed},
              {"workers", config.workers},
              {"rng", std::string(Rng::kAlgorithmId)}};
}

StudyConfig study_config_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("study config: expected an object");
  StudyConfig c;
  auto family_it = j.find("family");
  if (family_it == j.end()) throw SchemaError("study config: missing 'family'");
  c.family = family_from_string(family_it->get<std::string>());

  // Grid comes either explicit ("grid": [{cardinalities, n}...]) or as a
  // cross product of "cardinalities" (map or list of maps) with "n" (number
  // or list), cardinalities outer.
  if (auto it = j.find("grid"); it != j.end()) {
    for (const auto& e : *it) {
      StudyPoint p;
      auto ci = e.find("cardinalities");
      auto ni = e.find("n");
      if (ci == e.end() || ni == e.end())
        throw SchemaError("study config: grid entries need 'cardinalities' and 'n'");
      p.cards = ci->get<std::map<std::string, int>>();
      p.n = ni->get<std::size_t>();
      c.grid.push_back(std::move(p));
    }
  } else {
    auto ci = j.find("cardinalities");
    auto ni = j.find("n");
    if (ci == j.end() || ni == j.end())
      throw SchemaError("study config: need 'grid' or 'cardinalities' + 'n'");
    std::vector<std::map<std::string, int>> cards_list;
    if (ci->is_array())
      for (const auto& e : *ci) cards_list.push_back(e.get<std::map<std::string, int>>());
    else
      cards_list.push_back(ci->get<std::map<std::string, int>>());
    std::vector<std::size_t> n_list;
    if (ni->is_array())
      for (const auto& e : *ni) n_list.push_back(e.get<std::size_t>());
    else
      n_list.push_back(ni->get<std::size_t>());
    for (const auto& cards : cards_list)
      for (std::size_t n : n_list) c.grid.push_back({cards, n});
  }

  if (auto it = j.find("R"); it != j.end()) c.R = it->get<int>();
  if (auto it = j.find("methods"); it != j.end())
    for (const auto& e : *it) c.methods.push_back(method_from_string(e.get<std::string>()));
  if (c.methods.empty()) c.methods = {Method::W, Method::Z};
  if (auto it = j.find("estimand"); it != j.end())
    c.estimand = estimand_from_string(it->get<std::string>());
  if (auto it = j.find("alpha"); it != j.end())
    c.alpha = it->is_string() ? std::numeric_limits<double>::infinity() : it->get<double>();
  if (auto it = j.find("lambda"); it != j.end()) c.lambda = it->get<double>();
  if (auto it = j.find("require_feasible"); it != j.end()) c.require_feasible = it->get<bool>();
  if (auto it = j.find("with_ci"); it != j.end()) c.with_ci = it->get<bool>();
  if (auto it = j.find("B"); it != j.end()) c.B = it->get<int>();
  if (auto it = j.find("level"); it != j.end()) c.level = it->get<double>();
  if (auto it = j.find("seed"); it != j.end()) c.seed = it->get<std::uint64_t>();
  if (auto it = j.find("workers"); it != j.end()) c.workers = it->get<int>();
  validate(c);
  return c;
}

json study_to_json(const StudyResult& res) {
  json rows = json::array();
  for (const auto& row : res.rows) {
    json r{{"grid_index", row.grid_index},
           {"cardinalities", row.cards},
           {"n", row.n},
           {"method", to_string(row.method)},
           {"ok", row.ok},
           {"failed", row.failed},
           {"avg_hard_width", row.avg_hard_width},
           {"avg_smoothed_width", row.avg_smoothed_width},
           {"hard_coverage", row.hard_coverage},
           {"smoothed_coverage", row.smoothed_coverage}};
    if (res.config.with_ci) {
      r["avg_ci_width"] = row.avg_ci_width;
      r["ci_coverage"] = row.ci_coverage;
      r["ci_point_coverage"] = row.ci_point_coverage;
    }
    rows.push_back(std::move(r));
  }
  json failures = json::array();
  for (const auto& f : res.failures)
    failures.push_back(
        {{"grid_index", f.grid_index}, {"replication", f.replication}, {"message", f.message}});
  return json{{"config", study_config_to_json(res.config)},
              {"rows", std::move(rows)},
              {"failures", std::move(failures)}};
}

}  // namespace proxibound
