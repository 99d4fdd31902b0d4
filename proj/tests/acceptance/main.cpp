// Acceptance gate: every release criterion measured end to end against pinned
// reference values and tolerances. Prints one PASS/FAIL line per criterion and
// exits nonzero when any criterion fails. Criterion 9 needs an externally
// supplied clinical extract and reports SKIP when it is absent; everything
// else runs self-contained.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "proxibound/bootstrap.hpp"
#include "proxibound/bounds.hpp"
#include "proxibound/bridge.hpp"
#include "proxibound/dgp.hpp"
#include "proxibound/errors.hpp"
#include "proxibound/frequency_model.hpp"
#include "proxibound/oracle.hpp"
#include "proxibound/parallel.hpp"
#include "proxibound/rng.hpp"
#include "proxibound/serialize.hpp"
#include "proxibound/study.hpp"

namespace pb = proxibound;
using pb::Estimand;
using pb::Family;
using pb::Method;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int pick_workers() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  return static_cast<int>(std::min(8u, hw));
}
const int kWorkers = pick_workers();

std::string fmt(const char* f, ...) {
  va_list ap;
  va_start(ap, f);
  char buf[768];
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

struct Line {
  bool pass = true;
  bool skip = false;
  std::string detail;
  void add(const std::string& s) {
    if (!detail.empty()) detail += "; ";
    detail += s;
  }
  void fail(const std::string& why) {
    pass = false;
    add(why);
  }
  void check(bool ok, const std::string& why) {
    if (!ok) fail(why);
  }
};

bool run_criterion(int id, const char* name, const std::function<void(Line&)>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Line line;
  try {
    body(line);
  } catch (const std::exception& e) {
    line.fail(fmt("unhandled exception: %s", e.what()));
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const char* tag = line.pass ? (line.skip ? "SKIP" : "PASS") : "FAIL";
  std::printf("[%s] criterion %d — %s: %s [%.1fs]\n", tag, id, name,
              line.detail.empty() ? "ok" : line.detail.c_str(), secs);
  std::fflush(stdout);
  return line.pass;
}

std::string fixture(const std::string& name) {
  return std::string(PROXIBOUND_FIXTURES_DIR) + "/" + name;
}

std::map<std::string, int> conf_cards(int u, int x, int w, int z, int y = 3) {
  return {{"U", u}, {"X", x}, {"W", w}, {"Z", z}, {"Y", y}};
}

// ------------------------------------------------------------- criterion 1
// Population hard bounds contain the oracle truth on every random spec that
// passes the family's bridge feasibility gate.

double min_margin(const pb::FrequencyModel& model, const pb::OracleTruth& truth,
                  const std::vector<std::pair<Method, Estimand>>& checks) {
  double worst = kInf;
  for (const auto& [method, est] : checks) {
    pb::BoundsReport r = pb::estimate_bounds(model, method, est, kInf);
    double tv = pb::oracle_value(truth, est);
    worst = std::min({worst, tv - r.hard.lower, r.hard.upper - tv});
  }
  return worst;
}

void pooled_containment(Line& line, const char* label, Family family, int target,
                        std::uint64_t base,
                        const std::function<std::map<std::string, int>(std::size_t)>& cards_of,
                        const std::function<bool(const pb::JointPMF&)>& gate,
                        const std::vector<std::pair<Method, Estimand>>& checks) {
  const int chunk = 250;
  const int cap = 160 * chunk;  // nonnegative bridge solutions are rare on random draws
  int accepted = 0, scanned = 0, violations = 0;
  double worst = kInf;
  while (accepted < target && scanned < cap) {
    std::vector<double> margins(chunk, std::numeric_limits<double>::quiet_NaN());
    pb::parallel_for(chunk, kWorkers, [&](std::size_t j) {
      std::size_t i = static_cast<std::size_t>(scanned) + j;
      pb::DGPSpec spec = pb::sample_dgp_spec(family, cards_of(i), pb::Rng::derive_key(base, i));
      pb::JointPMF joint = pb::build_joint(spec);
      if (!gate(joint)) return;
      pb::OracleTruth truth = pb::oracle_estimands(joint);
      pb::FrequencyModel model = pb::FrequencyModel::from_joint(joint);
      margins[j] = min_margin(model, truth, checks);
    });
    for (int j = 0; j < chunk && accepted < target; ++j) {
      if (std::isnan(margins[j])) continue;
      ++accepted;
      worst = std::min(worst, margins[j]);
      if (margins[j] < -1e-9) ++violations;
    }
    scanned += chunk;
  }
  line.add(fmt("%s: %d feasible specs from %d sampled, min margin %.2e", label, accepted, scanned,
               worst));
  line.check(accepted >= target,
             fmt("%s: only %d of the required %d bridge-feasible specs", label, accepted, target));
  line.check(violations == 0,
             fmt("%s: %d specs with the oracle outside the hard bounds (tol 1e-9)", label,
                 violations));
}

void criterion1(Line& line) {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<std::pair<Method, Estimand>> conf_checks;
  for (Method m : {Method::W, Method::Z, Method::WZ})
    for (Estimand e : {Estimand::EttMean0, Estimand::EttMean1, Estimand::PoMean0,
                       Estimand::PoMean1, Estimand::Ate})
      conf_checks.emplace_back(m, e);
  pooled_containment(
      line, "confounder", Family::Confounder, 500, 101,
      [](std::size_t i) {
        int u = 2 + static_cast<int>(i % 3);
        int x = 2 + static_cast<int>((i / 3) % 2);
        return conf_cards(u, x, u, u);
      },
      [](const pb::JointPMF& joint) {
        return pb::check_outcome_bridge(joint, pb::BridgeVariant::Confounder).overall_feasible &&
               pb::check_treatment_bridge(joint).overall_feasible;
      },
      conf_checks);

  pooled_containment(
      line, "mediation", Family::Mediation, 200, 102,
      [](std::size_t i) {
        int m = 2 + static_cast<int>(i % 3);
        int x = 2 + static_cast<int>((i / 3) % 2);
        return std::map<std::string, int>{{"X", x}, {"M", m}, {"W", m}, {"Y", 3}};
      },
      [](const pb::JointPMF& joint) {
        return pb::check_outcome_bridge(joint, pb::BridgeVariant::Mediation).overall_feasible;
      },
      {{Method::Mediation, Estimand::MedCrossWorld},
       {Method::Mediation, Estimand::Nie},
       {Method::Mediation, Estimand::Nde}});

  pooled_containment(
      line, "front-door", Family::Frontdoor, 200, 103,
      [](std::size_t i) {
        int m = 2 + static_cast<int>(i % 3);
        int x = 2 + static_cast<int>((i / 3) % 2);
        int u = 2 + static_cast<int>((i / 6) % 2);
        return std::map<std::string, int>{{"U", u}, {"X", x}, {"M", m}, {"W", m}, {"Y", 3}};
      },
      [](const pb::JointPMF& joint) {
        return pb::check_outcome_bridge(joint, pb::BridgeVariant::Frontdoor).overall_feasible;
      },
      {{Method::Frontdoor, Estimand::FdPoMean0},
       {Method::Frontdoor, Estimand::FdPoMean1},
       {Method::Frontdoor, Estimand::Ate}});

  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  line.check(secs < 300.0, fmt("runtime %.0fs exceeded the 5-minute budget", secs));
}

// ------------------------------------------------------------- criterion 2
// With a single latent confounder level, every method's population hard bound
// collapses to a point equal to the oracle truth.

void criterion2(Line& line) {
  const int N = 100;
  std::vector<double> wmax(N, 0.0), dmax(N, 0.0);
  pb::parallel_for(N, kWorkers, [&](std::size_t i) {
    int w = 2 + static_cast<int>(i % 3);
    int z = 2 + static_cast<int>((i / 3) % 3);
    int x = 2 + static_cast<int>((i / 9) % 2);
    pb::DGPSpec spec = pb::sample_dgp_spec(Family::Confounder, conf_cards(1, x, w, z),
                                           pb::Rng::derive_key(202, i));
    pb::JointPMF joint = pb::build_joint(spec);
    pb::OracleTruth truth = pb::oracle_estimands(joint);
    pb::FrequencyModel model = pb::FrequencyModel::from_joint(joint);
    for (Method m : {Method::W, Method::Z, Method::WZ}) {
      for (Estimand e : {Estimand::EttMean0, Estimand::EttMean1, Estimand::PoMean0,
                         Estimand::PoMean1, Estimand::Ate}) {
        pb::BoundsReport r = pb::estimate_bounds(model, m, e, kInf);
        double tv = pb::oracle_value(truth, e);
        wmax[i] = std::max(wmax[i], r.hard.width());
        dmax[i] = std::max({dmax[i], std::fabs(r.hard.lower - tv), std::fabs(r.hard.upper - tv)});
      }
    }
  });
  double ww = *std::max_element(wmax.begin(), wmax.end());
  double dd = *std::max_element(dmax.begin(), dmax.end());
  line.add(fmt("100 specs with |U|=1, methods {W,Z,WZ} x 5 estimands: max width %.2e, "
               "max |endpoint - oracle| %.2e",
               ww, dd));
  line.check(ww <= 1e-10, "interval width above 1e-10");
  line.check(dd <= 1e-10, "endpoint deviation from the oracle above 1e-10");
}

// ------------------------------------------------------------- criterion 3
// Smoothed intervals contain the hard ones, the excess width obeys
// 2 (log K + log 2)/alpha at unit outcome scale (K = extremum-set size), and
// the excess shrinks at least linearly in alpha.

void criterion3(Line& line) {
  const int N = 50;
  const double alphas[4] = {10.0, 50.0, 200.0, 1000.0};
  std::vector<int> cap_viol(N, 0), contain_viol(N, 0), ratio_viol(N, 0);
  std::vector<double> util(N, 0.0);
  pb::parallel_for(N, kWorkers, [&](std::size_t i) {
    int u = 2 + static_cast<int>(i % 3);
    int x = 2 + static_cast<int>((i / 3) % 2);
    pb::DGPSpec spec = pb::sample_dgp_spec(Family::Confounder, conf_cards(u, x, u, u),
                                           pb::Rng::derive_key(303, i));
    spec.y_values = {0.0, 0.5, 1.0};  // unit outcome scale, where the stated cap is exact
    pb::FrequencyModel model = pb::FrequencyModel::from_joint(pb::build_joint(spec));
    const double nw = model.w_card(), nz = model.z_card();
    struct Call {
      std::function<pb::BoundsReport(double)> run;
      double K;
    };
    const Call calls[] = {
        {[&](double a) { return pb::ett_bounds_w(model, 0, a); }, nw},
        {[&](double a) { return pb::ett_bounds_z(model, 0, a); }, nz},
        {[&](double a) { return pb::ett_bounds_wz(model, 0, a); }, nw * nz},
        {[&](double a) { return pb::po_bounds_w(model, 0, a); }, nw},
    };
    for (const Call& c : calls) {
      double excess[4] = {0, 0, 0, 0};
      for (int ai = 0; ai < 4; ++ai) {
        pb::BoundsReport r = c.run(alphas[ai]);
        excess[ai] = r.smoothed.width() - r.hard.width();
        if (!(r.smoothed.lower <= r.hard.lower + 1e-12 &&
              r.smoothed.upper >= r.hard.upper - 1e-12))
          ++contain_viol[i];
        double cap = 2.0 * (std::log(c.K) + std::log(2.0)) / alphas[ai];
        if (excess[ai] > cap + 1e-12) ++cap_viol[i];
        util[i] = std::max(util[i], excess[ai] / cap);
      }
      if (excess[3] > excess[0] / 50.0 + 1e-12) ++ratio_viol[i];
    }
  });
  int contain = 0, capv = 0, ratio = 0;
  for (int i = 0; i < N; ++i) {
    contain += contain_viol[i];
    capv += cap_viol[i];
    ratio += ratio_viol[i];
  }
  double umax = *std::max_element(util.begin(), util.end());
  line.add(fmt("50 unit-scale models x {W,Z,WZ,PO-W} x alpha {10,50,200,1000}: max cap "
               "utilization %.3f",
               umax));
  line.check(contain == 0, fmt("%d smoothed intervals failed to contain the hard interval",
                               contain));
  line.check(capv == 0, fmt("%d excess widths above 2(log K + log 2)/alpha", capv));
  line.check(ratio == 0,
             fmt("%d models where excess(1000) > excess(10)/50", ratio));
}

// ------------------------------------------------------------- studies 4-6

const pb::StudyRow& study_row(const pb::StudyResult& res, int g, Method m) {
  for (const auto& r : res.rows)
    if (r.grid_index == g && r.method == m) return r;
  throw pb::Error("study row missing");
}

void criterion4(Line& line) {
  auto t0 = std::chrono::steady_clock::now();
  pb::StudyConfig cfg;
  cfg.family = Family::Confounder;
  for (std::size_t n : {std::size_t{3000}, std::size_t{5000}, std::size_t{9000}})
    cfg.grid.push_back({conf_cards(4, 4, 4, 4), n});
  cfg.R = 100;
  cfg.methods = {Method::W, Method::Z};
  cfg.estimand = Estimand::EttMean0;
  cfg.alpha = 50.0;
  cfg.lambda = 0.0;
  // The pinned widths describe an ensemble in which both proxy bounds apply,
  // i.e. both bridge systems are solvable; restrict the spec draws accordingly.
  cfg.require_feasible = true;
  cfg.with_ci = true;
  cfg.B = 500;
  cfg.level = 0.95;
  cfg.seed = 404;
  cfg.workers = kWorkers;
  pb::StudyResult res = pb::run_study(cfg);

  const pb::StudyRow& w5 = study_row(res, 1, Method::W);
  const pb::StudyRow& z5 = study_row(res, 1, Method::Z);
  auto close = [](double a, double b) { return std::fabs(a - b) <= 0.10; };
  auto pair_match = [&](const pb::StudyRow& r, double bw, double cw) {
    return close(r.avg_smoothed_width, bw) && close(r.avg_ci_width, cw);
  };
  bool direct = pair_match(w5, 0.616, 0.742) && pair_match(z5, 0.200, 0.263);
  bool swapped = pair_match(w5, 0.200, 0.263) && pair_match(z5, 0.616, 0.742);
  line.add(fmt("n=5000 (bound width, CI width): W (%.3f, %.3f), Z (%.3f, %.3f) vs pinned "
               "{(0.616, 0.742), (0.200, 0.263)}",
               w5.avg_smoothed_width, w5.avg_ci_width, z5.avg_smoothed_width, z5.avg_ci_width));
  line.check(direct || swapped, "n=5000 width pairs outside +-0.10 of the pinned pair set");

  for (Method m : {Method::W, Method::Z}) {
    const pb::StudyRow& r0 = study_row(res, 0, m);
    const pb::StudyRow& r1 = study_row(res, 1, m);
    const pb::StudyRow& r2 = study_row(res, 2, m);
    line.add(fmt("%s widths over n {3000,5000,9000}: bound %.3f/%.3f/%.3f, CI %.3f/%.3f/%.3f",
                 pb::to_string(m).c_str(), r0.avg_smoothed_width, r1.avg_smoothed_width,
                 r2.avg_smoothed_width, r0.avg_ci_width, r1.avg_ci_width, r2.avg_ci_width));
    bool mono = r0.avg_smoothed_width > r1.avg_smoothed_width &&
                r1.avg_smoothed_width > r2.avg_smoothed_width &&
                r0.avg_ci_width > r1.avg_ci_width && r1.avg_ci_width > r2.avg_ci_width;
    line.check(mono, fmt("method %s: widths not monotone decreasing in n",
                         pb::to_string(m).c_str()));
  }
  if (!res.failures.empty())
    line.add(fmt("%zu quarantined replications", res.failures.size()));
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  line.check(secs < 1800.0, fmt("runtime %.0fs exceeded the 30-minute budget", secs));
}

void criterion5(Line& line) {
  pb::StudyConfig cfg;
  cfg.family = Family::Confounder;
  for (int k : {3, 4, 5}) cfg.grid.push_back({conf_cards(k, 5, k, k), 10000});
  cfg.R = 30;
  cfg.methods = {Method::W, Method::Z};
  cfg.estimand = Estimand::EttMean0;
  cfg.alpha = 50.0;
  cfg.lambda = 0.0;
  cfg.seed = 525;
  cfg.workers = kWorkers;
  pb::StudyResult res = pb::run_study(cfg);

  struct Ref {
    Method m;
    double lo_ref, hi_ref;
  };
  for (const Ref& ref : {Ref{Method::W, 0.563, 1.148}, Ref{Method::Z, 0.161, 0.295}}) {
    double w[3];
    for (int g = 0; g < 3; ++g) w[g] = study_row(res, g, ref.m).avg_smoothed_width;
    line.add(fmt("%s width over |W|=|U| {3,4,5}: %.3f/%.3f/%.3f (pinned ends %.3f/%.3f)",
                 pb::to_string(ref.m).c_str(), w[0], w[1], w[2], ref.lo_ref, ref.hi_ref));
    line.check(w[0] < w[1] && w[1] < w[2],
               fmt("%s width not strictly increasing along the diagonal",
                   pb::to_string(ref.m).c_str()));
    line.check(std::fabs(w[0] - ref.lo_ref) <= 0.2 && std::fabs(w[2] - ref.hi_ref) <= 0.2,
               fmt("%s diagonal endpoints outside +-0.2 of the pinned values",
                   pb::to_string(ref.m).c_str()));
  }
}

void criterion6(Line& line) {
  pb::StudyConfig cfg;
  cfg.family = Family::Confounder;
  for (int k : {3, 6}) cfg.grid.push_back({conf_cards(7, 5, k, k), 10000});
  cfg.R = 100;
  cfg.methods = {Method::W, Method::Z};
  cfg.estimand = Estimand::EttMean0;
  cfg.alpha = 50.0;
  cfg.lambda = 0.0;
  cfg.seed = 606;
  cfg.workers = kWorkers;
  pb::StudyResult res = pb::run_study(cfg);

  double covW[2], covZ[2];
  for (int g = 0; g < 2; ++g) {
    covW[g] = study_row(res, g, Method::W).hard_coverage;
    covZ[g] = study_row(res, g, Method::Z).hard_coverage;
  }
  line.add(fmt("|U|=7 hard-bound coverage at |W|=|Z| {3,6}: W %.1f%%/%.1f%%, Z %.1f%%/%.1f%% "
               "(pinned Z 62.2%%/92%%)",
               100 * covW[0], 100 * covW[1], 100 * covZ[0], 100 * covZ[1]));
  line.check(covW[0] >= covZ[0] && covW[1] >= covZ[1],
             "W-method coverage fell below Z-method coverage");
  line.check(covW[0] >= 0.95 && covW[1] >= 0.95, "W-method coverage below 95%");
  line.check(covZ[1] > covZ[0], "Z-method coverage did not increase with proxy cardinality");
  line.check(std::fabs(covZ[0] - 0.622) <= 0.10 && std::fabs(covZ[1] - 0.92) <= 0.10,
             "Z-method coverage outside +-10 points of the pinned values");
}

// ------------------------------------------------------------- criterion 7
// Bootstrap CIs on sampled data cover the oracle truth and the point interval.

void criterion7(Line& line) {
  const int N = 200;
  std::vector<std::uint8_t> cover_truth(N, 0), cover_point(N, 0);
  pb::parallel_for(N, kWorkers, [&](std::size_t i) {
    // Same ensemble as criterion 4: rejection-sample specs until both bridge
    // systems are solvable, so the W bound genuinely applies.
    const std::uint64_t base = pb::Rng::derive_key(707, 2 * i);
    pb::DGPSpec spec = pb::sample_dgp_spec(Family::Confounder, conf_cards(4, 4, 4, 4), base);
    pb::JointPMF joint = pb::build_joint(spec);
    for (int t = 1;
         !(pb::check_outcome_bridge(joint, pb::BridgeVariant::Confounder).overall_feasible &&
           pb::check_treatment_bridge(joint).overall_feasible);
         ++t) {
      if (t >= 20000) throw pb::Error("no bridge-feasible spec within 20000 candidate draws");
      spec = pb::sample_dgp_spec(Family::Confounder, conf_cards(4, 4, 4, 4),
                                 pb::Rng::derive_key(base, t));
      joint = pb::build_joint(spec);
    }
    double tv = pb::oracle_estimands(joint).ett_mean[0];
    pb::Dataset data = pb::draw_dataset(joint, 5000, pb::Rng::derive_key(707, 2 * i + 1));
    pb::EstimatorSpec est{Method::W, Estimand::EttMean0, 50.0, 0.0};
    pb::CIReport ci = pb::bootstrap_ci(data, est, 500, 0.95, pb::Rng::derive_key(909, i), 1);
    cover_truth[i] = ci.ci.contains(tv, 1e-12) ? 1 : 0;
    cover_point[i] = ci.ci.contains(ci.point_smoothed, 1e-12) ? 1 : 0;
  });
  int ct = 0, cp = 0;
  for (int i = 0; i < N; ++i) {
    ct += cover_truth[i];
    cp += cover_point[i];
  }
  line.add(fmt("200 W-method 95%% CIs (n=5000, B=500): truth covered %d/200, point interval "
               "covered %d/200",
               ct, cp));
  line.check(ct >= 180, "CI coverage of the oracle truth below 90%");
  line.check(cp >= 198, "CI coverage of the point interval below 99%");
}

// ------------------------------------------------------------- criterion 8
// The CLI study pipeline writes byte-identical summaries for any worker count.

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cmd(const std::string& cmd) {
  int rc = std::system(cmd.c_str());
  if (rc == -1) return -1;
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

void criterion8(Line& line) {
  const char* cli = std::getenv("PROXIBOUND_CLI");
  if (cli == nullptr || *cli == '\0') {
    line.fail("PROXIBOUND_CLI not set; cannot exercise the CLI study path");
    return;
  }
  namespace fs = std::filesystem;
  fs::path dir = fs::path("/tmp") / fmt("proxibound_accept_%d", static_cast<int>(::getpid()));
  fs::create_directories(dir);

  pb::StudyConfig cfg;
  cfg.family = Family::Confounder;
  cfg.grid.push_back({conf_cards(3, 2, 3, 3), 1200});
  cfg.R = 6;
  cfg.methods = {Method::W, Method::Z};
  cfg.estimand = Estimand::EttMean0;
  cfg.alpha = 50.0;
  cfg.lambda = 0.0;
  cfg.with_ci = true;
  cfg.B = 40;
  cfg.level = 0.95;
  cfg.seed = 424242;
  cfg.workers = 1;
  pb::save_json_file((dir / "config.json").string(), pb::study_config_to_json(cfg));

  auto run_at = [&](int workers, const char* csv) {
    std::string cmd = fmt("%s study --config %s --out-csv %s --workers %d > %s 2>&1", cli,
                          (dir / "config.json").c_str(), (dir / csv).c_str(), workers,
                          (dir / "log.txt").c_str());
    return run_cmd(cmd);
  };
  int rc1 = run_at(1, "w1.csv");
  int rc8 = run_at(8, "w8.csv");
  line.check(rc1 == 0 && rc8 == 0, fmt("study CLI exited %d / %d", rc1, rc8));
  if (rc1 == 0 && rc8 == 0) {
    std::string b1 = slurp((dir / "w1.csv").string());
    std::string b8 = slurp((dir / "w8.csv").string());
    if (!b1.empty() && b1 == b8)
      line.add(fmt("summary CSV byte-identical at 1 and 8 workers (%zu bytes)", b1.size()));
    else
      line.fail("summary CSVs differ between 1 and 8 workers");
  }
  std::error_code ec;
  fs::remove_all(dir, ec);
}

// ------------------------------------------------------------- criterion 9
// Optional clinical reproduction on an externally supplied extract; the
// bundled synthetic same-schema sample always smoke-tests the pipeline.

void criterion9(Line& line) {
  pb::Codebook cb = pb::codebook_from_json(pb::load_json_file(fixture("rhc_codebook.json")));
  pb::Dataset synth = pb::load_dataset_csv(fixture("rhc_synthetic.csv"), cb);
  pb::FrequencyModel sm = pb::FrequencyModel::from_dataset(synth, 0.5);
  pb::BoundsReport sr = pb::estimate_bounds(sm, Method::Z, Estimand::Ate, 50.0);
  bool smoke_ok = std::isfinite(sr.smoothed.lower) && std::isfinite(sr.smoothed.upper) &&
                  sr.smoothed.lower <= sr.smoothed.upper + 1e-12 &&
                  sr.smoothed.lower >= -30.0 - 1e-9 && sr.smoothed.upper <= 30.0 + 1e-9;
  line.add(fmt("synthetic-sample ATE interval (%.3f, %.3f) at lambda=0.5", sr.smoothed.lower,
               sr.smoothed.upper));
  line.check(smoke_ok, "synthetic same-schema smoke produced an invalid interval");

  struct Extract {
    const char* env;
    double lo, hi;
    const char* tag;
  };
  bool any = false;
  for (const Extract& e : {Extract{"PROXIBOUND_RHC_CSV", -2.250, -0.093, "PaFI"},
                           Extract{"PROXIBOUND_RHC_CSV2", -2.281, -0.038, "PaCO2"}}) {
    const char* path = std::getenv(e.env);
    if (path == nullptr || *path == '\0') continue;
    any = true;
    pb::Dataset data = pb::load_dataset_csv(path, cb);
    pb::FrequencyModel m = pb::FrequencyModel::from_dataset(data, 0.5);
    pb::BoundsReport r = pb::estimate_bounds(m, Method::Z, Estimand::Ate, 50.0);
    line.add(fmt("%s ATE interval (%.3f, %.3f) vs pinned (%.3f, %.3f)", e.tag, r.smoothed.lower,
                 r.smoothed.upper, e.lo, e.hi));
    line.check(std::fabs(r.smoothed.lower - e.lo) <= 0.05 &&
                   std::fabs(r.smoothed.upper - e.hi) <= 0.05,
               fmt("%s endpoints outside +-0.05 of the pinned values", e.tag));
  }
  if (!any) {
    line.skip = true;
    line.add("external extract not supplied (PROXIBOUND_RHC_CSV unset)");
  }
}

}  // namespace

int main() {
  std::printf("proxibound acceptance gate (rng %s, %d workers)\n", pb::Rng::kAlgorithmId,
              kWorkers);
  bool ok = true;
  ok &= run_criterion(1, "population hard-bound containment across families", criterion1);
  ok &= run_criterion(2, "degenerate-confounder collapse to the oracle", criterion2);
  ok &= run_criterion(3, "smoothed-interval excess-width cap", criterion3);
  ok &= run_criterion(4, "width-vs-n study against pinned values", criterion4);
  ok &= run_criterion(5, "width growth along the |W|=|U| diagonal", criterion5);
  ok &= run_criterion(6, "hard-bound coverage by method under proxy deficit", criterion6);
  ok &= run_criterion(7, "bootstrap CI coverage of truth and point interval", criterion7);
  ok &= run_criterion(8, "study CLI byte-determinism across worker counts", criterion8);
  ok &= run_criterion(9, "held-out clinical extract reproduction (optional)", criterion9);
  std::printf("%s\n", ok ? "acceptance: all criteria passed" : "acceptance: FAILURES PRESENT");
  return ok ? 0 : 1;
}
