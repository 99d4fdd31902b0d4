#include "proxibound/dgp.hpp"

#include <algorithm>
#include <cmath>

#include "proxibound/errors.hpp"
#include "proxibound/rng.hpp"
#include "proxibound/tensor.hpp"

namespace proxibound {

std::string to_string(Family f) {
  switch (f) {
    case Family::Confounder: return "confounder";
    case Family::Mediation: return "mediation";
    case Family::Frontdoor: return "frontdoor";
  }
  throw Error("unknown family");
}

Family family_from_string(const std::string& s) {
  if (s == "confounder") return Family::Confounder;
  if (s == "mediation") return Family::Mediation;
  if (s == "frontdoor") return Family::Frontdoor;
  throw SchemaError("unknown family: " + s);
}

std::vector<double> DGPSpec::effective_y_values() const {
  if (!y_values.empty()) return y_values;
  std::vector<double> v(card_y);
  for (int y = 0; y < card_y; ++y) v[y] = y + 1.0;  // default levels valued 1..|Y|
  return v;
}

Codebook DGPSpec::codebook() const {
  std::vector<Variable> vars;
  switch (family) {
    case Family::Confounder:
      vars = {{"U", card_u, VarRole::LatentConfounder}, {"X", card_x, VarRole::Covariate},
              {"W", card_w, VarRole::OutcomeProxy},     {"Z", card_z, VarRole::TreatmentProxy},
              {"A", 2, VarRole::Treatment},             {"Y", card_y, VarRole::Outcome}};
      break;
    case Family::Mediation:
      vars = {{"X", card_x, VarRole::Covariate},
              {"M", card_m, VarRole::LatentMediator},
              {"W", card_w, VarRole::OutcomeProxy},
              {"A", 2, VarRole::Treatment},
              {"Y", card_y, VarRole::Outcome}};
      break;
    case Family::Frontdoor:
      vars = {{"U", card_u, VarRole::LatentConfounder}, {"X", card_x, VarRole::Covariate},
              {"M", card_m, VarRole::LatentMediator},   {"W", card_w, VarRole::OutcomeProxy},
              {"A", 2, VarRole::Treatment},             {"Y", card_y, VarRole::Outcome}};
      break;
  }
  return Codebook(std::move(vars), effective_y_values());
}

namespace {

int card_at(const std::map<std::string, int>& cards, const std::string& key, int min_card) {
  auto it = cards.find(key);
  if (it == cards.end()) throw SchemaError("cards missing axis " + key);
  if (it->second < min_card)
    throw SchemaError("cardinality of " + key + " must be >= " + std::to_string(min_card));
  return it->second;
}

// Draws one coefficient matrix; columns listed in relevance_cols are redrawn
// until |beta| >= 0.01 so the proxy link cannot vanish.
SoftmaxCoef draw_coef(Rng& rng, std::vector<std::string> parents, int target_card,
                      const std::vector<int>& relevance_cols) {
  SoftmaxCoef c;
  c.parents = std::move(parents);
  c.beta.assign(target_card, std::vector<double>(1 + c.parents.size(), 0.0));
  for (int t = 0; t < target_card; ++t) {
    for (std::size_t col = 0; col < 1 + c.parents.size(); ++col) {
      double b = rng.uniform(-0.5, 0.5);
      if (std::find(relevance_cols.begin(), relevance_cols.end(), static_cast<int>(col)) !=
          relevance_cols.end()) {
        while (std::abs(b) < 0.01) b = rng.uniform(-0.5, 0.5);
      }
      c.beta[t][col] = b;
    }
  }
  return c;
}

void check_coef(const SoftmaxCoef& c, int target_card, const std::string& name) {
  if (static_cast<int>(c.beta.size()) != target_card)
    throw SchemaError("coefficient rows for " + name + " must match its cardinality");
  for (const auto& row : c.beta)
    if (row.size() != 1 + c.parents.size())
      throw SchemaError("coefficient row width for " + name + " must be 1 + #parents");
}

// Conditional table for one softmax factor: dims [target, parents...].
Tensor softmax_table(const SoftmaxCoef& coef, int target_card,
                     const std::vector<int>& parent_cards) {
  std::vector<int> dims{target_card};
  dims.insert(dims.end(), parent_cards.begin(), parent_cards.end());
  Tensor out(dims);
  std::vector<int> pidx(parent_cards.size(), 0);
  std::vector<double> logits(target_card);
  std::vector<int> cell(dims.size());
  while (true) {
    double top = -1e300;
    for (int t = 0; t < target_card; ++t) {
      double s = coef.beta[t][0];
      for (std::size_t j = 0; j < parent_cards.size(); ++j) s += coef.beta[t][1 + j] * pidx[j];
      logits[t] = s;
      top = std::max(top, s);
    }
    double denom = 0.0;
    for (int t = 0; t < target_card; ++t) denom += std::exp(logits[t] - top);
    for (int t = 0; t < target_card; ++t) {
      cell[0] = t;
      for (std::size_t j = 0; j < parent_cards.size(); ++j) cell[1 + j] = pidx[j];
      out.at(cell) = std::exp(logits[t] - top) / denom;
    }
    int k = static_cast<int>(parent_cards.size()) - 1;
    for (; k >= 0; --k) {
      if (++pidx[k] < parent_cards[k]) break;
      pidx[k] = 0;
    }
    if (k < 0) break;
  }
  return out;
}

}  // namespace

DGPSpec sample_dgp_spec(Family family, const std::map<std::string, int>& cards,
                        std::uint64_t seed) {
  DGPSpec spec;
  spec.family = family;
  spec.seed = seed;
  Rng rng = Rng::derived(seed, 1);  // domain-separated from draw_dataset

  auto draw_base = [&](std::size_t n) {
    spec.base_weights.resize(n);
    double total = 0.0;
    for (double& v : spec.base_weights) {
      v = rng.uniform(0.1, 1.0);
      total += v;
    }
    for (double& v : spec.base_weights) v /= total;
  };

  switch (family) {
    case Family::Confounder: {
      spec.card_u = card_at(cards, "U", 1);
      spec.card_x = card_at(cards, "X", 2);
      spec.card_w = card_at(cards, "W", 2);
      spec.card_z = card_at(cards, "Z", 2);
      spec.card_y = card_at(cards, "Y", 2);
      draw_base(static_cast<std::size_t>(spec.card_u) * spec.card_x);
      spec.coef_w = draw_coef(rng, {"U", "X"}, spec.card_w, {1});
      spec.coef_z = draw_coef(rng, {"U", "X"}, spec.card_z, {1});
      spec.coef_a = draw_coef(rng, {"U", "X", "Z"}, 2, {});
      spec.coef_y = draw_coef(rng, {"U", "X", "W", "A"}, spec.card_y, {});
      break;
    }
    case Family::Mediation: {
      spec.card_x = card_at(cards, "X", 2);
      spec.card_m = card_at(cards, "M", 1);
      spec.card_w = card_at(cards, "W", 2);
      spec.card_y = card_at(cards, "Y", 2);
      draw_base(static_cast<std::size_t>(spec.card_x));
      spec.coef_a = draw_coef(rng, {"X"}, 2, {});
      spec.coef_m = draw_coef(rng, {"A", "X"}, spec.card_m, {});
      spec.coef_w = draw_coef(rng, {"M", "X"}, spec.card_w, {1});
      spec.coef_y = draw_coef(rng, {"M", "A", "X", "W"}, spec.card_y, {});
      break;
    }
    case Family::Frontdoor: {
      spec.card_u = card_at(cards, "U", 1);
      spec.card_x = card_at(cards, "X", 2);
      spec.card_m = card_at(cards, "M", 1);
      spec.card_w = card_at(cards, "W", 2);
      spec.card_y = card_at(cards, "Y", 2);
      draw_base(static_cast<std::size_t>(spec.card_u) * spec.card_x);
      spec.coef_a = draw_coef(rng, {"U", "X"}, 2, {});
      spec.coef_m = draw_coef(rng, {"A", "X"}, spec.card_m, {});
      spec.coef_w = draw_coef(rng, {"M", "X"}, spec.card_w, {1});
      spec.coef_y = draw_coef(rng, {"M", "X", "W", "U"}, spec.card_y, {});
      break;
    }
  }
  return spec;
}

JointPMF build_joint(const DGPSpec& spec) {
  Codebook cb = spec.codebook();
  const std::vector<int> dims = cb.dims();

  // factor tables, each [target, parents...]
  auto table_for = [&](const SoftmaxCoef& coef, int card, const std::string& name) {
    check_coef(coef, card, name);
    std::vector<int> pc;
    for (const std::string& p : coef.parents) pc.push_back(cb.cardinality(cb.axis(p)));
    return softmax_table(coef, card, pc);
  };

  std::size_t base_n = spec.family == Family::Mediation
                           ? static_cast<std::size_t>(spec.card_x)
                           : static_cast<std::size_t>(spec.card_u) * spec.card_x;
  if (spec.base_weights.size() != base_n) throw SchemaError("base_weights has the wrong length");
  double base_total = 0.0;
  for (double v : spec.base_weights) {
    if (!(v >= 0.0)) throw SchemaError("base_weights must be non-negative");
    base_total += v;
  }
  if (base_total <= 0.0) throw SchemaError("base_weights must have positive mass");

  Tensor t_a = table_for(spec.coef_a, 2, "A");
  Tensor t_w = table_for(spec.coef_w, spec.card_w, "W");
  Tensor t_y = table_for(spec.coef_y, spec.card_y, "Y");
  Tensor t_z, t_m;
  if (spec.family == Family::Confounder) t_z = table_for(spec.coef_z, spec.card_z, "Z");
  if (spec.family != Family::Confounder) t_m = table_for(spec.coef_m, spec.card_m, "M");

  // evaluates one factor at the current joint cell
  auto factor = [&](const Tensor& t, const SoftmaxCoef& coef, int target_axis,
                    const std::vector<int>& idx) {
    std::vector<int> cell(1 + coef.parents.size());
    cell[0] = idx[target_axis];
    for (std::size_t j = 0; j < coef.parents.size(); ++j)
      cell[1 + j] = idx[cb.axis(coef.parents[j])];
    return t.at(cell);
  };

  Tensor table(dims);
  std::vector<int> idx(dims.size());
  for (std::size_t flat = 0; flat < table.size(); ++flat) {
    table.unravel(flat, idx);
    double v;
    switch (spec.family) {
      case Family::Confounder:
        v = spec.base_weights[idx[0] * spec.card_x + idx[1]] / base_total;
        v *= factor(t_w, spec.coef_w, cb.axis("W"), idx);
        v *= factor(t_z, spec.coef_z, cb.axis("Z"), idx);
        v *= factor(t_a, spec.coef_a, cb.axis("A"), idx);
        v *= factor(t_y, spec.coef_y, cb.axis("Y"), idx);
        break;
      case Family::Mediation:
        v = spec.base_weights[idx[0]] / base_total;
        v *= factor(t_a, spec.coef_a, cb.axis("A"), idx);
        v *= factor(t_m, spec.coef_m, cb.axis("M"), idx);
        v *= factor(t_w, spec.coef_w, cb.axis("W"), idx);
        v *= factor(t_y, spec.coef_y, cb.axis("Y"), idx);
        break;
      case Family::Frontdoor:
        v = spec.base_weights[idx[0] * spec.card_x + idx[1]] / base_total;
        v *= factor(t_a, spec.coef_a, cb.axis("A"), idx);
        v *= factor(t_m, spec.coef_m, cb.axis("M"), idx);
        v *= factor(t_w, spec.coef_w, cb.axis("W"), idx);
        v *= factor(t_y, spec.coef_y, cb.axis("Y"), idx);
        break;
      default:
        throw Error("unknown family");
    }
    table[flat] = v;
  }
  return JointPMF(std::move(cb), std::move(table));
}

Dataset draw_dataset(const JointPMF& joint, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw SchemaError("draw_dataset needs n >= 1");
  JointPMF obs = joint.observed_margin();
  const Tensor& t = obs.table();
  std::vector<double> cumulative(t.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    acc += t[i];
    cumulative[i] = acc;
  }
  cumulative.back() = 1.0;

  Rng rng = Rng::derived(seed, 2);  // domain-separated from sample_dgp_spec
  const int cols = obs.codebook().n_axes();
  std::vector<int32_t> rows(n * static_cast<std::size_t>(cols));
  std::vector<int> idx(cols);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t cell = static_cast<std::size_t>(rng.categorical(cumulative));
    t.unravel(cell, idx);
    for (int c = 0; c < cols; ++c) rows[i * cols + c] = idx[c];
  }
  return Dataset(obs.codebook(), std::move(rows));
}

}  // namespace proxibound
