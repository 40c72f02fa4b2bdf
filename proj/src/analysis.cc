#include "analysis.h"

#include <Eigen/Dense>
#include <json.hpp>
#include <stdexcept>

namespace coordlm {

namespace {

double to_double(const std::string& s, const std::string& what) {
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad " + what + " value \"" + s + "\"");
  }
}

int to_int(const std::string& s, const std::string& what) {
  try {
    size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad " + what + " value \"" + s + "\"");
  }
}

const char* kind_name(ExpectationKind k) {
  switch (k) {
    case ExpectationKind::kPlural: return "plural_expectation";
    case ExpectationKind::kGender: return "gender_expectation";
    default: return "surprisal";
  }
}

bool overlap(const MeanCi& a, const MeanCi& b) { return a.lo <= b.hi && b.lo <= a.hi; }

// condition "<f1>_<coord>_<f2>" -> (pl?, and?, pl?) indicator codes
bool parse_condition_codes(const std::string& cond, double* n1, double* c, double* n2) {
  size_t u1 = cond.find('_');
  if (u1 == std::string::npos) return false;
  size_t u2 = cond.find('_', u1 + 1);
  if (u2 == std::string::npos || cond.find('_', u2 + 1) != std::string::npos) return false;
  std::string f1 = cond.substr(0, u1), co = cond.substr(u1 + 1, u2 - u1 - 1),
              f2 = cond.substr(u2 + 1);
  auto feature = [](const std::string& f, double* out) {
    if (f == "pl" || f == "f") *out = 1.0;
    else if (f == "sg" || f == "m") *out = 0.0;
    else return false;
    return true;
  };
  if (!feature(f1, n1) || !feature(f2, n2)) return false;
  if (co == "and") *c = 1.0;
  else if (co == "or") *c = 0.0;
  else return false;
  return true;
}

}  // namespace

std::vector<ExpectationRecord> expectations_from_eval(const CsvTable& eval) {
  const std::string ctx = "eval data";
  int c_exp = eval.require_column("experiment", ctx);
  int c_item = eval.require_column("item_id", ctx);
  int c_cond = eval.require_column("condition", ctx);
  int c_cls = eval.require_column("continuation_class", ctx);
  int c_region = eval.require_column("measure_region", ctx);
  int c_bits = eval.require_column("surprisal_bits", ctx);

  struct Group {
    ExpectationRecord rec;
    std::map<std::string, double> class_bits;
  };
  std::vector<Group> groups;
  std::map<std::array<std::string, 4>, size_t> index;
  for (const auto& r : eval.rows) {
    std::array<std::string, 4> key = {r[c_exp], r[c_item], r[c_cond], r[c_region]};
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, groups.size()).first;
      Group g;
      g.rec.experiment = r[c_exp];
      g.rec.item_id = to_int(r[c_item], "item_id");
      g.rec.condition = r[c_cond];
      g.rec.cell = r[c_region];
      groups.push_back(std::move(g));
    }
    groups[it->second].class_bits[r[c_cls]] += to_double(r[c_bits], "surprisal_bits");
  }

  std::vector<ExpectationRecord> out;
  out.reserve(groups.size());
  for (auto& g : groups) {
    auto& cb = g.class_bits;
    auto where = g.rec.experiment + " item " + std::to_string(g.rec.item_id) + " condition " +
                 g.rec.condition;
    if (cb.size() == 2 && cb.count("sg") && cb.count("pl")) {
      g.rec.kind = ExpectationKind::kPlural;
      g.rec.value_bits = cb["sg"] - cb["pl"];
    } else if (cb.size() == 2 && cb.count("m") && cb.count("f")) {
      g.rec.kind = ExpectationKind::kGender;
      g.rec.value_bits = cb["f"] - cb["m"];
    } else if (cb.size() == 1 && cb.count("na")) {
      g.rec.kind = ExpectationKind::kRaw;
      g.rec.value_bits = cb["na"];
    } else {
      std::string classes;
      for (const auto& [cls, bits] : cb) classes += (classes.empty() ? "" : ",") + cls;
      throw std::invalid_argument(where + " has continuation classes {" + classes +
                                  "}; expected sg/pl, m/f, or na");
    }
    out.push_back(std::move(g.rec));
  }
  return out;
}

std::vector<ExpectationSummary> summarize_expectations(
    const std::vector<ExpectationRecord>& records) {
  struct Acc {
    ExpectationKind kind;
    std::vector<double> values;
  };
  std::vector<std::pair<std::string, std::string>> order;
  std::map<std::pair<std::string, std::string>, Acc> acc;
  for (const auto& r : records) {
    auto key = std::make_pair(r.experiment, r.condition);
    auto it = acc.find(key);
    if (it == acc.end()) {
      it = acc.emplace(key, Acc{r.kind, {}}).first;
      order.push_back(key);
    } else if (it->second.kind != r.kind) {
      throw std::invalid_argument("condition " + r.experiment + "/" + r.condition +
                                  " mixes expectation kinds");
    }
    it->second.values.push_back(r.value_bits);
  }
  std::vector<ExpectationSummary> out;
  out.reserve(order.size());
  for (const auto& key : order) {
    const Acc& a = acc.at(key);
    out.push_back({key.first, key.second, a.kind, t_interval(a.values)});
  }
  return out;
}

LinearFit fit_conjunct_weights(const std::vector<ExpectationSummary>& conditions) {
  if (conditions.empty()) throw std::invalid_argument("fit_conjunct_weights: no conditions");
  int n = static_cast<int>(conditions.size());
  Eigen::MatrixXd x(n, 4);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    double n1, c, n2;
    if (!parse_condition_codes(conditions[i].condition, &n1, &c, &n2))
      throw std::invalid_argument("condition \"" + conditions[i].condition +
                                  "\" is not of the form <feature>_<coordinator>_<feature>");
    x(i, 0) = n1;
    x(i, 1) = n2;
    x(i, 2) = c;
    x(i, 3) = 1.0;
    y(i) = conditions[i].ci.mean;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(1e-10);
  if (qr.rank() < 4)
    throw std::invalid_argument(
        "fit_conjunct_weights: design matrix is rank deficient (rank " +
        std::to_string(qr.rank()) + " of 4); the conditions do not vary enough");
  Eigen::VectorXd w = qr.solve(y);
  LinearFit fit;
  fit.w1 = w(0);
  fit.w2 = w(1);
  fit.w_coord = w(2);
  fit.intercept = w(3);
  fit.residual_norm = (x * w - y).norm();
  return fit;
}

const char* behavior_name(BehaviorClass b) {
  switch (b) {
    case BehaviorClass::kPercolationLike: return "percolation-like";
    case BehaviorClass::kLinearCombinationLike: return "linear-combination-like";
    default: return "inconsistent";
  }
}

BehaviorClass classify_behavior(const std::map<std::string, MeanCi>& and_conditions) {
  static const char* kKeys[4] = {"pl_and_pl", "sg_and_pl", "pl_and_sg", "sg_and_sg"};
  std::vector<MeanCi> ci;
  for (const char* k : kKeys) {
    auto it = and_conditions.find(k);
    if (it == and_conditions.end())
      throw std::invalid_argument(std::string("classify_behavior: missing condition ") + k);
    ci.push_back(it->second);
  }
  bool all_pos = true, pairwise = true;
  for (size_t i = 0; i < ci.size(); ++i) {
    all_pos = all_pos && ci[i].lo > 0.0;
    for (size_t j = i + 1; j < ci.size(); ++j) pairwise = pairwise && overlap(ci[i], ci[j]);
  }
  if (all_pos && pairwise) return BehaviorClass::kPercolationLike;
  const MeanCi& pp = ci[0];
  const MeanCi& sp = ci[1];
  const MeanCi& ps = ci[2];
  const MeanCi& ss = ci[3];
  bool ordered = ss.mean < sp.mean && ss.mean < ps.mean && sp.mean < pp.mean &&
                 ps.mean < pp.mean;
  if (ordered && ss.hi < pp.lo) return BehaviorClass::kLinearCombinationLike;
  return BehaviorClass::kInconsistent;
}

AnalysisResult analyze_eval(const CsvTable& eval) {
  AnalysisResult out;
  out.summaries = summarize_expectations(expectations_from_eval(eval));

  std::vector<std::string> exp_order;
  std::map<std::string, std::map<std::string, const ExpectationSummary*>> by_exp;
  for (const auto& s : out.summaries) {
    if (!by_exp.count(s.experiment)) exp_order.push_back(s.experiment);
    by_exp[s.experiment][s.condition] = &s;
  }

  static const char* kAnd[4] = {"pl_and_pl", "sg_and_pl", "pl_and_sg", "sg_and_sg"};
  static const char* kOr[4] = {"pl_or_pl", "sg_or_pl", "pl_or_sg", "sg_or_sg"};
  for (const auto& exp : exp_order) {
    const auto& conds = by_exp[exp];
    AnalysisResult::PerExperiment pe;
    pe.experiment = exp;
    bool has_and = true, has_or = true;
    for (int i = 0; i < 4; ++i) {
      has_and = has_and && conds.count(kAnd[i]);
      has_or = has_or && conds.count(kOr[i]);
    }
    if (has_and) {
      std::map<std::string, MeanCi> cis;
      for (const char* k : kAnd) cis[k] = conds.at(k)->ci;
      pe.behavior = classify_behavior(cis);
    }
    if (has_and && has_or) {
      std::vector<ExpectationSummary> eight;
      for (const char* k : kAnd) eight.push_back(*conds.at(k));
      for (const char* k : kOr) eight.push_back(*conds.at(k));
      pe.fit = fit_conjunct_weights(eight);
    }
    out.experiments.push_back(std::move(pe));

    // attraction contrasts on the inverted-question frame
    if (conds.count("Vpl_Nsg") && conds.count("Vsg_Nsg") && conds.count("Vpl_Npl")) {
      for (const char* other : {"Vsg_Nsg", "Vpl_Npl"}) {
        const MeanCi& a = conds.at("Vpl_Nsg")->ci;
        const MeanCi& b = conds.at(other)->ci;
        out.contrasts.push_back({exp, "Vpl_Nsg", exp, other, a.mean - b.mean, overlap(a, b)});
      }
    }
  }

  // licensing contrasts: control frame vs critical frame, matched conditions
  for (const auto& exp : exp_order) {
    size_t at = exp.find("_control_");
    if (at == std::string::npos) continue;
    std::string critical = exp.substr(0, at) + "_critical_" + exp.substr(at + 9);
    if (!by_exp.count(critical)) continue;
    for (const auto& [cond, summary] : by_exp[exp]) {
      auto other = by_exp[critical].find(cond);
      if (other == by_exp[critical].end()) continue;
      const MeanCi& a = summary->ci;
      const MeanCi& b = other->second->ci;
      out.contrasts.push_back({exp, cond, critical, cond, a.mean - b.mean, overlap(a, b)});
    }
  }
  return out;
}

void write_summary_csv(std::ostream& out, const std::vector<ExpectationSummary>& summaries) {
  write_csv_row(out, summary_csv_header());
  for (const auto& s : summaries)
    write_csv_row(out, {s.experiment, s.condition, std::to_string(s.ci.n),
                        format_double(s.ci.mean), format_double(s.ci.lo),
                        format_double(s.ci.hi)});
}

std::string plot_data_json(const AnalysisResult& r) {
  nlohmann::json doc;
  doc["figures"] = nlohmann::json::array();
  std::vector<std::string> exp_order;
  std::map<std::string, size_t> fig_at;
  for (const auto& s : r.summaries) {
    if (!fig_at.count(s.experiment)) {
      fig_at[s.experiment] = doc["figures"].size();
      nlohmann::json fig;
      fig["experiment"] = s.experiment;
      fig["measure"] = kind_name(s.kind);
      fig["conditions"] = nlohmann::json::array();
      fig["mean_bits"] = nlohmann::json::array();
      fig["ci_low"] = nlohmann::json::array();
      fig["ci_high"] = nlohmann::json::array();
      fig["n"] = nlohmann::json::array();
      doc["figures"].push_back(std::move(fig));
    }
    auto& fig = doc["figures"][fig_at[s.experiment]];
    fig["conditions"].push_back(s.condition);
    fig["mean_bits"].push_back(s.ci.mean);
    fig["ci_low"].push_back(s.ci.lo);
    fig["ci_high"].push_back(s.ci.hi);
    fig["n"].push_back(s.ci.n);
  }
  doc["classifications"] = nlohmann::json::object();
  doc["fits"] = nlohmann::json::object();
  for (const auto& pe : r.experiments) {
    if (pe.behavior) doc["classifications"][pe.experiment] = behavior_name(*pe.behavior);
    if (pe.fit)
      doc["fits"][pe.experiment] = {{"w1", pe.fit->w1},
                                    {"w2", pe.fit->w2},
                                    {"w_coord", pe.fit->w_coord},
                                    {"intercept", pe.fit->intercept},
                                    {"residual_norm", pe.fit->residual_norm}};
  }
  doc["contrasts"] = nlohmann::json::array();
  for (const auto& c : r.contrasts)
    doc["contrasts"].push_back({{"a_experiment", c.a_experiment},
                                {"a_condition", c.a_condition},
                                {"b_experiment", c.b_experiment},
                                {"b_condition", c.b_condition},
                                {"mean_diff", c.mean_diff},
                                {"ci_overlap", c.ci_overlap}});
  return doc.dump(2) + "\n";
}

}  // namespace coordlm
