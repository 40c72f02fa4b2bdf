#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "analysis.h"
#include "errors.h"
#include "eval.h"

using namespace coordlm;

namespace {

CsvTable empty_eval() {
  CsvTable t;
  t.header = eval_csv_header(false);
  return t;
}

void add_row(CsvTable& t, const std::string& exp, int item, const std::string& cond, int pos,
             const std::string& cls, const std::string& region, double bits) {
  t.rows.push_back({exp, std::to_string(item), cond, std::to_string(pos), "tok", cls, region,
                    format_double(bits)});
}

// one sg/pl cell whose plural expectation is `value` (pl side fixed at 1.0)
void add_pair(CsvTable& t, const std::string& exp, int item, const std::string& cond,
              double value) {
  add_row(t, exp, item, cond, 0, "sg", "verb", value + 1.0);
  add_row(t, exp, item, cond, 0, "pl", "verb", 1.0);
}

MeanCi ci_of(int n, double mean, double lo, double hi) { return MeanCi{n, mean, lo, hi}; }

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

std::string join_comma(const std::vector<std::string>& fields) {
  std::string s;
  for (size_t i = 0; i < fields.size(); ++i) s += (i ? "," : "") + fields[i];
  return s;
}

}  // namespace

TEST_CASE("expectations fold continuation classes per measured cell") {
  CsvTable t = empty_eval();
  // interleaved rows of three cells: grouping is by key, not adjacency
  add_row(t, "exp2_number_en", 0, "pl_and_pl", 0, "sg", "verb:present", 3.0);
  add_row(t, "exp2_gender_fr", 0, "m_and_f", 0, "m", "adjective", 1.0);
  add_row(t, "exp2_number_en", 0, "pl_and_pl", 1, "sg", "verb:present", 1.5);
  add_row(t, "exp4_en", 2, "Vpl_Nsg", 0, "na", "coordinator", 0.75);
  add_row(t, "exp2_number_en", 0, "pl_and_pl", 0, "pl", "verb:present", 2.0);
  add_row(t, "exp2_gender_fr", 0, "m_and_f", 0, "f", "adjective", 3.25);
  add_row(t, "exp4_en", 2, "Vpl_Nsg", 1, "na", "coordinator", 0.25);

  auto recs = expectations_from_eval(t);
  REQUIRE(recs.size() == 3);
  CHECK(recs[0].experiment == "exp2_number_en");
  CHECK(recs[0].item_id == 0);
  CHECK(recs[0].condition == "pl_and_pl");
  CHECK(recs[0].cell == "verb:present");
  CHECK(recs[0].kind == ExpectationKind::kPlural);
  CHECK(recs[0].value_bits == doctest::Approx(2.5).epsilon(1e-12));  // (3.0+1.5) - 2.0
  CHECK(recs[1].kind == ExpectationKind::kGender);
  CHECK(recs[1].value_bits == doctest::Approx(2.25).epsilon(1e-12));  // 3.25 - 1.0
  CHECK(recs[2].kind == ExpectationKind::kRaw);
  CHECK(recs[2].item_id == 2);
  CHECK(recs[2].value_bits == doctest::Approx(1.0).epsilon(1e-12));  // 0.75 + 0.25

  // a cell with a stray class mix is an input error, not a silent zero
  CsvTable lone = empty_eval();
  add_row(lone, "e", 0, "c", 0, "sg", "verb", 1.0);
  CHECK_THROWS_AS(expectations_from_eval(lone), std::invalid_argument);
  CsvTable mixed = empty_eval();
  add_row(mixed, "e", 0, "c", 0, "sg", "verb", 1.0);
  add_row(mixed, "e", 0, "c", 0, "na", "verb", 1.0);
  CHECK_THROWS_AS(expectations_from_eval(mixed), std::invalid_argument);

  CsvTable bad_bits = empty_eval();
  bad_bits.rows.push_back({"e", "0", "c", "0", "tok", "sg", "verb", "many"});
  CHECK_THROWS_AS(expectations_from_eval(bad_bits), std::invalid_argument);

  CsvTable no_col;
  no_col.header = {"experiment", "item_id", "condition", "continuation_class", "measure_region"};
  CHECK_THROWS_AS(expectations_from_eval(no_col), ParseError);
}

TEST_CASE("summaries carry t intervals in first-appearance order") {
  std::vector<ExpectationRecord> recs;
  recs.push_back({"e", 0, "late", "verb", ExpectationKind::kPlural, 1.0});
  recs.push_back({"e", 0, "early", "verb", ExpectationKind::kPlural, 0.0});
  recs.push_back({"e", 1, "early", "verb", ExpectationKind::kPlural, 2.0});
  recs.push_back({"e", 1, "late", "verb", ExpectationKind::kPlural, 2.0});
  recs.push_back({"e", 2, "late", "verb", ExpectationKind::kPlural, 3.0});

  auto sums = summarize_expectations(recs);
  REQUIRE(sums.size() == 2);
  CHECK(sums[0].condition == "late");  // first appearance wins, not lexicographic
  CHECK(sums[1].condition == "early");

  // frozen two-sample interval: mean 1 +- t(.975, df 1) * 1
  CHECK(sums[1].ci.n == 2);
  CHECK(sums[1].ci.mean == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sums[1].ci.lo == doctest::Approx(-11.7062047361747).epsilon(1e-6));
  CHECK(sums[1].ci.hi == doctest::Approx(13.7062047361747).epsilon(1e-6));
  // frozen three-sample interval on {1,2,3}
  CHECK(sums[0].ci.n == 3);
  CHECK(sums[0].ci.lo == doctest::Approx(-0.484137711750331).epsilon(1e-6));
  CHECK(sums[0].ci.hi == doctest::Approx(4.48413771175033).epsilon(1e-6));

  recs.push_back({"e", 3, "late", "verb", ExpectationKind::kRaw, 1.0});
  CHECK_THROWS_AS(summarize_expectations(recs), std::invalid_argument);
}

TEST_CASE("behavior classification covers its three regimes") {
  using M = std::map<std::string, MeanCi>;
  M percolation = {{"pl_and_pl", ci_of(3, 2.2, 0.5, 3.5)},
                   {"sg_and_pl", ci_of(3, 1.8, 0.6, 3.2)},
                   {"pl_and_sg", ci_of(3, 2.0, 0.4, 3.4)},
                   {"sg_and_sg", ci_of(3, 1.5, 0.3, 3.0)}};
  CHECK(classify_behavior(percolation) == BehaviorClass::kPercolationLike);

  M linear = {{"pl_and_pl", ci_of(3, 2.0, 1.5, 2.5)},
              {"sg_and_pl", ci_of(3, 0.5, 0.1, 0.9)},
              {"pl_and_sg", ci_of(3, 0.6, 0.2, 1.0)},
              {"sg_and_sg", ci_of(3, -0.75, -1.0, -0.5)}};
  CHECK(classify_behavior(linear) == BehaviorClass::kLinearCombinationLike);

  // interval touching zero is not "strictly above zero"
  M boundary = {{"pl_and_pl", ci_of(3, 1.0, 0.0, 2.0)},
                {"sg_and_pl", ci_of(3, 1.0, 0.0, 2.0)},
                {"pl_and_sg", ci_of(3, 1.0, 0.0, 2.0)},
                {"sg_and_sg", ci_of(3, 1.0, 0.0, 2.0)}};
  CHECK(classify_behavior(boundary) == BehaviorClass::kInconsistent);

  // ordered means but all-sg and all-pl intervals still overlap
  M muddled = {{"pl_and_pl", ci_of(3, 2.0, 1.5, 2.5)},
               {"sg_and_pl", ci_of(3, 0.5, 0.1, 0.9)},
               {"pl_and_sg", ci_of(3, 0.6, 0.2, 1.0)},
               {"sg_and_sg", ci_of(3, -0.1, -0.2, 1.6)}};
  CHECK(classify_behavior(muddled) == BehaviorClass::kInconsistent);

  M missing = percolation;
  missing.erase("sg_and_sg");
  CHECK_THROWS_AS(classify_behavior(missing), std::invalid_argument);
}

TEST_CASE("conjunct weight fit recovers planted coefficients") {
  auto make8 = [](double w1, double w2, double wc, double b, bool gender) {
    std::vector<ExpectationSummary> out;
    const char* hi = gender ? "f" : "pl";
    const char* lo = gender ? "m" : "sg";
    for (const char* coord : {"and", "or"})
      for (int a = 1; a >= 0; --a)
        for (int c = 1; c >= 0; --c) {
          ExpectationSummary s;
          s.experiment = "e";
          s.condition = std::string(a ? hi : lo) + "_" + coord + "_" + (c ? hi : lo);
          s.kind = gender ? ExpectationKind::kGender : ExpectationKind::kPlural;
          double mean = w1 * a + w2 * c + wc * (coord == std::string("and") ? 1.0 : 0.0) + b;
          s.ci = ci_of(3, mean, mean, mean);
          out.push_back(std::move(s));
        }
    return out;
  };

  LinearFit fit = fit_conjunct_weights(make8(2.0, 1.25, 0.5, 0.25, false));
  CHECK(fit.w1 == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(fit.w2 == doctest::Approx(1.25).epsilon(1e-9));
  CHECK(fit.w_coord == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(fit.intercept == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(fit.residual_norm < 1e-9);

  // gender labels use the same binary coding with f high
  LinearFit gfit = fit_conjunct_weights(make8(-1.0, 3.0, 0.5, 0.1, true));
  CHECK(gfit.w1 == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(gfit.w2 == doctest::Approx(3.0).epsilon(1e-9));

  // and-only conditions leave the coordinator column constant
  auto eight = make8(1.0, 1.0, 1.0, 0.0, false);
  std::vector<ExpectationSummary> and_only(eight.begin(), eight.begin() + 4);
  CHECK_THROWS_AS(fit_conjunct_weights(and_only), std::invalid_argument);

  std::vector<ExpectationSummary> bad = and_only;
  bad[0].condition = "Npl";
  CHECK_THROWS_AS(fit_conjunct_weights(bad), std::invalid_argument);
  CHECK_THROWS_AS(fit_conjunct_weights({}), std::invalid_argument);
}

TEST_CASE("analyze_eval assembles summaries, classifications, fits, and contrasts") {
  CsvTable t = empty_eval();
  // exp2 cells sit exactly on 2*n1 + 1*n2 + 0.5*coord + 0.3
  const std::map<std::string, double> planted = {
      {"pl_and_pl", 3.8}, {"sg_and_pl", 1.8}, {"pl_and_sg", 2.8}, {"sg_and_sg", 0.8},
      {"pl_or_pl", 3.3},  {"sg_or_pl", 1.3},  {"pl_or_sg", 2.3},  {"sg_or_sg", 0.3}};
  for (int item = 0; item < 3; ++item)
    for (const auto& [cond, mean] : planted) add_pair(t, "exp2_number_en", item, cond, mean);
  for (int item = 0; item < 3; ++item)
    for (const char* cond : {"pl_and_pl", "sg_and_pl", "pl_and_sg", "sg_and_sg"}) {
      add_pair(t, "exp3_control_number_en", item, cond, 3.0);
      add_pair(t, "exp3_critical_number_en", item, cond, 1.0);
    }
  const std::map<std::string, double> exp4 = {
      {"Vpl_Npl", 2.0}, {"Vpl_Nsg", 5.0}, {"Vsg_Nsg", 4.0}};
  for (int item = 0; item < 3; ++item)
    for (const auto& [cond, bits] : exp4)
      add_row(t, "exp4_en", item, cond, 0, "na", "coordinator", bits);

  AnalysisResult r = analyze_eval(t);

  REQUIRE(r.summaries.size() == 8 + 4 + 4 + 3);
  CHECK(r.summaries[0].experiment == "exp2_number_en");
  CHECK(r.summaries[0].condition == "pl_and_pl");
  CHECK(r.summaries[0].ci.n == 3);
  CHECK(r.summaries[0].ci.mean == doctest::Approx(3.8).epsilon(1e-9));
  CHECK(r.summaries[0].ci.lo == doctest::Approx(3.8).epsilon(1e-9));  // zero variance

  REQUIRE(r.experiments.size() == 4);
  REQUIRE(r.experiments[0].behavior.has_value());
  CHECK(*r.experiments[0].behavior == BehaviorClass::kLinearCombinationLike);
  REQUIRE(r.experiments[0].fit.has_value());
  CHECK(r.experiments[0].fit->w1 == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(r.experiments[0].fit->w2 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.experiments[0].fit->w_coord == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(r.experiments[0].fit->intercept == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(r.experiments[1].behavior.has_value());
  CHECK(*r.experiments[1].behavior == BehaviorClass::kPercolationLike);
  CHECK(!r.experiments[1].fit.has_value());
  CHECK(!r.experiments[3].behavior.has_value());
  CHECK(!r.experiments[3].fit.has_value());

  REQUIRE(r.contrasts.size() == 2 + 4);
  CHECK(r.contrasts[0].a_experiment == "exp4_en");
  CHECK(r.contrasts[0].a_condition == "Vpl_Nsg");
  CHECK(r.contrasts[0].b_condition == "Vsg_Nsg");
  CHECK(r.contrasts[0].mean_diff == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(!r.contrasts[0].ci_overlap);
  CHECK(r.contrasts[1].b_condition == "Vpl_Npl");
  CHECK(r.contrasts[1].mean_diff == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(r.contrasts[2].a_experiment == "exp3_control_number_en");
  CHECK(r.contrasts[2].b_experiment == "exp3_critical_number_en");
  CHECK(r.contrasts[2].a_condition == r.contrasts[2].b_condition);
  CHECK(r.contrasts[2].mean_diff == doctest::Approx(2.0).epsilon(1e-9));

  // figure-ready json parses and mirrors the result
  nlohmann::json doc = nlohmann::json::parse(plot_data_json(r));
  REQUIRE(doc["figures"].size() == 4);
  CHECK(doc["figures"][0]["experiment"] == "exp2_number_en");
  CHECK(doc["figures"][0]["measure"] == "plural_expectation");
  CHECK(doc["figures"][0]["conditions"].size() == 8);
  CHECK(doc["figures"][0]["mean_bits"].size() == 8);
  CHECK(doc["figures"][3]["measure"] == "surprisal");
  CHECK(doc["classifications"]["exp2_number_en"] == "linear-combination-like");
  CHECK(doc["classifications"]["exp3_control_number_en"] == "percolation-like");
  REQUIRE(doc["fits"].contains("exp2_number_en"));
  CHECK(doc["fits"].size() == 1);
  CHECK(doc["fits"]["exp2_number_en"]["w1"].get<double>() == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(doc["contrasts"].size() == 6);
  CHECK(doc["contrasts"][0]["ci_overlap"] == false);
  CHECK(plot_data_json(r).back() == '\n');
}

TEST_CASE("summary csv uses canonical number formatting") {
  std::vector<ExpectationSummary> sums;
  sums.push_back({"e1", "c1", ExpectationKind::kPlural, ci_of(3, 0.5, 1.0 / 3.0, 2.0)});
  sums.push_back({"e1", "c,2", ExpectationKind::kRaw, ci_of(1, -1.5, -1.5, -1.5)});
  std::ostringstream out;
  write_summary_csv(out, sums);
  CHECK(out.str() ==
        "experiment,condition,n,mean_bits,ci_low,ci_high\n"
        "e1,c1,3,0.5,0.333333333333,2\n"
        "e1,\"c,2\",1,-1.5,-1.5,-1.5\n");
}

TEST_CASE("word eval emits one row per continuation token") {
  std::vector<std::vector<std::string>> corpus = {{"the", "door", "is", "open"},
                                                  {"the", "doors", "are", "open"}};
  WordLm m(Vocabulary::build(corpus, 1), 6, 1, 17);

  StimulusItem it1{"exp1_number_en", 0, "Npl", "the doors", {{"is", "sg"}, {"are", "pl"}}, "verb"};
  StimulusItem it2{"exp1_number_en", 1, "Nsg", "the door",
                   {{"is still open", "sg"}, {"are still open", "pl"}}, "verb"};
  std::ostringstream out;
  eval_stimuli_word(m, {it1, it2}, out);

  auto lines = lines_of(out.str());
  REQUIRE(lines.size() == 1 + 2 + 6);
  CHECK(lines[0] == join_comma(eval_csv_header(false)));

  // rows for it2 / "are still open" score the continuation inside the full
  // token sequence
  SurprisalProfile prof = m.surprisal_profile({"the", "door", "are", "still", "open"});
  const char* toks[3] = {"are", "still", "open"};
  for (int k = 0; k < 3; ++k) {
    auto f = parse_csv_line(lines[1 + 2 + 3 + k]);
    REQUIRE(f.size() == 8);
    CHECK(f[0] == "exp1_number_en");
    CHECK(f[1] == "1");
    CHECK(f[2] == "Nsg");
    CHECK(f[3] == std::to_string(k));
    CHECK(f[4] == toks[k]);
    CHECK(f[5] == "pl");
    CHECK(f[6] == "verb");
    CHECK(std::abs(std::stod(f[7]) - prof.bits[2 + k]) < 1e-9);
  }

  // worker count changes scheduling, never bytes
  std::vector<StimulusItem> many;
  for (int i = 0; i < 6; ++i) {
    StimulusItem copy = i % 2 ? it2 : it1;
    copy.item_id = i;
    many.push_back(std::move(copy));
  }
  std::ostringstream one, four;
  eval_stimuli_word(m, many, one, 1);
  eval_stimuli_word(m, many, four, 4);
  CHECK(one.str() == four.str());

  StimulusItem empty_cont = it1;
  empty_cont.continuations = {{"", "sg"}};
  std::ostringstream sink;
  CHECK_THROWS_AS(eval_stimuli_word(m, {empty_cont}, sink), std::invalid_argument);
  CHECK_THROWS_AS(eval_stimuli_word(m, {it1}, sink, 0), std::invalid_argument);
}

TEST_CASE("beam eval appends widths and running mass") {
  std::vector<std::vector<std::string>> corpus = {{"the", "door", "is", "open"},
                                                  {"the", "doors", "are", "open"}};
  ActionLstmLm m(ActionSpace({"S"}, Vocabulary::build(corpus, 1)), StructuralLimits{2, 3}, 5, 1,
                 3);
  BeamConfig cfg;
  cfg.action_beam = 20;
  cfg.word_beam = 5;
  cfg.fast_track = 2;
  cfg.struct_budget = 4;

  StimulusItem item{"exp1_number_en", 0, "Npl", "the doors",
                    {{"are", "pl"}, {"is", "sg"}}, "verb"};
  std::ostringstream out;
  eval_stimuli_beam(m, cfg, {item}, out);
  auto lines = lines_of(out.str());
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == join_comma(eval_csv_header(true)));

  DecodeResult dec = word_sync_beam(m, {"the", "doors", "are"}, cfg);
  auto f = parse_csv_line(lines[1]);
  REQUIRE(f.size() == 11);
  CHECK(f[4] == "are");
  CHECK(std::abs(std::stod(f[7]) - dec.profile.bits[2]) < 1e-9);
  CHECK(f[8] == "20");
  CHECK(f[9] == "5");
  CHECK(std::abs(std::stod(f[10]) - dec.mass_bits[3]) < 1e-9);

  std::vector<StimulusItem> many(5, item);
  for (int i = 0; i < 5; ++i) many[i].item_id = i;
  std::ostringstream one, four;
  eval_stimuli_beam(m, cfg, many, one, 1);
  eval_stimuli_beam(m, cfg, many, four, 4);
  CHECK(one.str() == four.str());
}
