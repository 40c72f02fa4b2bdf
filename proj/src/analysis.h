#ifndef COORDLM_ANALYSIS_H
#define COORDLM_ANALYSIS_H

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "csv.h"
#include "stats.h"

namespace coordlm {

enum class ExpectationKind { kPlural, kGender, kRaw };

// One measured cell of one item, folded across its continuations:
// S(sg) - S(pl) for sg/pl cells, S(f) - S(m) for m/f cells, and the raw
// surprisal for single-continuation (na) cells.
struct ExpectationRecord {
  std::string experiment;
  int item_id = 0;
  std::string condition;
  std::string cell;  // measure_region
  ExpectationKind kind = ExpectationKind::kRaw;
  double value_bits = 0.0;
};

// Input: per-token surprisal rows with at least the columns experiment,
// item_id, condition, continuation_class, measure_region, surprisal_bits.
// Token rows of one continuation sum; the two classes of a cell difference.
std::vector<ExpectationRecord> expectations_from_eval(const CsvTable& eval);

struct ExpectationSummary {
  std::string experiment;
  std::string condition;
  ExpectationKind kind = ExpectationKind::kRaw;
  MeanCi ci;
};

// Mean and 95% t interval per (experiment, condition), first-appearance order.
std::vector<ExpectationSummary> summarize_expectations(
    const std::vector<ExpectationRecord>& records);

// Least-squares weights for mean expectation ~ w1*n1 + w2*n2 + w_coord*coord
// + intercept, where a condition "<n1>_<coord>_<n2>" codes pl as 1, sg as 0,
// and as 1, or as 0. Throws std::invalid_argument on unparseable condition
// labels or a rank-deficient design (conditions that do not vary).
struct LinearFit {
  double w1 = 0.0, w2 = 0.0, w_coord = 0.0, intercept = 0.0;
  double residual_norm = 0.0;
};
LinearFit fit_conjunct_weights(const std::vector<ExpectationSummary>& conditions);

enum class BehaviorClass { kPercolationLike, kLinearCombinationLike, kInconsistent };
const char* behavior_name(BehaviorClass b);

// Classification over the four and-conditions (keys pl_and_pl, sg_and_pl,
// pl_and_sg, sg_and_sg): percolation-like when every interval sits strictly
// above zero and all intervals pairwise overlap;
// linear-combination-like when means rise strictly with the number of plural
// conjuncts and the all-sg and all-pl intervals are disjoint; inconsistent
// otherwise.
BehaviorClass classify_behavior(const std::map<std::string, MeanCi>& and_conditions);

struct Contrast {
  std::string a_experiment, a_condition;
  std::string b_experiment, b_condition;
  double mean_diff = 0.0;  // mean(a) - mean(b)
  bool ci_overlap = false;
};

struct AnalysisResult {
  std::vector<ExpectationSummary> summaries;
  struct PerExperiment {
    std::string experiment;
    std::optional<BehaviorClass> behavior;    // when the 4 and-conditions exist
    std::optional<LinearFit> fit;             // when all 8 coordination conditions exist
  };
  std::vector<PerExperiment> experiments;
  std::vector<Contrast> contrasts;  // coordinator-surprisal and frame contrasts
};

AnalysisResult analyze_eval(const CsvTable& eval);

inline const std::vector<std::string>& summary_csv_header() {
  static const std::vector<std::string> h = {"experiment", "condition", "n",
                                             "mean_bits",  "ci_low",    "ci_high"};
  return h;
}
void write_summary_csv(std::ostream& out, const std::vector<ExpectationSummary>& summaries);

// Figure-ready JSON: per-experiment condition arrays with means and interval
// bounds, plus classifications, fitted weights, and contrasts.
std::string plot_data_json(const AnalysisResult& r);

}  // namespace coordlm

#endif
