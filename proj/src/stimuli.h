#ifndef COORDLM_STIMULI_H
#define COORDLM_STIMULI_H

#include <ostream>
#include <string>
#include <vector>

#include "lexicon.h"

namespace coordlm {

// One measured cell of one experimental item: a shared prefix plus the
// minimal-pair continuations scored at measure_region.
struct StimulusItem {
  std::string experiment;  // e.g. exp2_number_en, exp3_control_gender_fr
  int item_id = 0;
  std::string condition;   // closed per-experiment label set
  std::string prefix;
  struct Continuation {
    std::string text;
    std::string cls;  // sg | pl | m | f | na
    bool operator==(const Continuation& o) const { return text == o.text && cls == o.cls; }
  };
  std::vector<Continuation> continuations;
  std::string measure_region;  // verb | verb:present | verb:past | adjective | coordinator

  bool operator==(const StimulusItem& o) const = default;
};

// The generators draw surface material from the lexicon by role and pair
// nouns round-robin in lexicon order, so a fixed lexicon pins every string.
// Required lemmas: en: det "the", verbs "be_pres" (+ "be_past" for exp2);
// fr: det "le", verb "aller", copulas "etre_pres"/"etre_impf" and at least
// one adjective for the gender experiments. A missing inflection cell throws
// std::invalid_argument naming the lemma and cell; an empty noun pool yields
// an empty item list. items = 0 selects the per-experiment default count
// (one per noun/pairing for exp1, else 37 for en and 24 for fr).

// Simple subject: conditions Npl/Nsg with sg/pl verb continuations (number
// mode), or Nm/Nf plural subjects with m/f adjective continuations (gender
// mode, French only).
std::vector<StimulusItem> generate_exp1(const Lexicon& lex, const std::string& language,
                                        const std::string& mode, int items = 0);

// Coordinated subject: conditions {sg,pl}x{and,or}x{sg,pl} (number mode;
// English doubles each condition into present and past tense cells) or
// {m,f}x{and,or}x{m,f} (gender mode, French). French number items pair nouns
// of matching gender, alternating masculine and feminine pairs across items.
std::vector<StimulusItem> generate_exp2(const Lexicon& lex, const std::string& language,
                                        const std::string& mode, int items = 0);

// Embedded coordination, and-conditions only, two matrix frames per item id:
// a control frame licensing a sentential complement and a critical frame that
// does not (experiments exp3_control_* and exp3_critical_*).
std::vector<StimulusItem> generate_exp3(const Lexicon& lex, const std::string& language,
                                        const std::string& mode, int items = 0);

// Inverted question frame with the coordinator itself as the single measured
// continuation: conditions Vpl_Npl, Vpl_Nsg, Vsg_Nsg.
std::vector<StimulusItem> generate_exp4(const Lexicon& lex, const std::string& language,
                                        int items = 0);

inline const std::vector<std::string>& stimulus_csv_header() {
  static const std::vector<std::string> h = {"experiment",   "item_id",
                                             "condition",    "prefix",
                                             "continuation", "continuation_class",
                                             "measure_region"};
  return h;
}

// One row per continuation; byte-exact round trip through read_stimulus_csv.
void write_stimulus_csv(std::ostream& out, const std::vector<StimulusItem>& items);
std::vector<StimulusItem> read_stimulus_csv(const std::string& path);

}  // namespace coordlm

#endif
