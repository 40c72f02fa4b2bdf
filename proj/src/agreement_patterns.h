#ifndef COORDLM_AGREEMENT_PATTERNS_H
#define COORDLM_AGREEMENT_PATTERNS_H

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "lexicon.h"
#include "tree.h"

namespace coordlm {

struct LeafFeatures {
  enum Cat { kNoun, kVerb, kAdj } cat;
  std::string number;  // sg | pl | "" when unreadable
  std::string gender;  // m | f | "" when unreadable
};

// Classifies one tagged leaf; nullopt for leaves outside the categories of
// interest. tag is the label of the unary parent ("" for bare leaves).
using FeatureTagger =
    std::function<std::optional<LeafFeatures>(const std::string& tag, const std::string& word)>;

// PTB-style tags: NN/NNP -> noun sg, NNS/NNPS -> noun pl, VBZ -> verb sg,
// VBP -> verb pl, VBD -> verb (was/were resolve sg/pl, otherwise unnumbered),
// other VB*/MD -> verb unnumbered, JJ -> adj.
FeatureTagger english_tag_tagger();
// Form-driven tagging for languages with varying tagsets: a word is
// classified by its lexicon entries and left unnumbered/ungendered when its
// matching entries disagree.
FeatureTagger lexicon_feature_tagger(Lexicon lexicon, std::string language);

enum class PatternMode { kNumber, kGender };

// features (sg/pl or m/f) of conjunct 1, coordinator (normalized to and/or),
// conjunct 2
using PatternKey = std::array<std::string, 3>;

struct PatternCell {
  long outcome_first = 0;   // singular verb / masculine predicate
  long outcome_second = 0;  // plural verb / feminine predicate
  long unclassified = 0;    // pair detected, predicate feature unreadable
  long total() const { return outcome_first + outcome_second + unclassified; }
};

// Pairs that never became a table row, by reason.
struct PatternDiagnostics {
  long coord_np_subjects = 0;      // subject CoordNPs seen
  long skipped_multi_coord = 0;    // more than one coordinator child
  long skipped_conjunct = 0;       // a conjunct with no classifiable noun
  long skipped_no_predicate = 0;   // no predicate leaf of the right category
};

struct AgreementPatternTable {
  PatternMode mode;
  std::map<PatternKey, PatternCell> cells;  // all 8 keys always present
  PatternDiagnostics diagnostics;

  long total() const;
  // header n1,coord,n2,outcome_sg,outcome_pl,unclassified,total
  // (g1/g2 and outcome_m/outcome_f in gender mode)
  void write_csv(std::ostream& out) const;
};

// Scans every clause node (S, SINV, SQ, SENT) whose leftmost NP child is a
// two-conjunct CoordNP, takes each conjunct's feature from its last
// noun-classified leaf, and reads the outcome from the clause's VP: the first
// verb leaf's number (number mode) or the first gendered adjective leaf
// (gender mode, with a verb leaf still required to anchor the predicate).
// Tree order never affects the counts.
AgreementPatternTable count_agreement_patterns(const std::vector<Tree>& trees,
                                               const FeatureTagger& tagger,
                                               const std::vector<std::string>& coordinators,
                                               PatternMode mode);

}  // namespace coordlm

#endif
