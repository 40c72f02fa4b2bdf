#include <doctest.h>

#include <algorithm>
#include <functional>
#include <sstream>

#include "actions.h"
#include "agreement_patterns.h"
#include "errors.h"
#include "lexicon.h"
#include "rng.h"
#include "temp_dir.h"
#include "tree.h"

using namespace coordlm;

namespace {
const std::string kData = COORDLM_DATA_DIR;
const std::string kGolden = kData + "/golden";
}  // namespace

// ----------------------------------------------------- action linearization

TEST_CASE("tree linearization produces the depth-first action encoding") {
  Tree t = parse_bracketed("(S (NP the hungry cat) (VP meows))");
  std::vector<Action> want = {
      Action::nt("S"),     Action::nt("NP"),    Action::gen("the"),
      Action::gen("hungry"), Action::gen("cat"), Action::reduce(),
      Action::nt("VP"),    Action::gen("meows"), Action::reduce(),
      Action::reduce(),
  };
  CHECK(tree_to_actions(t) == want);
  CHECK(actions_to_tree(want) == t);
}

TEST_CASE("linearization round trips random stripped trees") {
  Rng rng(101);
  const std::vector<std::string> labels = {"S", "NP", "VP", "PP"};
  const std::vector<std::string> words = {"a", "b", "c", "d", "e"};
  std::function<Tree(int)> build = [&](int depth) -> Tree {
    if (depth >= 4 || (depth > 0 && rng.next_double() < 0.45))
      return Tree{words[rng.below(words.size())], {}};
    Tree t{labels[rng.below(labels.size())], {}};
    int n = 1 + static_cast<int>(rng.below(3));
    for (int i = 0; i < n; ++i) t.children.push_back(build(depth + 1));
    return t;
  };
  for (int i = 0; i < 500; ++i) {
    Tree t = build(0);
    if (t.is_leaf()) continue;  // bare words have no bracketed encoding
    Tree back = actions_to_tree(tree_to_actions(t));
    REQUIRE(back == t);
  }
}

TEST_CASE("action decoding rejects malformed sequences") {
  CHECK_THROWS_AS(actions_to_tree({}), DecodeError);
  CHECK_THROWS_AS(actions_to_tree({Action::gen("w")}), DecodeError);
  CHECK_THROWS_AS(actions_to_tree({Action::nt("S"), Action::reduce(), Action::gen("w")}),
                  DecodeError);
  // reduce of an empty constituent
  CHECK_THROWS_AS(actions_to_tree({Action::nt("S"), Action::reduce()}), DecodeError);
  // unclosed constituent
  CHECK_THROWS_AS(actions_to_tree({Action::nt("S"), Action::gen("w")}), DecodeError);
  // the root is a leaf-less word sequence
  CHECK_THROWS_AS(tree_to_actions(Tree{"word", {}}), std::invalid_argument);
}

// -------------------------------------------------- coordination annotation

TEST_CASE("coordination relabeling matches the hand-annotated golden bank") {
  auto bank = read_treebank(kGolden + "/coord_bank.trees");
  auto want = read_treebank(kGolden + "/coord_bank_npcoord.trees");
  REQUIRE(bank.size() == 20);
  REQUIRE(want.size() == bank.size());
  const auto& coords = coordinators_for("en");
  for (size_t i = 0; i < bank.size(); ++i) {
    Tree once = to_coord_annotation(bank[i], coords);
    CHECK(serialize(once) == serialize(want[i]));
    CHECK(to_coord_annotation(once, coords) == once);  // idempotent
  }
}

TEST_CASE("relabeling touches only conjunct NPs") {
  const auto& coords = coordinators_for("en");
  // VP coordination stays as is
  Tree vp = parse_bracketed("(S (NP a) (VP (VP runs) (CC and) (VP jumps)))");
  CHECK(to_coord_annotation(vp, coords) == vp);
  // coordinator spelled as a bare leaf still counts
  Tree bare = parse_bracketed("(NP (NP a) or (NP b))");
  CHECK(serialize(to_coord_annotation(bare, coords)) ==
        "(NP (NP-COORD a) or (NP-COORD b))");
  // french coordinators only fire for french
  Tree fr = parse_bracketed("(NP (NP a) (CC et) (NP b))");
  CHECK(to_coord_annotation(fr, coords) == fr);
  CHECK(serialize(to_coord_annotation(fr, coordinators_for("fr"))) ==
        "(NP (NP-COORD a) (CC et) (NP-COORD b))");
  CHECK_THROWS_AS(coordinators_for("de"), std::invalid_argument);
}

// --------------------------------------------------------- pattern counting

TEST_CASE("english tag tagger classifies the PTB inventory") {
  FeatureTagger tag = english_tag_tagger();
  CHECK(tag("NN", "door")->number == "sg");
  CHECK(tag("NNS", "doors")->number == "pl");
  CHECK(tag("NNP", "Mary")->cat == LeafFeatures::kNoun);
  CHECK(tag("VBZ", "is")->number == "sg");
  CHECK(tag("VBP", "are")->number == "pl");
  CHECK(tag("VBD", "was")->number == "sg");
  CHECK(tag("VBD", "were")->number == "pl");
  CHECK(tag("VBD", "went")->number == "");
  CHECK(tag("MD", "can")->cat == LeafFeatures::kVerb);
  CHECK(tag("JJ", "old")->cat == LeafFeatures::kAdj);
  CHECK(!tag("DT", "the").has_value());
  CHECK(!tag("", "and").has_value());
}

TEST_CASE("lexicon tagger resolves features by surface form") {
  Lexicon lex = Lexicon::read_tsv(kData + "/lexicon_fr.tsv");
  FeatureTagger tag = lexicon_feature_tagger(lex, "fr");
  CHECK(tag("NC", "recettes")->number == "pl");
  CHECK(tag("NC", "recettes")->gender == "f");
  // prix covers both numbers: number washes out, gender survives
  CHECK(tag("NC", "prix")->number == "");
  CHECK(tag("NC", "prix")->gender == "m");
  CHECK(!tag("DET", "les").has_value());  // determiners are ignored
  CHECK(!tag("NC", "tables").has_value());
  CHECK(tag("V", "sont")->cat == LeafFeatures::kVerb);
  CHECK(tag("ADJ", "importantes")->gender == "f");
}

TEST_CASE("agreement counts over the english golden bank") {
  auto bank = read_treebank(kGolden + "/coord_bank.trees");
  AgreementPatternTable t = count_agreement_patterns(bank, english_tag_tagger(),
                                                     coordinators_for("en"),
                                                     PatternMode::kNumber);
  auto cell = [&](const char* a, const char* b, const char* c) {
    return t.cells.at(PatternKey{a, b, c});
  };
  CHECK(cell("sg", "and", "sg").outcome_first == 4);
  CHECK(cell("sg", "and", "sg").outcome_second == 2);
  CHECK(cell("sg", "and", "sg").unclassified == 1);
  CHECK(cell("pl", "and", "sg").outcome_second == 1);
  CHECK(cell("pl", "and", "pl").outcome_second == 1);
  CHECK(cell("sg", "or", "pl").outcome_second == 2);
  CHECK(cell("sg", "or", "sg").outcome_first == 1);
  CHECK(cell("pl", "or", "sg").outcome_first == 1);
  CHECK(cell("sg", "and", "pl").total() == 0);
  CHECK(cell("pl", "or", "pl").total() == 0);
  CHECK(t.total() == 13);
  CHECK(t.diagnostics.coord_np_subjects == 17);
  CHECK(t.diagnostics.skipped_multi_coord == 1);
  CHECK(t.diagnostics.skipped_conjunct == 1);
  CHECK(t.diagnostics.skipped_no_predicate == 2);

  std::ostringstream os;
  t.write_csv(os);
  CHECK(os.str() == read_file(kGolden + "/coord_bank_patterns_en.csv"));

  // counts are invariant under tree order
  std::reverse(bank.begin(), bank.end());
  AgreementPatternTable r = count_agreement_patterns(bank, english_tag_tagger(),
                                                     coordinators_for("en"),
                                                     PatternMode::kNumber);
  CHECK(r.total() == t.total());
  CHECK(r.cells.at(PatternKey{"sg", "and", "sg"}).outcome_first == 4);
}

TEST_CASE("gender counts over the french golden bank") {
  auto bank = read_treebank(kGolden + "/coord_bank_fr.trees");
  Lexicon lex = Lexicon::read_tsv(kData + "/lexicon_fr.tsv");
  AgreementPatternTable t = count_agreement_patterns(bank, lexicon_feature_tagger(lex, "fr"),
                                                     coordinators_for("fr"),
                                                     PatternMode::kGender);
  CHECK(t.cells.at(PatternKey{"m", "and", "m"}).outcome_first == 2);
  CHECK(t.cells.at(PatternKey{"m", "and", "f"}).outcome_first == 1);
  CHECK(t.cells.at(PatternKey{"m", "and", "f"}).unclassified == 1);
  CHECK(t.cells.at(PatternKey{"f", "and", "m"}).outcome_first == 1);
  CHECK(t.cells.at(PatternKey{"f", "and", "f"}).outcome_second == 1);
  CHECK(t.cells.at(PatternKey{"f", "or", "f"}).outcome_second == 1);
  CHECK(t.diagnostics.coord_np_subjects == 8);
  CHECK(t.diagnostics.skipped_conjunct == 1);
  CHECK(t.diagnostics.skipped_no_predicate == 0);

  std::ostringstream os;
  t.write_csv(os);
  CHECK(os.str() == read_file(kGolden + "/coord_bank_patterns_fr.csv"));
}

TEST_CASE("subject detection ignores clauses without a coordinated NP") {
  // object coordination and clause-less coordination contribute nothing
  auto trees = std::vector<Tree>{
      parse_bracketed("(S (NP (DT the) (NN cat)) (VP (VBZ sees) "
                      "(NP (NP (DT the) (NN door)) (CC and) (NP (DT the) (NN window)))))"),
      parse_bracketed("(FRAG (NP (NP (NN a)) (CC and) (NP (NN b))))"),
  };
  AgreementPatternTable t = count_agreement_patterns(trees, english_tag_tagger(),
                                                     coordinators_for("en"),
                                                     PatternMode::kNumber);
  CHECK(t.total() == 0);
  CHECK(t.diagnostics.coord_np_subjects == 0);
  // all eight number cells exist even when empty
  CHECK(t.cells.size() == 8);
}
