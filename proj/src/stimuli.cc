#include "stimuli.h"

#include <stdexcept>

#include "csv.h"
#include "errors.h"

namespace coordlm {

namespace {

constexpr int kDefaultItemsEn = 37;
constexpr int kDefaultItemsFr = 24;

std::string sentence_case(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

std::string coord_word(const std::string& language, const std::string& coord) {
  if (language == "fr") return coord == "and" ? "et" : "ou";
  return coord;
}

void check_language(const std::string& language) {
  if (language != "en" && language != "fr")
    throw std::invalid_argument("unknown language \"" + language + "\" (expected en or fr)");
}

void check_mode(const std::string& mode, const std::string& language) {
  if (mode != "number" && mode != "gender")
    throw std::invalid_argument("unknown mode \"" + mode + "\" (expected number or gender)");
  if (mode == "gender" && language != "fr")
    throw std::invalid_argument("gender mode is only defined for language fr");
}

std::string det_lemma(const std::string& language) { return language == "en" ? "the" : "le"; }

std::string number_verb_lemma(const std::string& language) {
  return language == "en" ? "be_pres" : "aller";
}

// Determiner + noun for a given number, with the noun's lexical gender.
std::string np(const Lexicon& lex, const std::string& language, const std::string& lemma,
               const std::string& number) {
  std::string g = lex.noun_gender(language, lemma);
  return lex.form(language, det_lemma(language), "det", number, g) + " " +
         lex.form(language, lemma, "noun", number, g);
}

int default_items(const std::string& language) {
  return language == "en" ? kDefaultItemsEn : kDefaultItemsFr;
}

// Same-gender noun pair for French coordination items: even items draw from
// the masculine pool, odd items from the feminine pool, each pool advancing
// round-robin so consecutive same-gender items differ.
std::pair<std::string, std::string> paired_nouns(const Lexicon& lex, const std::string& language,
                                                 int item) {
  if (language == "en") {
    auto nouns = lex.lemmas("en", "noun");
    if (nouns.empty()) return {};
    int n = static_cast<int>(nouns.size());
    return {nouns[item % n], nouns[(item + 1) % n]};
  }
  auto m = lex.lemmas("fr", "noun", "m");
  auto f = lex.lemmas("fr", "noun", "f");
  const auto& pool = (item % 2 == 0) ? m : f;
  if (pool.empty()) return {};
  int n = static_cast<int>(pool.size());
  int k = item / 2;
  return {pool[k % n], pool[(k + 1) % n]};
}

}  // namespace

std::vector<StimulusItem> generate_exp1(const Lexicon& lex, const std::string& language,
                                        const std::string& mode, int items) {
  check_language(language);
  check_mode(mode, language);
  std::vector<StimulusItem> out;
  if (mode == "number") {
    auto nouns = lex.lemmas(language, "noun");
    if (nouns.empty()) return out;
    if (items <= 0) items = static_cast<int>(nouns.size());
    std::string exp = "exp1_number_" + language;
    std::string verb = number_verb_lemma(language);
    for (int k = 0; k < items; ++k) {
      const std::string& noun = nouns[k % nouns.size()];
      for (const char* num : {"pl", "sg"}) {
        StimulusItem it;
        it.experiment = exp;
        it.item_id = k;
        it.condition = std::string("N") + num;
        it.prefix = sentence_case(np(lex, language, noun, num));
        it.continuations = {{lex.form(language, verb, "verb", "sg", "-"), "sg"},
                            {lex.form(language, verb, "verb", "pl", "-"), "pl"}};
        it.measure_region = "verb";
        out.push_back(std::move(it));
      }
    }
    return out;
  }
  auto mn = lex.lemmas("fr", "noun", "m");
  auto fn = lex.lemmas("fr", "noun", "f");
  auto adjs = lex.lemmas("fr", "adj");
  if (mn.empty() || fn.empty()) return out;
  if (adjs.empty()) throw std::invalid_argument("gender mode needs at least one adjective lemma");
  if (items <= 0) items = static_cast<int>(std::max(mn.size(), fn.size()));
  for (int k = 0; k < items; ++k) {
    const std::string& adj = adjs[k % adjs.size()];
    for (const char* g : {"m", "f"}) {
      const std::string& noun = (*g == 'm') ? mn[k % mn.size()] : fn[k % fn.size()];
      StimulusItem it;
      it.experiment = "exp1_gender_fr";
      it.item_id = k;
      it.condition = std::string("N") + g;
      it.prefix = sentence_case(np(lex, "fr", noun, "pl") + " " +
                                lex.form("fr", "etre_pres", "verb", "pl", "-"));
      it.continuations = {{lex.form("fr", adj, "adj", "pl", "m"), "m"},
                          {lex.form("fr", adj, "adj", "pl", "f"), "f"}};
      it.measure_region = "adjective";
      out.push_back(std::move(it));
    }
  }
  return out;
}

std::vector<StimulusItem> generate_exp2(const Lexicon& lex, const std::string& language,
                                        const std::string& mode, int items) {
  check_language(language);
  check_mode(mode, language);
  std::vector<StimulusItem> out;
  if (items <= 0) items = default_items(language);
  static const char* kNums[4][2] = {{"pl", "pl"}, {"sg", "pl"}, {"pl", "sg"}, {"sg", "sg"}};
  if (mode == "number") {
    std::string exp = "exp2_number_" + language;
    for (int k = 0; k < items; ++k) {
      auto [n1, n2] = paired_nouns(lex, language, k);
      if (n1.empty()) return out;
      for (const char* coord : {"and", "or"}) {
        for (auto& nums : kNums) {
          std::string condition = std::string(nums[0]) + "_" + coord + "_" + nums[1];
          std::string prefix =
              sentence_case(np(lex, language, n1, nums[0]) + " " + coord_word(language, coord) +
                            " " + np(lex, language, n2, nums[1]));
          if (language == "en") {
            for (const char* tense : {"pres", "past"}) {
              StimulusItem it;
              it.experiment = exp;
              it.item_id = k;
              it.condition = condition;
              it.prefix = prefix;
              std::string verb = std::string("be_") + tense;
              it.continuations = {{lex.form("en", verb, "verb", "sg", "-"), "sg"},
                                  {lex.form("en", verb, "verb", "pl", "-"), "pl"}};
              it.measure_region = std::string("verb:") +
                                  (std::string(tense) == "pres" ? "present" : "past");
              out.push_back(std::move(it));
            }
          } else {
            StimulusItem it;
            it.experiment = exp;
            it.item_id = k;
            it.condition = condition;
            it.prefix = prefix;
            it.continuations = {{lex.form("fr", "aller", "verb", "sg", "-"), "sg"},
                                {lex.form("fr", "aller", "verb", "pl", "-"), "pl"}};
            it.measure_region = "verb";
            out.push_back(std::move(it));
          }
        }
      }
    }
    return out;
  }
  auto mn = lex.lemmas("fr", "noun", "m");
  auto fn = lex.lemmas("fr", "noun", "f");
  auto adjs = lex.lemmas("fr", "adj");
  if (mn.empty() || fn.empty()) return out;
  if (adjs.empty()) throw std::invalid_argument("gender mode needs at least one adjective lemma");
  static const char* kGens[4][2] = {{"m", "m"}, {"f", "m"}, {"m", "f"}, {"f", "f"}};
  for (int k = 0; k < items; ++k) {
    // Position-stable noun choices: conjunct 1 uses index k, conjunct 2 uses
    // k + 1, from whichever gender pool the condition selects.
    auto pick = [&](char g, int slot) -> const std::string& {
      const auto& pool = (g == 'm') ? mn : fn;
      return pool[(k + slot) % pool.size()];
    };
    const std::string& adj = adjs[k % adjs.size()];
    for (const char* coord : {"and", "or"}) {
      for (auto& gens : kGens) {
        StimulusItem it;
        it.experiment = "exp2_gender_fr";
        it.item_id = k;
        it.condition = std::string(gens[0]) + "_" + coord + "_" + gens[1];
        it.prefix = sentence_case(np(lex, "fr", pick(gens[0][0], 0), "pl") + " " +
                                  coord_word("fr", coord) + " " +
                                  np(lex, "fr", pick(gens[1][0], 1), "pl") + " " +
                                  lex.form("fr", "etre_pres", "verb", "pl", "-"));
        it.continuations = {{lex.form("fr", adj, "adj", "pl", "m"), "m"},
                            {lex.form("fr", adj, "adj", "pl", "f"), "f"}};
        it.measure_region = "adjective";
        out.push_back(std::move(it));
      }
    }
  }
  return out;
}

std::vector<StimulusItem> generate_exp3(const Lexicon& lex, const std::string& language,
                                        const std::string& mode, int items) {
  check_language(language);
  check_mode(mode, language);
  static const std::vector<std::string> kControlEn = {"I think that", "I believe that",
                                                      "I suspect that", "I assume that",
                                                      "I heard that"};
  static const std::vector<std::string> kCriticalEn = {"I fixed", "I sold", "I bought",
                                                       "I cleaned", "I painted"};
  static const std::vector<std::string> kControlFr = {"Je croyais que"};
  static const std::vector<std::string> kCriticalFr = {"Nous avons accepté"};
  const auto& control = language == "en" ? kControlEn : kControlFr;
  const auto& critical = language == "en" ? kCriticalEn : kCriticalFr;
  std::vector<StimulusItem> out;
  if (items <= 0) items = default_items(language);
  if (mode == "number") {
    static const char* kNums[4][2] = {{"pl", "pl"}, {"sg", "pl"}, {"pl", "sg"}, {"sg", "sg"}};
    for (int k = 0; k < items; ++k) {
      auto [n1, n2] = paired_nouns(lex, language, k);
      if (n1.empty()) return out;
      for (const char* frame : {"control", "critical"}) {
        const auto& frames = std::string(frame) == "control" ? control : critical;
        for (auto& nums : kNums) {
          StimulusItem it;
          it.experiment = std::string("exp3_") + frame + "_number_" + language;
          it.item_id = k;
          it.condition = std::string(nums[0]) + "_and_" + nums[1];
          it.prefix = frames[k % frames.size()] + " " + np(lex, language, n1, nums[0]) + " " +
                      coord_word(language, "and") + " " + np(lex, language, n2, nums[1]);
          if (language == "en") {
            it.continuations = {{lex.form("en", "be_pres", "verb", "sg", "-"), "sg"},
                                {lex.form("en", "be_pres", "verb", "pl", "-"), "pl"}};
          } else {
            it.continuations = {{lex.form("fr", "aller", "verb", "sg", "-"), "sg"},
                                {lex.form("fr", "aller", "verb", "pl", "-"), "pl"}};
          }
          it.measure_region = "verb";
          out.push_back(std::move(it));
        }
      }
    }
    return out;
  }
  auto mn = lex.lemmas("fr", "noun", "m");
  auto fn = lex.lemmas("fr", "noun", "f");
  auto adjs = lex.lemmas("fr", "adj");
  if (mn.empty() || fn.empty()) return out;
  if (adjs.empty()) throw std::invalid_argument("gender mode needs at least one adjective lemma");
  static const char* kGens[4][2] = {{"m", "m"}, {"f", "m"}, {"m", "f"}, {"f", "f"}};
  for (int k = 0; k < items; ++k) {
    auto pick = [&](char g, int slot) -> const std::string& {
      const auto& pool = (g == 'm') ? mn : fn;
      return pool[(k + slot) % pool.size()];
    };
    const std::string& adj = adjs[k % adjs.size()];
    for (const char* frame : {"control", "critical"}) {
      const auto& frames = std::string(frame) == "control" ? control : critical;
      for (auto& gens : kGens) {
        StimulusItem it;
        it.experiment = std::string("exp3_") + frame + "_gender_fr";
        it.item_id = k;
        it.condition = std::string(gens[0]) + "_and_" + gens[1];
        it.prefix = frames[k % frames.size()] + " " + np(lex, "fr", pick(gens[0][0], 0), "pl") +
                    " " + coord_word("fr", "and") + " " + np(lex, "fr", pick(gens[1][0], 1), "pl") +
                    " " + lex.form("fr", "etre_impf", "verb", "pl", "-");
        it.continuations = {{lex.form("fr", adj, "adj", "pl", "m"), "m"},
                            {lex.form("fr", adj, "adj", "pl", "f"), "f"}};
        it.measure_region = "adjective";
        out.push_back(std::move(it));
      }
    }
  }
  return out;
}

std::vector<StimulusItem> generate_exp4(const Lexicon& lex, const std::string& language,
                                        int items) {
  check_language(language);
  std::vector<StimulusItem> out;
  auto nouns = lex.lemmas(language, "noun");
  if (nouns.empty()) return out;
  if (items <= 0) items = default_items(language);
  // Verb number crossed with noun number, minus the ungrammatical Vsg_Npl.
  static const char* kConds[3][2] = {{"pl", "pl"}, {"pl", "sg"}, {"sg", "sg"}};
  std::string verb = number_verb_lemma(language);
  for (int k = 0; k < items; ++k) {
    const std::string& noun = nouns[k % nouns.size()];
    for (auto& c : kConds) {
      StimulusItem it;
      it.experiment = "exp4_" + language;
      it.item_id = k;
      it.condition = std::string("V") + c[0] + "_N" + c[1];
      std::string v = lex.form(language, verb, "verb", c[0], "-");
      if (language == "en") {
        it.prefix = "What " + v + " " + np(lex, "en", noun, c[1]);
        it.continuations = {{"and", "na"}};
      } else {
        it.prefix = "Je me demande où " + v + " " + np(lex, "fr", noun, c[1]);
        it.continuations = {{"et", "na"}};
      }
      it.measure_region = "coordinator";
      out.push_back(std::move(it));
    }
  }
  return out;
}

void write_stimulus_csv(std::ostream& out, const std::vector<StimulusItem>& items) {
  write_csv_row(out, stimulus_csv_header());
  for (const auto& it : items)
    for (const auto& c : it.continuations)
      write_csv_row(out, {it.experiment, std::to_string(it.item_id), it.condition, it.prefix,
                          c.text, c.cls, it.measure_region});
}

std::vector<StimulusItem> read_stimulus_csv(const std::string& path) {
  CsvTable t = read_csv_expecting(path, stimulus_csv_header());
  std::vector<StimulusItem> items;
  for (size_t i = 0; i < t.rows.size(); ++i) {
    const auto& r = t.rows[i];
    int id;
    try {
      id = std::stoi(r[1]);
    } catch (const std::exception&) {
      throw ParseError(path + ": row " + std::to_string(i + 2) + ": bad item_id \"" + r[1] + "\"");
    }
    bool extend = !items.empty() && items.back().experiment == r[0] &&
                  items.back().item_id == id && items.back().condition == r[2] &&
                  items.back().measure_region == r[6];
    if (extend) {
      if (items.back().prefix != r[3])
        throw ParseError(path + ": row " + std::to_string(i + 2) +
                         ": prefix differs within item " + r[0] + "/" + r[1] + "/" + r[2]);
      items.back().continuations.push_back({r[4], r[5]});
    } else {
      StimulusItem it;
      it.experiment = r[0];
      it.item_id = id;
      it.condition = r[2];
      it.prefix = r[3];
      it.continuations = {{r[4], r[5]}};
      it.measure_region = r[6];
      items.push_back(std::move(it));
    }
  }
  return items;
}

}  // namespace coordlm
