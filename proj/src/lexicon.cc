#include "lexicon.h"

#include <algorithm>
#include <fstream>

#include "errors.h"

namespace coordlm {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == '\t') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

const std::vector<std::string> kHeader = {"language", "lemma", "number", "gender", "form", "role"};

bool feature_matches(const std::string& entry_val, const std::string& want) {
  return want.empty() || want == "-" || entry_val == "-" || entry_val == want;
}

}  // namespace

Lexicon Lexicon::read_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open lexicon file: " + path);
  Lexicon lex;
  std::string line;
  size_t lineno = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::vector<std::string> f = split_tabs(line);
    if (!saw_header) {
      if (f != kHeader)
        throw ParseError(path + ":" + std::to_string(lineno) +
                         ": bad lexicon header (expected language, lemma, number, gender, form, "
                         "role separated by tabs)");
      saw_header = true;
      continue;
    }
    if (f.size() != kHeader.size())
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected " +
                       std::to_string(kHeader.size()) + " tab-separated fields, got " +
                       std::to_string(f.size()));
    LexiconEntry e{f[0], f[1], f[2], f[3], f[4], f[5]};
    static const std::vector<std::string> roles = {"noun", "verb", "adj", "det"};
    if (std::find(roles.begin(), roles.end(), e.role) == roles.end())
      throw ParseError(path + ":" + std::to_string(lineno) + ": unknown role \"" + e.role + "\"");
    if (e.number != "sg" && e.number != "pl" && e.number != "-")
      throw ParseError(path + ":" + std::to_string(lineno) + ": bad number \"" + e.number + "\"");
    if (e.gender != "m" && e.gender != "f" && e.gender != "-")
      throw ParseError(path + ":" + std::to_string(lineno) + ": bad gender \"" + e.gender + "\"");
    if (e.form.empty() || e.lemma.empty())
      throw ParseError(path + ":" + std::to_string(lineno) + ": empty lemma or form");
    lex.entries_.push_back(std::move(e));
  }
  if (!saw_header) throw ParseError(path + ": empty lexicon (no header)");
  return lex;
}

std::vector<std::string> Lexicon::lemmas(const std::string& language, const std::string& role,
                                         const std::string& gender) const {
  std::vector<std::string> out;
  for (const auto& e : entries_) {
    if (e.language != language || e.role != role) continue;
    if (!gender.empty() && e.gender != gender) continue;
    if (std::find(out.begin(), out.end(), e.lemma) == out.end()) out.push_back(e.lemma);
  }
  return out;
}

std::string Lexicon::noun_gender(const std::string& language, const std::string& lemma) const {
  for (const auto& e : entries_)
    if (e.language == language && e.role == "noun" && e.lemma == lemma) return e.gender;
  return "-";
}

std::string Lexicon::form(const std::string& language, const std::string& lemma,
                          const std::string& role, const std::string& number,
                          const std::string& gender) const {
  for (const auto& e : entries_) {
    if (e.language != language || e.role != role || e.lemma != lemma) continue;
    if (feature_matches(e.number, number) && feature_matches(e.gender, gender)) return e.form;
  }
  throw std::invalid_argument("lexicon has no form for lemma \"" + lemma + "\" (" + language +
                              ", " + role + ", number=" + (number.empty() ? "-" : number) +
                              ", gender=" + (gender.empty() ? "-" : gender) + ")");
}

std::vector<const LexiconEntry*> Lexicon::find_form(const std::string& language,
                                                    const std::string& form) const {
  std::vector<const LexiconEntry*> out;
  for (const auto& e : entries_)
    if (e.language == language && e.form == form) out.push_back(&e);
  return out;
}

}  // namespace coordlm
