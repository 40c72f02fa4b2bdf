#ifndef COORDLM_LEXICON_H
#define COORDLM_LEXICON_H

#include <string>
#include <vector>

namespace coordlm {

// One inflected form. number is sg/pl or "-", gender is m/f or "-";
// "-" means the feature does not apply (or the form covers both values).
struct LexiconEntry {
  std::string language;  // en | fr
  std::string lemma;
  std::string number;
  std::string gender;
  std::string form;
  std::string role;  // noun | verb | adj | det
};

// Inflection table read from a TSV with header
// "language<TAB>lemma<TAB>number<TAB>gender<TAB>form<TAB>role". Blank lines
// and '#' comments are skipped. Entry order follows the file, which makes
// every downstream pairing deterministic.
class Lexicon {
 public:
  static Lexicon read_tsv(const std::string& path);

  const std::vector<LexiconEntry>& entries() const { return entries_; }

  // Lemmas of a role in file order, deduplicated. Empty gender matches any.
  std::vector<std::string> lemmas(const std::string& language, const std::string& role,
                                  const std::string& gender = "") const;

  // First noun entry's gender for the lemma ("-" when unmarked).
  std::string noun_gender(const std::string& language, const std::string& lemma) const;

  // Inflected form for the cell; entry fields equal to "-" match any request.
  // Throws std::invalid_argument naming the lemma and cell when absent.
  std::string form(const std::string& language, const std::string& lemma, const std::string& role,
                   const std::string& number, const std::string& gender) const;

  // All entries whose surface form matches (for feature tagging).
  std::vector<const LexiconEntry*> find_form(const std::string& language,
                                             const std::string& form) const;

 private:
  std::vector<LexiconEntry> entries_;
};

}  // namespace coordlm

#endif
