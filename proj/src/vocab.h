#ifndef COORDLM_VOCAB_H
#define COORDLM_VOCAB_H

#include <string>
#include <unordered_map>
#include <vector>

namespace coordlm {

// Closed word list with <unk> at id 0 and <eos> at id 1. Word order is
// first-appearance order in the building corpus, so identical corpora give
// identical id assignments.
class Vocabulary {
 public:
  static constexpr const char* kUnk = "<unk>";
  static constexpr const char* kEos = "<eos>";

  Vocabulary();
  // Keeps words whose corpus frequency is at least min_freq (>= 1); rarer
  // tokens fall back to <unk> at lookup time.
  static Vocabulary build(const std::vector<std::vector<std::string>>& corpus, int min_freq);
  // Rebuild from a serialized word list; validates the reserved entries.
  static Vocabulary from_words(std::vector<std::string> words);

  int id(const std::string& word) const {
    auto it = index_.find(word);
    return it == index_.end() ? kUnkId : it->second;
  }
  bool contains(const std::string& word) const { return index_.count(word) != 0; }
  const std::string& word(int id) const { return words_.at(id); }
  int size() const { return static_cast<int>(words_.size()); }
  const std::vector<std::string>& words() const { return words_; }

  static constexpr int kUnkId = 0;
  static constexpr int kEosId = 1;

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, int> index_;
};

std::vector<std::string> split_tokens(const std::string& line);  // on ASCII whitespace

// One whitespace-tokenized sentence per line; blank lines are skipped.
std::vector<std::vector<std::string>> read_text_corpus(const std::string& path);

}  // namespace coordlm

#endif
