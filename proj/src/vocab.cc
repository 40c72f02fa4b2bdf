#include "vocab.h"

#include <fstream>
#include <stdexcept>

#include "errors.h"

namespace coordlm {

Vocabulary::Vocabulary() {
  words_ = {kUnk, kEos};
  index_ = {{kUnk, kUnkId}, {kEos, kEosId}};
}

Vocabulary Vocabulary::build(const std::vector<std::vector<std::string>>& corpus, int min_freq) {
  if (min_freq < 1) throw std::invalid_argument("min_freq must be at least 1");
  std::unordered_map<std::string, long> counts;
  std::vector<std::string> order;
  for (const auto& sent : corpus)
    for (const auto& w : sent) {
      long& c = counts[w];
      if (c == 0) order.push_back(w);
      ++c;
    }
  Vocabulary v;
  for (const auto& w : order) {
    if (w == kUnk || w == kEos) continue;  // reserved names never duplicate
    if (counts[w] >= min_freq) {
      v.index_[w] = static_cast<int>(v.words_.size());
      v.words_.push_back(w);
    }
  }
  return v;
}

Vocabulary Vocabulary::from_words(std::vector<std::string> words) {
  if (words.size() < 2 || words[0] != kUnk || words[1] != kEos)
    throw ParseError("vocabulary list must start with <unk>, <eos>");
  Vocabulary v;
  v.words_ = std::move(words);
  v.index_.clear();
  for (size_t i = 0; i < v.words_.size(); ++i) {
    if (!v.index_.emplace(v.words_[i], static_cast<int>(i)).second)
      throw ParseError("duplicate word in vocabulary list: " + v.words_[i]);
  }
  return v;
}

std::vector<std::string> split_tokens(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      if (!cur.empty()) {
        out.push_back(cur);
        cur.clear();
      }
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<std::vector<std::string>> read_text_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus file: " + path);
  std::vector<std::vector<std::string>> corpus;
  std::string line;
  while (std::getline(in, line)) {
    auto toks = split_tokens(line);
    if (!toks.empty()) corpus.push_back(std::move(toks));
  }
  return corpus;
}

}  // namespace coordlm
