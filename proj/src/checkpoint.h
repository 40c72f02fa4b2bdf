#ifndef COORDLM_CHECKPOINT_H
#define COORDLM_CHECKPOINT_H

#include <memory>
#include <string>

#include "syntax_lm.h"
#include "word_lm.h"

namespace coordlm {

// Self-describing text container, one file per model. The first line is
// "coordlm-checkpoint v1"; then variant (word | action | rnng), dimensions,
// masking limits and the nonterminal list for syntax models, the vocabulary,
// and every parameter tensor by name. Doubles are written in shortest
// round-trip form, so save -> load -> save is byte-identical and scores
// reproduce bitwise.
struct LoadedModel {
  std::unique_ptr<WordLm> word;      // exactly one of these is set
  std::unique_ptr<SyntaxLm> syntax;
};

void save_checkpoint(const WordLm& m, const std::string& path);
void save_checkpoint(const SyntaxLm& m, const std::string& path);

// Throws ParseError on version mismatch or malformed content, IoError if the
// file cannot be read.
LoadedModel load_checkpoint(const std::string& path);

}  // namespace coordlm

#endif
