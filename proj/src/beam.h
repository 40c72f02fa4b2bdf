#ifndef COORDLM_BEAM_H
#define COORDLM_BEAM_H

#include <string>
#include <vector>

#include "surprisal.h"
#include "syntax_lm.h"

namespace coordlm {

struct BeamConfig {
  int action_beam = 100;  // K_a: fringe survivors per expansion round
  int word_beam = 10;     // K_w: hypotheses kept after each word
  int fast_track = 5;     // K_f: below-cut word advances rescued per round
  int struct_budget = 8;  // M: expansion rounds between words

  // word_beam <= action_beam, 0 <= fast_track <= word_beam, budget >= 1
  void validate() const;
};

struct DecodeResult {
  SurprisalProfile profile;
  // log2 of the summed probability of the word-synchronized hypothesis set
  // after each position; mass_bits[0] = 0 for the empty prefix, so
  // profile.bits[i] = mass_bits[i] - mass_bits[i+1].
  std::vector<double> mass_bits;
  // log2 of the mass of full-tree completions of the final set (REDUCE
  // chains only; no word leaves the sentence). Filled by exact_marginal.
  double terminal_mass_bits = 0.0;
  bool has_terminal_mass = false;
};

// Word-synchronous beam search over masked action sequences. Each word step
// repeatedly expands the current hypotheses one action, keeps the top
// action_beam candidates per round by cumulative log probability (ties broken
// by lexicographic action history), collects hypotheses that just generated
// the next word, and fast-tracks the best fast_track below-cut word advances
// so deep derivations cannot starve. Surprisal of word i is the log2 ratio of
// successive set masses. Unknown words score as GEN(<unk>).
//
// Throws DecodeError naming the 1-based position and token if every
// hypothesis dies, std::invalid_argument on an empty sentence or bad config.
DecodeResult word_sync_beam(const SyntaxLm& m, const std::vector<std::string>& tokens,
                            const BeamConfig& cfg);

// Prefix masses by exhaustive expansion (no pruning, no fast-tracking):
// the oracle word_sync_beam converges to as its widths saturate. Also sums
// the terminated completions of the final set into terminal_mass_bits.
// Throws DecodeError once more than max_hypotheses hypotheses are expanded.
DecodeResult exact_marginal(const SyntaxLm& m, const std::vector<std::string>& tokens,
                            int struct_budget, long max_hypotheses = 1000000);

}  // namespace coordlm

#endif
