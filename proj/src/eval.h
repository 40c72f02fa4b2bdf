#ifndef COORDLM_EVAL_H
#define COORDLM_EVAL_H

#include <ostream>
#include <string>
#include <vector>

#include "beam.h"
#include "stimuli.h"
#include "word_lm.h"

namespace coordlm {

// Per-token continuation surprisals for every stimulus item, one CSV row per
// continuation token, item order preserved regardless of worker count.
// Word-LM rows carry the base columns; beam rows append the beam widths and
// the post-token beam mass (log2). position is the token's 0-based index
// inside its continuation.

// experiment,item_id,condition,position,token,continuation_class,
// measure_region,surprisal_bits, plus beam_Ka,beam_Kw,mass_bits when beam.
std::vector<std::string> eval_csv_header(bool beam);

void eval_stimuli_word(const WordLm& m, const std::vector<StimulusItem>& items,
                       std::ostream& out, int workers = 1);

void eval_stimuli_beam(const SyntaxLm& m, const BeamConfig& cfg,
                       const std::vector<StimulusItem>& items, std::ostream& out,
                       int workers = 1);

}  // namespace coordlm

#endif
