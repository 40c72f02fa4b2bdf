#ifndef COORDLM_WORD_LM_H
#define COORDLM_WORD_LM_H

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "lstm.h"
#include "surprisal.h"
#include "vocab.h"

namespace coordlm {

using LogSink = std::function<void(const std::string&)>;

struct TrainConfig {
  int dim = 64;
  int layers = 2;
  int epochs = 5;
  double lr = 0.1;
  double lr_decay = 0.9;  // per-epoch multiplier
  double clip = 5.0;
  int min_freq = 2;
  uint64_t seed = 1;
};

struct EpochStats {
  int epoch = 0;        // 1-based
  double perplexity = 0.0;  // 2^(mean target bits), <eos> targets included
  double lr = 0.0;
};

// Word-level LSTM language model: embedding -> stacked LSTM -> softmax over
// the vocabulary, conditioning starts from <eos>. Scoring is read-only and
// safe to call from several threads at once.
class WordLm {
 public:
  WordLm(Vocabulary vocab, int dim, int layers, uint64_t seed);

  const Vocabulary& vocab() const { return vocab_; }
  int dim() const { return dim_; }
  int layers() const { return layers_; }
  ParamStore& params() { return *params_; }
  const ParamStore& params() const { return *params_; }

  struct State {
    LstmState lstm;
  };
  State initial(Graph& g) const;                           // before any token
  State advance(Graph& g, const State& s, int token) const;
  Var logits(Graph& g, const State& s) const;              // over the vocabulary

  // One entry per token; unknown words score as <unk>.
  SurprisalProfile surprisal_profile(const std::vector<std::string>& tokens) const;
  // Sum over continuation tokens of -log2 p(token | prefix so far).
  double continuation_surprisal(const std::vector<std::string>& prefix,
                                const std::vector<std::string>& continuation) const;
  // Tape-summed total of the token bits plus (optionally) the <eos> bit;
  // a second route to the same number as summing the profile.
  double sentence_nll2(const std::vector<std::string>& tokens, bool include_eos) const;

 private:
  Vocabulary vocab_;
  int dim_, layers_;
  std::unique_ptr<ParamStore> params_;
  Param* emb_;
  LstmParams lstm_;
  Param* out_w_;
  Param* out_b_;

  friend class Checkpoint;
};

struct WordLmTrainOutput {
  std::unique_ptr<WordLm> model;
  std::vector<EpochStats> epochs;
};

// Plain SGD, one sentence per update, sentence order reshuffled each epoch
// from the model's seeded stream. Deterministic: same corpus, config, and
// seed give bitwise-identical parameters. Throws std::invalid_argument on an
// empty corpus or non-positive epochs.
WordLmTrainOutput train_word_lm(const std::vector<std::vector<std::string>>& corpus,
                                const TrainConfig& cfg, const LogSink& log = nullptr);

}  // namespace coordlm

#endif
