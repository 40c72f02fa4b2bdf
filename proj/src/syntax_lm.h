#ifndef COORDLM_SYNTAX_LM_H
#define COORDLM_SYNTAX_LM_H

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "actions.h"
#include "lstm.h"
#include "parser_state.h"
#include "vocab.h"
#include "word_lm.h"  // TrainConfig, EpochStats, LogSink

namespace coordlm {

// Indexed action inventory: id 0 is REDUCE, then one id per nonterminal
// label, then one GEN id per vocabulary word (including <unk> and the unused
// <eos> slot).
class ActionSpace {
 public:
  ActionSpace(std::vector<std::string> nts, Vocabulary words);

  int num_actions() const { return 1 + static_cast<int>(nts_.size()) + words_.size(); }
  int reduce_id() const { return 0; }
  int nt_begin() const { return 1; }
  int gen_begin() const { return 1 + static_cast<int>(nts_.size()); }

  bool is_nt(int a) const { return a >= nt_begin() && a < gen_begin(); }
  bool is_gen(int a) const { return a >= gen_begin() && a < num_actions(); }
  int nt_index(int a) const { return a - nt_begin(); }     // into nts()
  int word_of(int a) const { return a - gen_begin(); }     // vocabulary id

  int nt_id(const std::string& label) const;               // throws on unknown label
  int gen_id(const std::string& word) const { return gen_begin() + words_.id(word); }
  int id_of(const Action& a) const;                        // unknown words -> GEN(<unk>)
  Action action(int id) const;

  const std::vector<std::string>& nts() const { return nts_; }
  const Vocabulary& vocab() const { return words_; }

 private:
  std::vector<std::string> nts_;
  Vocabulary words_;
};

// Generative syntactic LM over masked action sequences. Both variants share
// the stepping interface; encoder states are persistent values inside a
// caller-owned Graph, so search hypotheses fork without copying.
class SyntaxLm {
 public:
  enum class Variant { kActionLstm, kRnng };

  virtual ~SyntaxLm() = default;

  virtual Variant variant() const = 0;
  const ActionSpace& actions() const { return actions_; }
  const StructuralLimits& limits() const { return limits_; }
  ParamStore& params() { return *params_; }
  const ParamStore& params() const { return *params_; }
  int dim() const { return dim_; }
  int layers() const { return layers_; }

  struct EncState {
    virtual ~EncState() = default;
  };
  using Enc = std::shared_ptr<const EncState>;

  virtual Enc initial_enc(Graph& g) const = 0;
  virtual Enc advance_enc(Graph& g, const Enc& e, int action_id) const = 0;
  virtual Var action_logits(Graph& g, const Enc& e) const = 0;

  // ids of actions valid in `sym` under this model's limits
  std::vector<int> valid_action_ids(const ParserState& sym,
                                    std::optional<int> word_budget = std::nullopt) const;

 protected:
  SyntaxLm(ActionSpace actions, StructuralLimits limits, int dim, int layers, uint64_t seed);

  ActionSpace actions_;
  StructuralLimits limits_;
  int dim_, layers_;
  std::unique_ptr<ParamStore> params_;
};

// Flat LSTM over the raw action history (the linearized-tree sequence LM);
// architecturally a word LM whose tokens are actions.
class ActionLstmLm : public SyntaxLm {
 public:
  ActionLstmLm(ActionSpace actions, StructuralLimits limits, int dim, int layers, uint64_t seed);

  Variant variant() const override { return Variant::kActionLstm; }
  Enc initial_enc(Graph& g) const override;
  Enc advance_enc(Graph& g, const Enc& e, int action_id) const override;
  Var action_logits(Graph& g, const Enc& e) const override;

 private:
  Param* act_emb_;   // one row per action id
  Param* start_;     // start-of-derivation input
  LstmParams lstm_;
  Param* out_w_;
  Param* out_b_;

  friend class Checkpoint;
};

// Stack LSTM over constituent build-up: GEN pushes a word embedding, NT
// pushes an open-constituent embedding, REDUCE pops the finished span and
// pushes its bidirectional-LSTM composition.
class RnngLm : public SyntaxLm {
 public:
  RnngLm(ActionSpace actions, StructuralLimits limits, int dim, int layers, uint64_t seed);

  Variant variant() const override { return Variant::kRnng; }
  Enc initial_enc(Graph& g) const override;
  Enc advance_enc(Graph& g, const Enc& e, int action_id) const override;
  Var action_logits(Graph& g, const Enc& e) const override;

  // tanh(W [fwd(label, kids...); bwd(label, kids reversed...)] + b);
  // exposed for direct composition tests.
  Var compose(Graph& g, int nt_index, const std::vector<Var>& children) const;

 private:
  struct StackNode {
    std::shared_ptr<const StackNode> below;
    LstmState lstm;  // stack encoding after this push
    Var value;
    bool open;
    int nt;  // nt index for open markers, -1 otherwise
    const StackNode* enclosing;
  };
  struct RnngEnc : EncState {
    std::shared_ptr<const StackNode> top;
  };

  std::shared_ptr<const StackNode> push(Graph& g, const std::shared_ptr<const StackNode>& below,
                                        Var value, bool open, int nt) const;

  Param* word_emb_;
  Param* nt_emb_;     // open-marker embeddings
  Param* ntup_emb_;   // composition label embeddings
  Param* guard_;      // stack bottom
  LstmParams stack_lstm_;
  LstmParams comp_fwd_, comp_bwd_;
  Param* comp_w_;
  Param* comp_b_;
  Param* out_w_;
  Param* out_b_;

  friend class Checkpoint;
};

// Encoder state plus masking state; the unit hypotheses and scorers step.
struct SyntaxState {
  ParserState sym;
  SyntaxLm::Enc enc;
};

SyntaxState syntax_initial(const SyntaxLm& m, Graph& g);
SyntaxState syntax_advance(const SyntaxLm& m, Graph& g, const SyntaxState& s, int action_id);

// Probability vector over the full action space (zeros at masked ids), a
// masked softmax of the current logits. Throws DecodeError on a terminal
// state. word_budget masks GEN when the state has generated that many words.
Vec next_action_distribution(const SyntaxLm& m, Graph& g, const SyntaxState& s,
                             std::optional<int> word_budget = std::nullopt);

// -log2 P(action sequence of the tree) under masked stepping. OOV words map
// to GEN(<unk>). Throws std::invalid_argument if the gold sequence violates
// the model's structural limits.
double joint_logprob(const SyntaxLm& m, const Tree& tree, bool strip = true);

// Ancestral sampling under masking. Guaranteed valid; throws DecodeError if
// max_actions is hit before the root closes.
Tree sample_tree(const SyntaxLm& m, Rng& rng, int max_actions = 100000);

struct SyntaxTrainConfig {
  TrainConfig base;
  StructuralLimits limits;
  bool strip_preterminals = true;
};

struct SyntaxLmTrainOutput {
  std::unique_ptr<SyntaxLm> model;
  std::vector<EpochStats> epochs;  // perplexity is per action
};

// Teacher-forced masked NLL over linearized trees, SGD per tree. NT inventory
// and vocabulary come from the bank (first-appearance order; words under
// min_freq become <unk>). Deterministic per (bank, config, seed).
SyntaxLmTrainOutput train_syntax_lm(const std::vector<Tree>& bank, SyntaxLm::Variant variant,
                                    const SyntaxTrainConfig& cfg, const LogSink& log = nullptr);

}  // namespace coordlm

#endif
