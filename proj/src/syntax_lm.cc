#include "syntax_lm.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "errors.h"
#include "softmax.h"

namespace coordlm {

ActionSpace::ActionSpace(std::vector<std::string> nts, Vocabulary words)
    : nts_(std::move(nts)), words_(std::move(words)) {
  if (nts_.empty()) throw std::invalid_argument("action space needs at least one nonterminal");
}

int ActionSpace::nt_id(const std::string& label) const {
  for (size_t i = 0; i < nts_.size(); ++i)
    if (nts_[i] == label) return nt_begin() + static_cast<int>(i);
  throw std::invalid_argument("unknown nonterminal label: " + label);
}

int ActionSpace::id_of(const Action& a) const {
  switch (a.kind) {
    case Action::kNt: return nt_id(a.sym);
    case Action::kGen: return gen_id(a.sym);
    default: return reduce_id();
  }
}

Action ActionSpace::action(int id) const {
  if (id == reduce_id()) return Action::reduce();
  if (is_nt(id)) return Action::nt(nts_[nt_index(id)]);
  if (is_gen(id)) return Action::gen(words_.word(word_of(id)));
  throw std::invalid_argument("action id out of range: " + std::to_string(id));
}

SyntaxLm::SyntaxLm(ActionSpace actions, StructuralLimits limits, int dim, int layers,
                   uint64_t seed)
    : actions_(std::move(actions)), limits_(limits), dim_(dim), layers_(layers) {
  if (dim < 1 || layers < 1) throw std::invalid_argument("syntax lm needs dim >= 1, layers >= 1");
  if (limits.max_open_nts < 1 || limits.max_consec_struct < 1)
    throw std::invalid_argument("structural limits must be at least 1");
  params_ = std::make_unique<ParamStore>(seed);
}

std::vector<int> SyntaxLm::valid_action_ids(const ParserState& sym,
                                            std::optional<int> word_budget) const {
  std::vector<int> ids;
  if (sym.can_reduce(limits_)) ids.push_back(actions_.reduce_id());
  if (sym.can_nt(limits_))
    for (int i = 0; i < static_cast<int>(actions_.nts().size()); ++i)
      ids.push_back(actions_.nt_begin() + i);
  if (sym.can_gen(word_budget))
    for (int w = 0; w < actions_.vocab().size(); ++w) ids.push_back(actions_.gen_begin() + w);
  return ids;
}

// ---------------------------------------------------------------- ActionLstm

namespace {
struct FlatEnc : SyntaxLm::EncState {
  LstmState lstm;
};
}  // namespace

ActionLstmLm::ActionLstmLm(ActionSpace actions, StructuralLimits limits, int dim, int layers,
                           uint64_t seed)
    : SyntaxLm(std::move(actions), limits, dim, layers, seed) {
  int a = actions_.num_actions();
  act_emb_ = params_->add("act_emb", a, dim);
  start_ = params_->add("start", dim, 1);
  lstm_ = LstmParams::make(*params_, "lstm", dim, dim, layers);
  out_w_ = params_->add("out.w", a, dim);
  out_b_ = params_->add_zeros("out.b", a, 1);
}

SyntaxLm::Enc ActionLstmLm::initial_enc(Graph& g) const {
  auto e = std::make_shared<FlatEnc>();
  e->lstm = lstm_step(g, lstm_, lstm_initial(g, lstm_), g.param(start_));
  return e;
}

SyntaxLm::Enc ActionLstmLm::advance_enc(Graph& g, const Enc& e, int action_id) const {
  const auto& fe = static_cast<const FlatEnc&>(*e);
  auto out = std::make_shared<FlatEnc>();
  out->lstm = lstm_step(g, lstm_, fe.lstm, g.lookup(act_emb_, action_id));
  return out;
}

Var ActionLstmLm::action_logits(Graph& g, const Enc& e) const {
  const auto& fe = static_cast<const FlatEnc&>(*e);
  return g.affine(out_b_, {{out_w_, fe.lstm.h_top()}});
}

// ---------------------------------------------------------------------- RNNG

RnngLm::RnngLm(ActionSpace actions, StructuralLimits limits, int dim, int layers, uint64_t seed)
    : SyntaxLm(std::move(actions), limits, dim, layers, seed) {
  int a = actions_.num_actions();
  int n = static_cast<int>(actions_.nts().size());
  word_emb_ = params_->add("word_emb", actions_.vocab().size(), dim);
  nt_emb_ = params_->add("nt_emb", n, dim);
  ntup_emb_ = params_->add("ntup_emb", n, dim);
  guard_ = params_->add("guard", dim, 1);
  stack_lstm_ = LstmParams::make(*params_, "stack", dim, dim, layers);
  comp_fwd_ = LstmParams::make(*params_, "comp_fwd", dim, dim, 1);
  comp_bwd_ = LstmParams::make(*params_, "comp_bwd", dim, dim, 1);
  comp_w_ = params_->add("comp.w", dim, 2 * dim);
  comp_b_ = params_->add_zeros("comp.b", dim, 1);
  out_w_ = params_->add("out.w", a, dim);
  out_b_ = params_->add_zeros("out.b", a, 1);
}

std::shared_ptr<const RnngLm::StackNode> RnngLm::push(Graph& g,
                                                      const std::shared_ptr<const StackNode>& below,
                                                      Var value, bool open, int nt) const {
  auto n = std::make_shared<StackNode>();
  n->below = below;
  n->lstm = lstm_step(g, stack_lstm_, below->lstm, value);
  n->value = value;
  n->open = open;
  n->nt = nt;
  n->enclosing = open ? n.get() : below->enclosing;
  return n;
}

SyntaxLm::Enc RnngLm::initial_enc(Graph& g) const {
  auto bottom = std::make_shared<StackNode>();
  bottom->below = nullptr;
  bottom->lstm = lstm_step(g, stack_lstm_, lstm_initial(g, stack_lstm_), g.param(guard_));
  bottom->value = g.param(guard_);
  bottom->open = false;
  bottom->nt = -1;
  bottom->enclosing = nullptr;
  auto e = std::make_shared<RnngEnc>();
  e->top = bottom;
  return e;
}

Var RnngLm::compose(Graph& g, int nt_index, const std::vector<Var>& children) const {
  if (children.empty()) throw std::invalid_argument("compose needs at least one child");
  Var label = g.lookup(ntup_emb_, nt_index);
  LstmState f = lstm_step(g, comp_fwd_, lstm_initial(g, comp_fwd_), label);
  for (const Var& c : children) f = lstm_step(g, comp_fwd_, f, c);
  LstmState b = lstm_step(g, comp_bwd_, lstm_initial(g, comp_bwd_), label);
  for (auto it = children.rbegin(); it != children.rend(); ++it) b = lstm_step(g, comp_bwd_, b, *it);
  return g.tanh_(g.affine(comp_b_, {{comp_w_, g.concat({f.h_top(), b.h_top()})}}));
}

SyntaxLm::Enc RnngLm::advance_enc(Graph& g, const Enc& e, int action_id) const {
  const auto& re = static_cast<const RnngEnc&>(*e);
  auto out = std::make_shared<RnngEnc>();
  if (actions_.is_gen(action_id)) {
    out->top = push(g, re.top, g.lookup(word_emb_, actions_.word_of(action_id)), false, -1);
  } else if (actions_.is_nt(action_id)) {
    int nt = actions_.nt_index(action_id);
    out->top = push(g, re.top, g.lookup(nt_emb_, nt), true, nt);
  } else {
    const StackNode* marker = re.top->enclosing;
    if (!marker) throw std::logic_error("REDUCE with no open constituent on the RNNG stack");
    std::vector<Var> children;
    for (const StackNode* n = re.top.get(); n != marker; n = n->below.get())
      children.push_back(n->value);
    std::reverse(children.begin(), children.end());
    Var composed = compose(g, marker->nt, children);
    out->top = push(g, marker->below, composed, false, -1);
  }
  return out;
}

Var RnngLm::action_logits(Graph& g, const Enc& e) const {
  const auto& re = static_cast<const RnngEnc&>(*e);
  return g.affine(out_b_, {{out_w_, re.top->lstm.h_top()}});
}

// ------------------------------------------------------------------ stepping

SyntaxState syntax_initial(const SyntaxLm& m, Graph& g) {
  return SyntaxState{ParserState{}, m.initial_enc(g)};
}

SyntaxState syntax_advance(const SyntaxLm& m, Graph& g, const SyntaxState& s, int action_id) {
  SyntaxState out;
  const ActionSpace& as = m.actions();
  if (as.is_gen(action_id))
    out.sym = s.sym.push_word();
  else if (as.is_nt(action_id))
    out.sym = s.sym.push_nt(as.nt_index(action_id));
  else
    out.sym = s.sym.reduce();
  out.enc = m.advance_enc(g, s.enc, action_id);
  return out;
}

Vec next_action_distribution(const SyntaxLm& m, Graph& g, const SyntaxState& s,
                             std::optional<int> word_budget) {
  if (s.sym.terminal()) throw DecodeError("no next action: derivation is complete");
  std::vector<int> valid = m.valid_action_ids(s.sym, word_budget);
  if (valid.empty()) throw DecodeError("no valid action under the given word budget");
  Vec lp = masked_log_probs2(g.value(m.action_logits(g, s.enc)), valid);
  Vec probs = Vec::Zero(lp.size());
  for (int id : valid) probs[id] = std::exp2(lp[id]);
  return probs;
}

namespace {

std::vector<int> tree_action_ids(const SyntaxLm& m, const Tree& tree, bool strip) {
  Tree prepared = strip ? strip_preterminals(tree) : tree;
  std::vector<Action> actions = tree_to_actions(prepared);
  std::vector<int> ids;
  ids.reserve(actions.size());
  for (const auto& a : actions) ids.push_back(m.actions().id_of(a));
  return ids;
}

}  // namespace

double joint_logprob(const SyntaxLm& m, const Tree& tree, bool strip) {
  std::vector<int> ids = tree_action_ids(m, tree, strip);
  Graph g;
  SyntaxState s = syntax_initial(m, g);
  double bits = 0.0;
  for (size_t i = 0; i < ids.size(); ++i) {
    std::vector<int> valid = m.valid_action_ids(s.sym);
    if (std::find(valid.begin(), valid.end(), ids[i]) == valid.end())
      throw std::invalid_argument("tree violates structural limits at action " +
                                  std::to_string(i) + " (" + m.actions().action(ids[i]).str() +
                                  ")");
    Vec lp = masked_log_probs2(g.value(m.action_logits(g, s.enc)), valid);
    bits -= lp[ids[i]];
    s = syntax_advance(m, g, s, ids[i]);
  }
  return bits;
}

Tree sample_tree(const SyntaxLm& m, Rng& rng, int max_actions) {
  Graph g;
  SyntaxState s = syntax_initial(m, g);
  std::vector<Action> history;
  while (!s.sym.terminal()) {
    if (static_cast<int>(history.size()) >= max_actions)
      throw DecodeError("sample did not terminate within " + std::to_string(max_actions) +
                        " actions");
    Vec probs = next_action_distribution(m, g, s);
    double u = rng.next_double();
    int chosen = -1;
    double acc = 0.0;
    for (int i = 0; i < probs.size(); ++i) {
      if (probs[i] <= 0.0) continue;
      acc += probs[i];
      chosen = i;
      if (u < acc) break;
    }
    history.push_back(m.actions().action(chosen));
    s = syntax_advance(m, g, s, chosen);
  }
  return actions_to_tree(history);
}

// ------------------------------------------------------------------ training

SyntaxLmTrainOutput train_syntax_lm(const std::vector<Tree>& bank, SyntaxLm::Variant variant,
                                    const SyntaxTrainConfig& cfg, const LogSink& log) {
  if (bank.empty()) throw std::invalid_argument("training treebank is empty");
  if (cfg.base.epochs < 1) throw std::invalid_argument("epochs must be at least 1");

  // linearize once to collect the NT inventory and word counts
  std::vector<std::vector<Action>> sequences;
  sequences.reserve(bank.size());
  std::vector<std::string> nts;
  std::vector<std::vector<std::string>> leaf_corpus;
  for (const auto& t : bank) {
    Tree prepared = cfg.strip_preterminals ? strip_preterminals(t) : t;
    sequences.push_back(tree_to_actions(prepared));
    leaf_corpus.push_back(prepared.leaves());
    for (const auto& a : sequences.back())
      if (a.kind == Action::kNt && std::find(nts.begin(), nts.end(), a.sym) == nts.end())
        nts.push_back(a.sym);
  }
  ActionSpace space(std::move(nts), Vocabulary::build(leaf_corpus, cfg.base.min_freq));

  SyntaxLmTrainOutput out;
  if (variant == SyntaxLm::Variant::kActionLstm)
    out.model = std::make_unique<ActionLstmLm>(space, cfg.limits, cfg.base.dim, cfg.base.layers,
                                               cfg.base.seed);
  else
    out.model =
        std::make_unique<RnngLm>(space, cfg.limits, cfg.base.dim, cfg.base.layers, cfg.base.seed);
  SyntaxLm& m = *out.model;

  std::vector<std::vector<int>> id_seqs;
  id_seqs.reserve(sequences.size());
  for (size_t t = 0; t < sequences.size(); ++t) {
    std::vector<int> ids;
    ids.reserve(sequences[t].size());
    ParserState sym;
    for (const auto& a : sequences[t]) {
      int id = m.actions().id_of(a);
      bool ok = m.actions().is_gen(id) ? sym.can_gen()
                : m.actions().is_nt(id) ? sym.can_nt(m.limits())
                                        : sym.can_reduce(m.limits());
      if (!ok)
        throw std::invalid_argument("tree " + std::to_string(t) +
                                    " violates structural limits at " + a.str());
      sym = m.actions().is_gen(id) ? sym.push_word()
            : m.actions().is_nt(id) ? sym.push_nt(m.actions().nt_index(id))
                                    : sym.reduce();
      ids.push_back(id);
    }
    id_seqs.push_back(std::move(ids));
  }

  std::vector<size_t> order(id_seqs.size());
  std::iota(order.begin(), order.end(), 0);
  double lr = cfg.base.lr;
  for (int epoch = 1; epoch <= cfg.base.epochs; ++epoch) {
    m.params().rng().shuffle(order);
    double total_bits = 0.0;
    long total_actions = 0;
    for (size_t idx : order) {
      const std::vector<int>& ids = id_seqs[idx];
      Graph g;
      SyntaxState s = syntax_initial(m, g);
      std::vector<Var> losses;
      losses.reserve(ids.size());
      for (int id : ids) {
        losses.push_back(g.pick_nll2(m.action_logits(g, s.enc), m.valid_action_ids(s.sym), id));
        s = syntax_advance(m, g, s, id);
      }
      Var loss = g.sum(losses);
      total_bits += g.value(loss)[0];
      total_actions += static_cast<long>(losses.size());
      m.params().zero_grads();
      g.backward(loss);
      sgd_step(m.params(), SgdConfig{lr, cfg.base.clip});
    }
    EpochStats st;
    st.epoch = epoch;
    st.perplexity = std::exp2(total_bits / static_cast<double>(total_actions));
    st.lr = lr;
    out.epochs.push_back(st);
    if (log)
      log("epoch " + std::to_string(epoch) + " lr " + std::to_string(lr) + " action_ppl " +
          std::to_string(st.perplexity));
    lr *= cfg.base.lr_decay;
  }
  return out;
}

}  // namespace coordlm
