#include "word_lm.h"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "softmax.h"

namespace coordlm {

WordLm::WordLm(Vocabulary vocab, int dim, int layers, uint64_t seed)
    : vocab_(std::move(vocab)), dim_(dim), layers_(layers) {
  if (dim < 1 || layers < 1) throw std::invalid_argument("word lm needs dim >= 1, layers >= 1");
  params_ = std::make_unique<ParamStore>(seed);
  emb_ = params_->add("emb", vocab_.size(), dim);
  lstm_ = LstmParams::make(*params_, "lstm", dim, dim, layers);
  out_w_ = params_->add("out.w", vocab_.size(), dim);
  out_b_ = params_->add_zeros("out.b", vocab_.size(), 1);
}

WordLm::State WordLm::initial(Graph& g) const { return State{lstm_initial(g, lstm_)}; }

WordLm::State WordLm::advance(Graph& g, const State& s, int token) const {
  return State{lstm_step(g, lstm_, s.lstm, g.lookup(emb_, token))};
}

Var WordLm::logits(Graph& g, const State& s) const {
  return g.affine(out_b_, {{out_w_, s.lstm.h_top()}});
}

SurprisalProfile WordLm::surprisal_profile(const std::vector<std::string>& tokens) const {
  SurprisalProfile profile;
  profile.tokens = tokens;
  Graph g;
  State s = advance(g, initial(g), Vocabulary::kEosId);
  for (const auto& tok : tokens) {
    int id = vocab_.id(tok);
    profile.bits.push_back(softmax_xent(g.value(logits(g, s)), id).loss_bits);
    s = advance(g, s, id);
  }
  return profile;
}

double WordLm::continuation_surprisal(const std::vector<std::string>& prefix,
                                      const std::vector<std::string>& continuation) const {
  if (continuation.empty()) throw std::invalid_argument("empty continuation");
  std::vector<std::string> all = prefix;
  all.insert(all.end(), continuation.begin(), continuation.end());
  SurprisalProfile p = surprisal_profile(all);
  double total = 0.0;
  for (size_t i = prefix.size(); i < p.bits.size(); ++i) total += p.bits[i];
  return total;
}

double WordLm::sentence_nll2(const std::vector<std::string>& tokens, bool include_eos) const {
  std::vector<int> ids;
  for (const auto& t : tokens) ids.push_back(vocab_.id(t));
  if (include_eos) ids.push_back(Vocabulary::kEosId);
  if (ids.empty()) throw std::invalid_argument("cannot score an empty sentence");
  std::vector<int> all_ids(vocab_.size());
  std::iota(all_ids.begin(), all_ids.end(), 0);
  Graph g;
  State s = advance(g, initial(g), Vocabulary::kEosId);
  std::vector<Var> losses;
  for (int id : ids) {
    losses.push_back(g.pick_nll2(logits(g, s), all_ids, id));
    s = advance(g, s, id);
  }
  return g.value(g.sum(losses))[0];
}

WordLmTrainOutput train_word_lm(const std::vector<std::vector<std::string>>& corpus,
                                const TrainConfig& cfg, const LogSink& log) {
  if (corpus.empty()) throw std::invalid_argument("training corpus is empty");
  if (cfg.epochs < 1) throw std::invalid_argument("epochs must be at least 1");

  WordLmTrainOutput out;
  out.model = std::make_unique<WordLm>(Vocabulary::build(corpus, cfg.min_freq), cfg.dim,
                                       cfg.layers, cfg.seed);
  WordLm& m = *out.model;
  const Vocabulary& vocab = m.vocab();

  std::vector<std::vector<int>> sentences;
  sentences.reserve(corpus.size());
  for (const auto& sent : corpus) {
    std::vector<int> ids;
    ids.reserve(sent.size());
    for (const auto& w : sent) ids.push_back(vocab.id(w));
    sentences.push_back(std::move(ids));
  }

  std::vector<int> all_ids(vocab.size());
  std::iota(all_ids.begin(), all_ids.end(), 0);
  std::vector<size_t> order(sentences.size());
  std::iota(order.begin(), order.end(), 0);

  double lr = cfg.lr;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    m.params().rng().shuffle(order);
    double total_bits = 0.0;
    long total_targets = 0;
    for (size_t idx : order) {
      const std::vector<int>& sent = sentences[idx];
      Graph g;
      WordLm::State s = m.advance(g, m.initial(g), Vocabulary::kEosId);
      std::vector<Var> losses;
      losses.reserve(sent.size() + 1);
      for (size_t i = 0; i <= sent.size(); ++i) {
        int target = (i < sent.size()) ? sent[i] : Vocabulary::kEosId;
        losses.push_back(g.pick_nll2(m.logits(g, s), all_ids, target));
        if (i < sent.size()) s = m.advance(g, s, target);
      }
      Var loss = g.sum(losses);
      total_bits += g.value(loss)[0];
      total_targets += static_cast<long>(losses.size());
      m.params().zero_grads();
      g.backward(loss);
      sgd_step(m.params(), SgdConfig{lr, cfg.clip});
    }
    EpochStats st;
    st.epoch = epoch;
    st.perplexity = std::exp2(total_bits / static_cast<double>(total_targets));
    st.lr = lr;
    out.epochs.push_back(st);
    if (log)
      log("epoch " + std::to_string(epoch) + " lr " + std::to_string(lr) + " train_ppl " +
          std::to_string(st.perplexity));
    lr *= cfg.lr_decay;
  }
  return out;
}

}  // namespace coordlm
