#include "beam.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "errors.h"
#include "softmax.h"

namespace coordlm {

void BeamConfig::validate() const {
  if (action_beam < 1 || word_beam < 1)
    throw std::invalid_argument("beam widths must be at least 1");
  if (word_beam > action_beam)
    throw std::invalid_argument("word_beam must not exceed action_beam");
  if (fast_track < 0 || fast_track > word_beam)
    throw std::invalid_argument("fast_track must lie in [0, word_beam]");
  if (struct_budget < 1) throw std::invalid_argument("struct_budget must be at least 1");
}

namespace {

struct Hyp {
  SyntaxState state;
  double logp2 = 0.0;
  std::vector<int> history;
};

// candidate = parent hypothesis extended by one scored action
struct Cand {
  double score;
  const Hyp* parent;
  int action;
  bool advances_word;
};

// score descending, then lexicographically smaller extended action history
// (parent history plus the new action) first; a strict total order, so
// sorting is deterministic.
int cand_seq_at(const Cand& c, size_t i) {
  return i < c.parent->history.size() ? c.parent->history[i] : c.action;
}

bool cand_before(const Cand& a, const Cand& b) {
  if (a.score != b.score) return a.score > b.score;
  size_t la = a.parent->history.size() + 1, lb = b.parent->history.size() + 1;
  for (size_t i = 0; i < std::min(la, lb); ++i) {
    int x = cand_seq_at(a, i), y = cand_seq_at(b, i);
    if (x != y) return x < y;
  }
  return la < lb;
}

bool hyp_before(const Hyp& a, const Hyp& b) {
  if (a.logp2 != b.logp2) return a.logp2 > b.logp2;
  return a.history < b.history;
}

Hyp extend(const SyntaxLm& m, Graph& g, const Cand& c) {
  Hyp h;
  h.state = syntax_advance(m, g, c.parent->state, c.action);
  h.logp2 = c.score;
  h.history = c.parent->history;
  h.history.push_back(c.action);
  return h;
}

double mass_of(const std::vector<Hyp>& hyps) {
  double best = -std::numeric_limits<double>::infinity();
  for (const Hyp& h : hyps) best = std::max(best, h.logp2);
  double acc = 0.0;
  for (const Hyp& h : hyps) acc += std::exp2(h.logp2 - best);
  return best + std::log2(acc);
}

}  // namespace

DecodeResult word_sync_beam(const SyntaxLm& m, const std::vector<std::string>& tokens,
                            const BeamConfig& cfg) {
  cfg.validate();
  if (tokens.empty()) throw std::invalid_argument("cannot decode an empty sentence");

  Graph g;
  std::vector<Hyp> beam;
  beam.push_back(Hyp{syntax_initial(m, g), 0.0, {}});

  DecodeResult result;
  result.profile.tokens = tokens;
  result.mass_bits.push_back(0.0);

  for (size_t i = 0; i < tokens.size(); ++i) {
    const int gen_action = m.actions().gen_id(tokens[i]);
    std::vector<Hyp> frontier = std::move(beam);
    std::vector<Hyp> word_beam;

    for (int round = 0; round <= cfg.struct_budget; ++round) {
      if (frontier.empty() || static_cast<int>(word_beam.size()) >= cfg.action_beam) break;
      const bool last_round = round == cfg.struct_budget;

      std::vector<Cand> fringe;
      for (const Hyp& h : frontier) {
        if (h.state.sym.terminal()) continue;  // finished tree: cannot emit this word
        std::vector<int> valid = m.valid_action_ids(h.state.sym);
        Vec lp = masked_log_probs2(g.value(m.action_logits(g, h.state.enc)), valid);
        for (int a : valid) {
          bool gen = m.actions().is_gen(a);
          if (gen && a != gen_action) continue;  // other words leave the prefix
          if (!gen && last_round) continue;      // structural budget spent
          fringe.push_back(Cand{h.logp2 + lp[a], &h, a, gen});
        }
      }
      if (fringe.empty()) break;
      std::sort(fringe.begin(), fringe.end(), cand_before);

      const size_t cut = std::min(fringe.size(), static_cast<size_t>(cfg.action_beam));
      std::vector<Hyp> next_frontier;
      int fast_tracked = 0;
      for (size_t k = 0; k < fringe.size(); ++k) {
        const Cand& c = fringe[k];
        if (k < cut) {
          if (c.advances_word)
            word_beam.push_back(extend(m, g, c));
          else
            next_frontier.push_back(extend(m, g, c));
        } else if (c.advances_word && fast_tracked < cfg.fast_track) {
          word_beam.push_back(extend(m, g, c));
          ++fast_tracked;
        }
      }
      frontier = std::move(next_frontier);
    }

    if (word_beam.empty())
      throw DecodeError("beam died at position " + std::to_string(i + 1) + " (token \"" +
                        tokens[i] + "\")");
    std::sort(word_beam.begin(), word_beam.end(), hyp_before);
    if (static_cast<int>(word_beam.size()) > cfg.word_beam) word_beam.resize(cfg.word_beam);

    double mass = mass_of(word_beam);
    result.profile.bits.push_back(result.mass_bits.back() - mass);
    result.mass_bits.push_back(mass);
    beam = std::move(word_beam);
  }
  return result;
}

DecodeResult exact_marginal(const SyntaxLm& m, const std::vector<std::string>& tokens,
                            int struct_budget, long max_hypotheses) {
  if (tokens.empty()) throw std::invalid_argument("cannot decode an empty sentence");
  if (struct_budget < 1) throw std::invalid_argument("struct_budget must be at least 1");

  Graph g;
  std::vector<Hyp> beam;
  beam.push_back(Hyp{syntax_initial(m, g), 0.0, {}});
  long expanded = 0;

  DecodeResult result;
  result.profile.tokens = tokens;
  result.mass_bits.push_back(0.0);

  auto bump = [&](size_t at) {
    if (++expanded > max_hypotheses)
      throw DecodeError("hypothesis explosion (more than " + std::to_string(max_hypotheses) +
                        " states) at position " + std::to_string(at));
  };

  for (size_t i = 0; i < tokens.size(); ++i) {
    const int gen_action = m.actions().gen_id(tokens[i]);
    std::vector<Hyp> frontier = std::move(beam);
    std::vector<Hyp> advanced;

    for (int round = 0; round <= struct_budget && !frontier.empty(); ++round) {
      const bool last_round = round == struct_budget;
      std::vector<Hyp> next_frontier;
      for (const Hyp& h : frontier) {
        if (h.state.sym.terminal()) continue;
        std::vector<int> valid = m.valid_action_ids(h.state.sym);
        Vec lp = masked_log_probs2(g.value(m.action_logits(g, h.state.enc)), valid);
        for (int a : valid) {
          bool gen = m.actions().is_gen(a);
          if (gen && a != gen_action) continue;
          if (!gen && last_round) continue;
          bump(i + 1);
          Cand c{h.logp2 + lp[a], &h, a, gen};
          (gen ? advanced : next_frontier).push_back(extend(m, g, c));
        }
      }
      frontier = std::move(next_frontier);
    }

    if (advanced.empty())
      throw DecodeError("no derivation reaches position " + std::to_string(i + 1) + " (token \"" +
                        tokens[i] + "\")");
    double mass = mass_of(advanced);
    result.profile.bits.push_back(result.mass_bits.back() - mass);
    result.mass_bits.push_back(mass);
    beam = std::move(advanced);
  }

  // terminated completions: only REDUCE chains can close a tree with no
  // further words, and consec_struct masking bounds their length
  double terminal = -std::numeric_limits<double>::infinity();
  std::vector<Hyp> frontier = std::move(beam);
  while (!frontier.empty()) {
    std::vector<Hyp> next;
    for (const Hyp& h : frontier) {
      if (h.state.sym.terminal()) {
        terminal = log2_add(terminal, h.logp2);
        continue;
      }
      if (!h.state.sym.can_reduce(m.limits())) continue;
      std::vector<int> valid = m.valid_action_ids(h.state.sym);
      Vec lp = masked_log_probs2(g.value(m.action_logits(g, h.state.enc)), valid);
      bump(tokens.size());
      Cand c{h.logp2 + lp[m.actions().reduce_id()], &h, m.actions().reduce_id(), false};
      next.push_back(extend(m, g, c));
    }
    frontier = std::move(next);
  }
  result.terminal_mass_bits = terminal;
  result.has_terminal_mass = true;
  return result;
}

}  // namespace coordlm
