#ifndef COORDLM_SOFTMAX_H
#define COORDLM_SOFTMAX_H

#include <vector>

#include "params.h"

namespace coordlm {

struct XentResult {
  double loss_bits;  // -log2 softmax(logits)[target]
  Vec grad;          // d loss_bits / d logits = (softmax - onehot) / ln 2
};

// Base-2 cross entropy of one target under a full softmax, log-sum-exp
// stabilized. Throws std::invalid_argument on a bad target index.
XentResult softmax_xent(const Vec& logits, int target);

// log2 of the softmax restricted to `valid`; entries outside `valid` are
// -infinity. Forward-only companion of Graph::pick_nll2 for beam search and
// next-action distributions.
Vec masked_log_probs2(const Vec& logits, const std::vector<int>& valid);

// log2(2^a + 2^b), max-shifted
double log2_add(double a, double b);

}  // namespace coordlm

#endif
