#include "softmax.h"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace coordlm {

namespace {
constexpr double kLn2 = 0.6931471805599453;
}

XentResult softmax_xent(const Vec& logits, int target) {
  if (logits.size() == 0) throw std::invalid_argument("softmax_xent: empty logits");
  if (target < 0 || target >= logits.size())
    throw std::invalid_argument("softmax_xent: target out of range");
  double m = logits.maxCoeff();
  Vec e = (logits.array() - m).exp();
  double z = e.sum();
  XentResult r;
  r.loss_bits = (m + std::log(z) - logits[target]) / kLn2;
  r.grad = e / (z * kLn2);
  r.grad[target] -= 1.0 / kLn2;
  return r;
}

Vec masked_log_probs2(const Vec& logits, const std::vector<int>& valid) {
  if (valid.empty()) throw std::invalid_argument("masked_log_probs2: empty valid set");
  double m = -std::numeric_limits<double>::infinity();
  for (int j : valid) m = std::max(m, logits[j]);
  double acc = 0.0;
  for (int j : valid) acc += std::exp(logits[j] - m);
  double lse = m + std::log(acc);
  Vec out = Vec::Constant(logits.size(), -std::numeric_limits<double>::infinity());
  for (int j : valid) out[j] = (logits[j] - lse) / kLn2;
  return out;
}

double log2_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  double m = std::max(a, b);
  return m + std::log2(std::exp2(a - m) + std::exp2(b - m));
}

}  // namespace coordlm
