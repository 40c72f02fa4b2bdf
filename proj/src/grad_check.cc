#include "grad_check.h"

#include <algorithm>
#include <cmath>
#include <vector>

namespace coordlm {

GradCheckReport grad_check(const std::function<double(bool)>& loss, ParamStore& ps, double eps,
                           int samples_per_param, Rng& rng) {
  ps.zero_grads();
  loss(true);

  GradCheckReport report;
  for (const auto& p : ps.all()) {
    int total = p->rows() * p->cols();
    std::vector<int> coords;
    if (total <= samples_per_param) {
      for (int i = 0; i < total; ++i) coords.push_back(i);
    } else {
      for (int i = 0; i < samples_per_param; ++i)
        coords.push_back(static_cast<int>(rng.below(total)));
    }
    // judge disagreements against the tensor's gradient scale: coordinates
    // whose true gradient sits at the finite-difference noise floor would
    // otherwise report huge errors despite near-perfect absolute agreement
    double scale = 1e-12;
    for (int r = 0; r < p->rows(); ++r)
      for (int c = 0; c < p->cols(); ++c) scale = std::max(scale, std::abs(p->grad(r, c)));
    std::vector<std::pair<double, double>> probes;
    for (int flat : coords) {
      int r = flat / p->cols(), c = flat % p->cols();
      double saved = p->value(r, c);
      p->value(r, c) = saved + eps;
      double up = loss(false);
      p->value(r, c) = saved - eps;
      double dn = loss(false);
      p->value(r, c) = saved;
      double num = (up - dn) / (2.0 * eps);
      double ana = p->grad(r, c);
      probes.emplace_back(num, ana);
      scale = std::max(scale, std::abs(num) + std::abs(ana));
    }
    double worst = 0.0;
    for (const auto& [num, ana] : probes) worst = std::max(worst, std::abs(num - ana) / scale);
    report.per_param[p->name] = worst;
    report.max_rel_err = std::max(report.max_rel_err, worst);
  }
  return report;
}

}  // namespace coordlm
