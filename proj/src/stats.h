#ifndef COORDLM_STATS_H
#define COORDLM_STATS_H

#include <vector>

namespace coordlm {

// Regularized incomplete beta function I_x(a, b), continued-fraction form.
double incomplete_beta(double a, double b, double x);

// Inverse CDF of Student's t with df degrees of freedom, p in (0, 1).
double student_t_quantile(double p, int df);

struct MeanCi {
  int n = 0;
  double mean = 0.0;
  double lo = 0.0;  // two-sided t interval bounds; lo == hi == mean when n == 1
  double hi = 0.0;
};

// Mean with a two-sided Student-t confidence interval (sample sd, n - 1 df).
// Throws std::invalid_argument on an empty sample.
MeanCi t_interval(const std::vector<double>& xs, double level = 0.95);

}  // namespace coordlm

#endif
