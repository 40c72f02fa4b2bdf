#ifndef COORDLM_GRAD_CHECK_H
#define COORDLM_GRAD_CHECK_H

#include <functional>
#include <map>
#include <string>

#include "params.h"

namespace coordlm {

struct GradCheckReport {
  double max_rel_err = 0.0;
  std::map<std::string, double> per_param;  // max relative error by tensor
};

// Central-difference check of a scalar loss against the tape's gradients.
// `loss(accumulate)` rebuilds the computation and returns the loss value;
// when accumulate is true it must also run backward so Param::grad is
// populated. Probes `samples_per_param` coordinates of each tensor (all of
// them if the tensor is smaller). Relative error per coordinate is
// |num - ana| / scale, where scale is the largest magnitude seen for that
// tensor (probed |num| + |ana|, its analytic infinity norm, or 1e-12), so
// coordinates with near-zero gradients are measured against the tensor's
// scale rather than roundoff noise.
GradCheckReport grad_check(const std::function<double(bool accumulate)>& loss, ParamStore& ps,
                           double eps, int samples_per_param, Rng& rng);

}  // namespace coordlm

#endif
