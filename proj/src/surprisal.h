#ifndef COORDLM_SURPRISAL_H
#define COORDLM_SURPRISAL_H

#include <string>
#include <vector>

namespace coordlm {

// Per-token -log2 p(token | prefix) for one sentence, in reading order.
struct SurprisalProfile {
  std::vector<std::string> tokens;
  std::vector<double> bits;

  double total() const {
    double s = 0.0;
    for (double b : bits) s += b;
    return s;
  }
};

}  // namespace coordlm

#endif
