#ifndef COORDLM_PARAMS_H
#define COORDLM_PARAMS_H

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "rng.h"

namespace coordlm {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// One named tensor plus its gradient accumulator. Vectors are stored as
// n x 1 matrices. Embedding tables are row-per-entry matrices.
struct Param {
  std::string name;
  Mat value;
  Mat grad;

  int rows() const { return static_cast<int>(value.rows()); }
  int cols() const { return static_cast<int>(value.cols()); }
};

// Owns every parameter of a model, in creation order. Creation order is the
// serialization order and the initialization order, so a (config, seed) pair
// pins every byte of the resulting model.
class ParamStore {
 public:
  explicit ParamStore(uint64_t seed) : rng_(seed) {}

  // uniform(-0.1, 0.1) entries, drawn row-major from the store's stream
  Param* add(const std::string& name, int rows, int cols);
  // all-zero tensor (biases start at zero; LSTM forget biases get +1 later)
  Param* add_zeros(const std::string& name, int rows, int cols);

  Param* find(const std::string& name) const;  // nullptr if absent

  void zero_grads();
  // L2 norm over the concatenation of all gradients
  double grad_norm() const;

  const std::vector<std::unique_ptr<Param>>& all() const { return params_; }
  Rng& rng() { return rng_; }

 private:
  std::vector<std::unique_ptr<Param>> params_;
  Rng rng_;
};

struct SgdConfig {
  double lr = 0.1;
  double clip = 5.0;  // global gradient norm ceiling
};

// One SGD update over every parameter in the store, with global-norm
// clipping. Throws std::runtime_error naming the parameter if any gradient
// entry is non-finite.
void sgd_step(ParamStore& ps, const SgdConfig& cfg);

}  // namespace coordlm

#endif
