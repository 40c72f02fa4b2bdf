#ifndef COORDLM_LSTM_H
#define COORDLM_LSTM_H

#include <array>
#include <string>
#include <vector>

#include "graph.h"

namespace coordlm {

// Stacked LSTM parameters. Gate preactivations are packed [i; f; o; g] so
// each layer step is one affine node. Forget-gate bias rows start at +1.0.
struct LstmParams {
  struct Layer {
    Param* w_ih;  // 4d x in
    Param* w_hh;  // 4d x d
    Param* b;     // 4d
  };
  std::vector<Layer> layers;
  int input_dim = 0;
  int dim = 0;

  static LstmParams make(ParamStore& ps, const std::string& prefix, int input_dim, int dim,
                         int num_layers);
};

// Per-layer (h, c) pairs; value-immutable, so persistent stack/hypothesis
// states can share ancestors.
struct LstmState {
  std::vector<std::array<Var, 2>> hc;  // [layer][0]=h, [1]=c
  Var h_top() const { return hc.back()[0]; }
};

LstmState lstm_initial(Graph& g, const LstmParams& p);  // all-zero h and c
// One step of the stack: layer l consumes the layer below's new h.
// Throws std::invalid_argument if x's dimension is not p.input_dim.
LstmState lstm_step(Graph& g, const LstmParams& p, const LstmState& prev, Var x);

}  // namespace coordlm

#endif
