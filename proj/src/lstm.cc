#include "lstm.h"

#include <stdexcept>

namespace coordlm {

LstmParams LstmParams::make(ParamStore& ps, const std::string& prefix, int input_dim, int dim,
                            int num_layers) {
  if (num_layers < 1) throw std::invalid_argument("lstm needs at least one layer");
  LstmParams p;
  p.input_dim = input_dim;
  p.dim = dim;
  for (int l = 0; l < num_layers; ++l) {
    int in = (l == 0) ? input_dim : dim;
    std::string base = prefix + ".l" + std::to_string(l);
    Layer layer;
    layer.w_ih = ps.add(base + ".w_ih", 4 * dim, in);
    layer.w_hh = ps.add(base + ".w_hh", 4 * dim, dim);
    layer.b = ps.add_zeros(base + ".b", 4 * dim, 1);
    layer.b->value.block(dim, 0, dim, 1).setConstant(1.0);  // forget gate bias
    p.layers.push_back(layer);
  }
  return p;
}

LstmState lstm_initial(Graph& g, const LstmParams& p) {
  LstmState s;
  for (size_t l = 0; l < p.layers.size(); ++l) s.hc.push_back({g.zeros(p.dim), g.zeros(p.dim)});
  return s;
}

LstmState lstm_step(Graph& g, const LstmParams& p, const LstmState& prev, Var x) {
  if (g.dim(x) != p.input_dim) throw std::invalid_argument("lstm_step: input dimension mismatch");
  if (prev.hc.size() != p.layers.size())
    throw std::invalid_argument("lstm_step: state layer count mismatch");
  LstmState next;
  Var below = x;
  int d = p.dim;
  for (size_t l = 0; l < p.layers.size(); ++l) {
    const auto& L = p.layers[l];
    Var h = prev.hc[l][0], c = prev.hc[l][1];
    Var z = g.affine(L.b, {{L.w_ih, below}, {L.w_hh, h}});
    Var i = g.sigmoid(g.slice(z, 0, d));
    Var f = g.sigmoid(g.slice(z, d, d));
    Var o = g.sigmoid(g.slice(z, 2 * d, d));
    Var u = g.tanh_(g.slice(z, 3 * d, d));
    Var c2 = g.add(g.cmult(f, c), g.cmult(i, u));
    Var h2 = g.cmult(o, g.tanh_(c2));
    next.hc.push_back({h2, c2});
    below = h2;
  }
  return next;
}

}  // namespace coordlm
