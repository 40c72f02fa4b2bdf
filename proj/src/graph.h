#ifndef COORDLM_GRAPH_H
#define COORDLM_GRAPH_H

#include <cstdint>
#include <utility>
#include <vector>

#include "params.h"

namespace coordlm {

// Handle into a Graph's tape.
struct Var {
  uint32_t id = 0;
};

// Dynamic reverse-mode tape over column vectors. One Graph per scored
// sentence or decode; values are computed eagerly at node creation so
// forward-only consumers (beam search) can read them immediately, and
// backward() replays the tape in reverse for training. Nodes are append-only,
// so persistent hypothesis states may share a graph and branch freely.
class Graph {
 public:
  Graph() { nodes_.reserve(256); }

  Var input(Vec v);                       // constant, receives no gradient
  Var zeros(int n);                       // constant zero vector
  Var param(Param* p);                    // whole n x 1 parameter as a vector
  Var lookup(Param* table, int row);      // one embedding-table row
  // b + sum_i W_i x_i
  Var affine(Param* b, const std::vector<std::pair<Param*, Var>>& terms);
  Var add(Var a, Var b);
  Var sum(const std::vector<Var>& xs);
  Var cmult(Var a, Var b);                // elementwise product
  Var scale(Var a, double k);
  Var sigmoid(Var a);
  Var tanh_(Var a);
  Var concat(const std::vector<Var>& xs);
  Var slice(Var a, int offset, int len);
  // -log2 softmax(logits restricted to `valid`)[target], a 1-dim node.
  // target must appear in valid; valid must be non-empty.
  Var pick_nll2(Var logits, const std::vector<int>& valid, int target);

  const Vec& value(Var v) const { return nodes_[v.id].value; }
  int dim(Var v) const { return static_cast<int>(nodes_[v.id].value.size()); }
  size_t size() const { return nodes_.size(); }

  // Reverse sweep from a 1-dim loss node. Parameter gradients accumulate
  // into Param::grad (caller zeroes them between steps).
  void backward(Var loss);

 private:
  enum class Op : uint8_t {
    kInput, kParam, kLookup, kAffine, kAdd, kCMult, kScale,
    kSigmoid, kTanh, kConcat, kSlice, kPickNll2,
  };

  struct Node {
    Op op;
    Vec value;
    Vec grad;                  // allocated during backward only
    std::vector<uint32_t> args;
    std::vector<Param*> ps;    // lookup/param: table; affine: bias then weights
    int i0 = 0, i1 = 0;        // slice offset/len, lookup row, pick target
    double k = 0.0;
    std::vector<int> mask;     // pick_nll2 valid set
  };

  Var push(Node n) {
    nodes_.push_back(std::move(n));
    return Var{static_cast<uint32_t>(nodes_.size() - 1)};
  }

  std::vector<Node> nodes_;
};

}  // namespace coordlm

#endif
