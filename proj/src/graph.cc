#include "graph.h"

#include <cmath>
#include <stdexcept>

namespace coordlm {

namespace {
constexpr double kLn2 = 0.6931471805599453;

void check_same_dim(const Vec& a, const Vec& b, const char* what) {
  if (a.size() != b.size()) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}
}  // namespace

Var Graph::input(Vec v) {
  Node n;
  n.op = Op::kInput;
  n.value = std::move(v);
  return push(std::move(n));
}

Var Graph::zeros(int d) { return input(Vec::Zero(d)); }

Var Graph::param(Param* p) {
  if (p->cols() != 1) throw std::invalid_argument("param node needs an n x 1 parameter: " + p->name);
  Node n;
  n.op = Op::kParam;
  n.value = p->value.col(0);
  n.ps = {p};
  return push(std::move(n));
}

Var Graph::lookup(Param* table, int row) {
  if (row < 0 || row >= table->rows())
    throw std::invalid_argument("lookup row out of range in " + table->name);
  Node n;
  n.op = Op::kLookup;
  n.value = table->value.row(row).transpose();
  n.ps = {table};
  n.i0 = row;
  return push(std::move(n));
}

Var Graph::affine(Param* b, const std::vector<std::pair<Param*, Var>>& terms) {
  if (b->cols() != 1) throw std::invalid_argument("affine bias must be n x 1: " + b->name);
  Node n;
  n.op = Op::kAffine;
  n.value = b->value.col(0);
  n.ps = {b};
  for (const auto& [w, x] : terms) {
    if (w->cols() != dim(x) || w->rows() != b->rows())
      throw std::invalid_argument("affine term shape mismatch for " + w->name);
    n.value.noalias() += w->value * nodes_[x.id].value;
    n.ps.push_back(w);
    n.args.push_back(x.id);
  }
  return push(std::move(n));
}

Var Graph::add(Var a, Var b) { return sum({a, b}); }

Var Graph::sum(const std::vector<Var>& xs) {
  if (xs.empty()) throw std::invalid_argument("sum of no terms");
  Node n;
  n.op = Op::kAdd;
  n.value = nodes_[xs[0].id].value;
  n.args.push_back(xs[0].id);
  for (size_t i = 1; i < xs.size(); ++i) {
    check_same_dim(n.value, nodes_[xs[i].id].value, "sum");
    n.value += nodes_[xs[i].id].value;
    n.args.push_back(xs[i].id);
  }
  return push(std::move(n));
}

Var Graph::cmult(Var a, Var b) {
  check_same_dim(nodes_[a.id].value, nodes_[b.id].value, "cmult");
  Node n;
  n.op = Op::kCMult;
  n.value = nodes_[a.id].value.cwiseProduct(nodes_[b.id].value);
  n.args = {a.id, b.id};
  return push(std::move(n));
}

Var Graph::scale(Var a, double k) {
  Node n;
  n.op = Op::kScale;
  n.value = k * nodes_[a.id].value;
  n.args = {a.id};
  n.k = k;
  return push(std::move(n));
}

Var Graph::sigmoid(Var a) {
  Node n;
  n.op = Op::kSigmoid;
  n.value = nodes_[a.id].value.unaryExpr([](double x) { return 1.0 / (1.0 + std::exp(-x)); });
  n.args = {a.id};
  return push(std::move(n));
}

Var Graph::tanh_(Var a) {
  Node n;
  n.op = Op::kTanh;
  n.value = nodes_[a.id].value.array().tanh().matrix();
  n.args = {a.id};
  return push(std::move(n));
}

Var Graph::concat(const std::vector<Var>& xs) {
  if (xs.empty()) throw std::invalid_argument("concat of no vectors");
  int total = 0;
  for (Var x : xs) total += dim(x);
  Node n;
  n.op = Op::kConcat;
  n.value.resize(total);
  int at = 0;
  for (Var x : xs) {
    n.value.segment(at, dim(x)) = nodes_[x.id].value;
    at += dim(x);
    n.args.push_back(x.id);
  }
  return push(std::move(n));
}

Var Graph::slice(Var a, int offset, int len) {
  if (offset < 0 || len <= 0 || offset + len > dim(a))
    throw std::invalid_argument("slice out of range");
  Node n;
  n.op = Op::kSlice;
  n.value = nodes_[a.id].value.segment(offset, len);
  n.args = {a.id};
  n.i0 = offset;
  n.i1 = len;
  return push(std::move(n));
}

Var Graph::pick_nll2(Var logits, const std::vector<int>& valid, int target) {
  if (valid.empty()) throw std::invalid_argument("pick_nll2: empty valid set");
  const Vec& z = nodes_[logits.id].value;
  bool target_ok = false;
  double m = -std::numeric_limits<double>::infinity();
  for (int j : valid) {
    if (j < 0 || j >= z.size()) throw std::invalid_argument("pick_nll2: valid id out of range");
    if (j == target) target_ok = true;
    m = std::max(m, z[j]);
  }
  if (!target_ok) throw std::invalid_argument("pick_nll2: target not in valid set");
  double acc = 0.0;
  for (int j : valid) acc += std::exp(z[j] - m);
  double lse = m + std::log(acc);
  Node n;
  n.op = Op::kPickNll2;
  n.value = Vec::Constant(1, (lse - z[target]) / kLn2);
  n.args = {logits.id};
  n.i0 = target;
  n.mask = valid;
  return push(std::move(n));
}

void Graph::backward(Var loss) {
  Node& top = nodes_[loss.id];
  if (top.value.size() != 1) throw std::invalid_argument("backward needs a 1-dim loss node");
  for (auto& n : nodes_) n.grad.resize(0);
  top.grad = Vec::Ones(1);
  for (uint32_t idx = loss.id + 1; idx-- > 0;) {
    Node& n = nodes_[idx];
    if (n.grad.size() == 0) continue;  // not on any path to the loss
    const Vec& g = n.grad;
    auto arg_grad = [&](int i) -> Vec& {
      Node& a = nodes_[n.args[i]];
      if (a.grad.size() == 0) a.grad = Vec::Zero(a.value.size());
      return a.grad;
    };
    switch (n.op) {
      case Op::kInput:
        break;
      case Op::kParam:
        n.ps[0]->grad.col(0) += g;
        break;
      case Op::kLookup:
        n.ps[0]->grad.row(n.i0) += g.transpose();
        break;
      case Op::kAffine: {
        n.ps[0]->grad.col(0) += g;
        for (size_t i = 0; i < n.args.size(); ++i) {
          const Vec& x = nodes_[n.args[i]].value;
          n.ps[i + 1]->grad.noalias() += g * x.transpose();
          arg_grad(static_cast<int>(i)).noalias() += n.ps[i + 1]->value.transpose() * g;
        }
        break;
      }
      case Op::kAdd:
        for (size_t i = 0; i < n.args.size(); ++i) arg_grad(static_cast<int>(i)) += g;
        break;
      case Op::kCMult:
        arg_grad(0) += g.cwiseProduct(nodes_[n.args[1]].value);
        arg_grad(1) += g.cwiseProduct(nodes_[n.args[0]].value);
        break;
      case Op::kScale:
        arg_grad(0) += n.k * g;
        break;
      case Op::kSigmoid: {
        const Vec& y = n.value;
        arg_grad(0) += g.cwiseProduct(y.cwiseProduct((1.0 - y.array()).matrix()));
        break;
      }
      case Op::kTanh: {
        const Vec& y = n.value;
        arg_grad(0) += g.cwiseProduct((1.0 - y.array().square()).matrix());
        break;
      }
      case Op::kConcat: {
        int at = 0;
        for (size_t i = 0; i < n.args.size(); ++i) {
          int len = static_cast<int>(nodes_[n.args[i]].value.size());
          arg_grad(static_cast<int>(i)) += g.segment(at, len);
          at += len;
        }
        break;
      }
      case Op::kSlice:
        arg_grad(0).segment(n.i0, n.i1) += g;
        break;
      case Op::kPickNll2: {
        const Vec& z = nodes_[n.args[0]].value;
        double m = -std::numeric_limits<double>::infinity();
        for (int j : n.mask) m = std::max(m, z[j]);
        double acc = 0.0;
        for (int j : n.mask) acc += std::exp(z[j] - m);
        Vec& zg = arg_grad(0);
        double up = g[0] / kLn2;
        for (int j : n.mask) zg[j] += up * (std::exp(z[j] - m) / acc - (j == n.i0 ? 1.0 : 0.0));
        break;
      }
    }
  }
}

}  // namespace coordlm
