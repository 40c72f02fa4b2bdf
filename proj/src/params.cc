#include "params.h"

#include <cmath>
#include <stdexcept>

namespace coordlm {

Param* ParamStore::add(const std::string& name, int rows, int cols) {
  Param* p = add_zeros(name, rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) p->value(r, c) = rng_.uniform(-0.1, 0.1);
  return p;
}

Param* ParamStore::add_zeros(const std::string& name, int rows, int cols) {
  if (find(name)) throw std::invalid_argument("duplicate parameter name: " + name);
  auto p = std::make_unique<Param>();
  p->name = name;
  p->value = Mat::Zero(rows, cols);
  p->grad = Mat::Zero(rows, cols);
  params_.push_back(std::move(p));
  return params_.back().get();
}

Param* ParamStore::find(const std::string& name) const {
  for (const auto& p : params_)
    if (p->name == name) return p.get();
  return nullptr;
}

void ParamStore::zero_grads() {
  for (auto& p : params_) p->grad.setZero();
}

double ParamStore::grad_norm() const {
  double sq = 0.0;
  for (const auto& p : params_) sq += p->grad.squaredNorm();
  return std::sqrt(sq);
}

void sgd_step(ParamStore& ps, const SgdConfig& cfg) {
  for (const auto& p : ps.all())
    if (!p->grad.allFinite())
      throw std::runtime_error("non-finite gradient in parameter " + p->name);
  double norm = ps.grad_norm();
  double scale = (cfg.clip > 0.0 && norm > cfg.clip) ? cfg.clip / norm : 1.0;
  for (const auto& p : ps.all()) p->value.noalias() -= (cfg.lr * scale) * p->grad;
}

}  // namespace coordlm
