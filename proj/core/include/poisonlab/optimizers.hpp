#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "poisonlab/models.hpp"
#include "poisonlab/tensor.hpp"

namespace poisonlab {

struct OptimizerSpec {
  enum class Kind { Sgd, Adam } kind{Kind::Sgd};
  double lr{0.1};
  double beta1{0.9};
  double beta2{0.999};
  double eps{1e-8};

  static OptimizerSpec sgd(double lr) { return {Kind::Sgd, lr, 0.0, 0.0, 0.0}; }
  static OptimizerSpec adam(double lr, double beta1 = 0.9, double beta2 = 0.999,
                            double eps = 1e-8) {
    return {Kind::Adam, lr, beta1, beta2, eps};
  }
};

struct OptimizerState {
  OptimizerSpec spec;
  int64_t t{0};
  std::vector<double> m;  // first moment (Adam)
  std::vector<double> v;  // second moment (Adam)

  explicit OptimizerState(OptimizerSpec s) : spec(s) {}
};

// One update on a flat parameter vector.
// SGD: theta <- theta - lr * g.
// Adam: standard update with bias correction, t incremented first.
void optimizer_step_flat(OptimizerState& state, std::span<double> params,
                         std::span<const double> grad);

// Flatten the model parameters, update, write back. The flatten round trip
// is bit-exact, so this is equivalent to per-tensor updates.
void optimizer_step(OptimizerState& state, ModelState& model, const GradientVector& grad);

}  // namespace poisonlab
