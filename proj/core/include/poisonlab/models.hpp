#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "poisonlab/autodiff.hpp"
#include "poisonlab/datasets.hpp"
#include "poisonlab/tensor.hpp"

namespace poisonlab {

enum class Architecture { PaperCnn, Mlp };

struct ModelConfig {
  Architecture arch{Architecture::Mlp};
  std::vector<int64_t> hidden;       // Mlp hidden layer sizes
  std::vector<int64_t> input_shape;  // PaperCnn: {C,H,W}; Mlp: flattened
  int64_t classes{2};
  uint64_t init_seed{0};
};

struct ParamSpec {
  std::string name;
  std::vector<int64_t> shape;
  int64_t fan_in{0};  // 0 for biases (initialized to zero)
};

// Canonical parameter order: layer declaration order, weight before bias.
std::vector<ParamSpec> parameter_specs(const ModelConfig& config);

struct ModelState {
  ModelConfig config;
  std::vector<Tensor> params;  // aligned with parameter_specs(config)

  int64_t dim() const;
  std::vector<std::vector<int64_t>> param_shapes() const;
};

// Weights uniform in [-a, a] with a = sqrt(6 / fan_in), biases zero.
// Deterministic given config.init_seed.
ModelState init_model(const ModelConfig& config);

struct ModelBinding {
  std::vector<ValId> params;
  ValId input{-1};
};

ModelBinding bind_model(Tape& tape, const ModelState& state, const Tensor& input,
                        bool params_require_grad, bool input_requires_grad);
ValId model_logits(Tape& tape, const ModelConfig& config, const ModelBinding& binding);

struct SampleGradient {
  GradientVector grad;
  double loss{0.0};
};

// Exact gradient of the loss on one example, parameters flattened in
// canonical order.
SampleGradient sample_gradient(const ModelState& state, const LabeledExample& example);
std::vector<SampleGradient> per_sample_gradients(const ModelState& state,
                                                 std::span<const LabeledExample> batch);

// Mean of per-sample gradients accumulated in sample-index order.
GradientVector mean_of(std::span<const SampleGradient> grads);

struct EvalResult {
  double accuracy{0.0};
  double mean_loss{0.0};
};

// Accuracy by argmax with ties broken toward the lowest class index.
EvalResult evaluate(const ModelState& state, std::span<const LabeledExample> dataset);

}  // namespace poisonlab
