#include "poisonlab/models.hpp"

#include <cmath>
#include <stdexcept>

#include "poisonlab/rng.hpp"

namespace poisonlab {

namespace {

int64_t conv_out(int64_t in, int64_t k, int64_t stride) { return (in - k) / stride + 1; }

struct CnnDims {
  int64_t c_in, h, w;
  int64_t h1, w1;  // after conv1 (5x5, stride 2)
  int64_t h2, w2;  // after conv2 (5x5, stride 2)
  int64_t flat;    // 64 * h2 * w2
};

CnnDims cnn_dims(const ModelConfig& cfg) {
  if (cfg.input_shape.size() != 3) {
    throw std::invalid_argument("PaperCnn input shape must be [C,H,W], got " +
                                shape_str(cfg.input_shape));
  }
  CnnDims d{};
  d.c_in = cfg.input_shape[0];
  d.h = cfg.input_shape[1];
  d.w = cfg.input_shape[2];
  if (d.h < 5 || d.w < 5) throw std::invalid_argument("PaperCnn input too small for 5x5 kernels");
  d.h1 = conv_out(d.h, 5, 2);
  d.w1 = conv_out(d.w, 5, 2);
  if (d.h1 < 5 || d.w1 < 5) throw std::invalid_argument("PaperCnn input too small for second conv");
  d.h2 = conv_out(d.h1, 5, 2);
  d.w2 = conv_out(d.w1, 5, 2);
  d.flat = 64 * d.h2 * d.w2;
  return d;
}

}  // namespace

std::vector<ParamSpec> parameter_specs(const ModelConfig& cfg) {
  if (cfg.classes < 2) throw std::invalid_argument("model: classes must be >= 2");
  std::vector<ParamSpec> specs;
  switch (cfg.arch) {
    case Architecture::PaperCnn: {
      const CnnDims d = cnn_dims(cfg);
      specs.push_back({"conv1.weight", {32, d.c_in, 5, 5}, d.c_in * 25});
      specs.push_back({"conv1.bias", {32}, 0});
      specs.push_back({"conv2.weight", {64, 32, 5, 5}, 32 * 25});
      specs.push_back({"conv2.bias", {64}, 0});
      specs.push_back({"fc1.weight", {512, d.flat}, d.flat});
      specs.push_back({"fc1.bias", {512}, 0});
      specs.push_back({"fc2.weight", {64, 512}, 512});
      specs.push_back({"fc2.bias", {64}, 0});
      specs.push_back({"fc3.weight", {cfg.classes, 64}, 64});
      specs.push_back({"fc3.bias", {cfg.classes}, 0});
      break;
    }
    case Architecture::Mlp: {
      int64_t prev = shape_numel(cfg.input_shape);
      int layer = 1;
      for (int64_t h : cfg.hidden) {
        if (h < 1) throw std::invalid_argument("Mlp hidden sizes must be positive");
        const std::string base = "fc" + std::to_string(layer++);
        specs.push_back({base + ".weight", {h, prev}, prev});
        specs.push_back({base + ".bias", {h}, 0});
        prev = h;
      }
      const std::string base = "fc" + std::to_string(layer);
      specs.push_back({base + ".weight", {cfg.classes, prev}, prev});
      specs.push_back({base + ".bias", {cfg.classes}, 0});
      break;
    }
  }
  return specs;
}

int64_t ModelState::dim() const {
  int64_t d = 0;
  for (const Tensor& p : params) d += p.size();
  return d;
}

std::vector<std::vector<int64_t>> ModelState::param_shapes() const {
  std::vector<std::vector<int64_t>> shapes;
  shapes.reserve(params.size());
  for (const Tensor& p : params) shapes.push_back(p.shape);
  return shapes;
}

ModelState init_model(const ModelConfig& cfg) {
  const std::vector<ParamSpec> specs = parameter_specs(cfg);
  ModelState state;
  state.config = cfg;
  state.params.reserve(specs.size());
  Rng rng(cfg.init_seed);
  for (const ParamSpec& spec : specs) {
    Tensor t = Tensor::zeros(spec.shape);
    if (spec.fan_in > 0) {
      const double a = std::sqrt(6.0 / static_cast<double>(spec.fan_in));
      for (double& v : t.data) v = rng.uniform(-a, a);
    }
    state.params.push_back(std::move(t));
  }
  return state;
}

ModelBinding bind_model(Tape& tape, const ModelState& state, const Tensor& input,
                        bool params_require_grad, bool input_requires_grad) {
  if (shape_numel(input.shape) != shape_numel(state.config.input_shape)) {
    throw std::invalid_argument("model input shape " + shape_str(input.shape) +
                                " does not match config " + shape_str(state.config.input_shape));
  }
  ModelBinding binding;
  binding.params.reserve(state.params.size());
  for (const Tensor& p : state.params) binding.params.push_back(tape.leaf(p, params_require_grad));
  binding.input = tape.leaf(input, input_requires_grad);
  return binding;
}

ValId model_logits(Tape& tape, const ModelConfig& cfg, const ModelBinding& b) {
  switch (cfg.arch) {
    case Architecture::PaperCnn: {
      const CnnDims d = cnn_dims(cfg);
      ValId x = tape.reshape(b.input, std::vector<int64_t>{d.c_in, d.h, d.w});
      x = tape.relu(tape.conv2d(x, b.params[0], b.params[1], 2));
      x = tape.relu(tape.conv2d(x, b.params[2], b.params[3], 2));
      x = tape.reshape(x, std::vector<int64_t>{d.flat});
      x = tape.relu(tape.linear(b.params[4], x, b.params[5]));
      x = tape.relu(tape.linear(b.params[6], x, b.params[7]));
      return tape.linear(b.params[8], x, b.params[9]);
    }
    case Architecture::Mlp: {
      const int64_t in = shape_numel(cfg.input_shape);
      ValId x = tape.reshape(b.input, std::vector<int64_t>{in});
      const size_t layers = b.params.size() / 2;
      for (size_t l = 0; l + 1 < layers; ++l) {
        x = tape.relu(tape.linear(b.params[2 * l], x, b.params[2 * l + 1]));
      }
      return tape.linear(b.params[2 * (layers - 1)], x, b.params[2 * layers - 1]);
    }
  }
  throw std::logic_error("model_logits: unknown architecture");
}

SampleGradient sample_gradient(const ModelState& state, const LabeledExample& example) {
  Tape tape;
  const ModelBinding b = bind_model(tape, state, example.input, true, false);
  const ValId logits = model_logits(tape, state.config, b);
  const ValId loss = tape.softmax_cross_entropy(logits, example.label);
  const std::vector<ValId> grads = tape.gradients(loss, b.params);
  std::vector<Tensor> tensors;
  tensors.reserve(grads.size());
  for (ValId g : grads) tensors.push_back(tape.value(g));
  return SampleGradient{flatten_gradients(tensors), tape.scalar_value(loss)};
}

std::vector<SampleGradient> per_sample_gradients(const ModelState& state,
                                                 std::span<const LabeledExample> batch) {
  if (batch.empty()) throw std::invalid_argument("per_sample_gradients: empty batch");
  std::vector<SampleGradient> out;
  out.reserve(batch.size());
  for (const LabeledExample& ex : batch) out.push_back(sample_gradient(state, ex));
  return out;
}

GradientVector mean_of(std::span<const SampleGradient> grads) {
  if (grads.empty()) throw std::invalid_argument("mean_of: empty gradient list");
  GradientVector acc = GradientVector::zeros(grads[0].grad.dim());
  for (const SampleGradient& g : grads) {
    for (size_t i = 0; i < acc.values.size(); ++i) acc.values[i] += g.grad.values[i];
  }
  const double inv = 1.0 / static_cast<double>(grads.size());
  for (double& v : acc.values) v *= inv;
  return acc;
}

EvalResult evaluate(const ModelState& state, std::span<const LabeledExample> dataset) {
  if (dataset.empty()) throw std::invalid_argument("evaluate: empty dataset");
  size_t correct = 0;
  double loss_sum = 0.0;
  for (const LabeledExample& ex : dataset) {
    Tape tape;
    const ModelBinding b = bind_model(tape, state, ex.input, false, false);
    const ValId logits = model_logits(tape, state.config, b);
    const Tensor& z = tape.value(logits);
    int arg = 0;
    double best = z.data[0];
    for (int64_t c = 1; c < z.size(); ++c) {
      if (z.data[static_cast<size_t>(c)] > best) {
        best = z.data[static_cast<size_t>(c)];
        arg = static_cast<int>(c);
      }
    }
    if (arg == ex.label) ++correct;
    loss_sum += tape.scalar_value(tape.softmax_cross_entropy(logits, ex.label));
  }
  return EvalResult{static_cast<double>(correct) / static_cast<double>(dataset.size()),
                    loss_sum / static_cast<double>(dataset.size())};
}

}  // namespace poisonlab
