#include "poisonlab/tensor.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace poisonlab {

Tensor::Tensor(std::vector<int64_t> s, std::vector<double> d)
    : shape(std::move(s)), data(std::move(d)) {
  if (shape_numel(shape) != static_cast<int64_t>(data.size())) {
    throw std::invalid_argument("Tensor: shape " + shape_str(shape) + " does not match data size " +
                                std::to_string(data.size()));
  }
}

Tensor Tensor::zeros(std::vector<int64_t> shape) {
  const int64_t n = shape_numel(shape);
  return Tensor(std::move(shape), std::vector<double>(static_cast<size_t>(n), 0.0));
}

Tensor Tensor::full(std::vector<int64_t> shape, double value) {
  const int64_t n = shape_numel(shape);
  return Tensor(std::move(shape), std::vector<double>(static_cast<size_t>(n), value));
}

Tensor Tensor::scalar(double value) { return Tensor({1}, {value}); }

Tensor Tensor::vector1d(std::vector<double> values) {
  const int64_t n = static_cast<int64_t>(values.size());
  return Tensor({n}, std::move(values));
}

bool Tensor::all_finite() const {
  for (double v : data) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

int64_t shape_numel(std::span<const int64_t> shape) {
  int64_t n = 1;
  for (int64_t d : shape) {
    if (d <= 0) throw std::invalid_argument("shape dimensions must be positive, got " + shape_str(shape));
    n *= d;
  }
  return n;
}

std::string shape_str(std::span<const int64_t> shape) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) os << "x";
    os << shape[i];
  }
  os << "]";
  return os.str();
}

bool GradientVector::all_finite() const {
  for (double v : values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

namespace {
void check_same_dim(const GradientVector& a, const GradientVector& b, const char* op) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument(std::string(op) + ": dimension mismatch " + std::to_string(a.dim()) +
                                " vs " + std::to_string(b.dim()));
  }
}
}  // namespace

double dot(const GradientVector& a, const GradientVector& b) {
  check_same_dim(a, b, "dot");
  double s = 0.0;
  for (size_t i = 0; i < a.values.size(); ++i) s += a.values[i] * b.values[i];
  return s;
}

double norm(const GradientVector& a) { return std::sqrt(dot(a, a)); }

double distance(const GradientVector& a, const GradientVector& b) {
  check_same_dim(a, b, "distance");
  double s = 0.0;
  for (size_t i = 0; i < a.values.size(); ++i) {
    const double d = a.values[i] - b.values[i];
    s += d * d;
  }
  return std::sqrt(s);
}

double cosine_sim(const GradientVector& a, const GradientVector& b) {
  const double na = norm(a);
  const double nb = norm(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot(a, b) / (na * nb);
}

GradientVector scaled(const GradientVector& a, double c) {
  GradientVector out = a;
  for (double& v : out.values) v *= c;
  return out;
}

GradientVector add(const GradientVector& a, const GradientVector& b) {
  check_same_dim(a, b, "add");
  GradientVector out = a;
  for (size_t i = 0; i < out.values.size(); ++i) out.values[i] += b.values[i];
  return out;
}

GradientVector sub(const GradientVector& a, const GradientVector& b) {
  check_same_dim(a, b, "sub");
  GradientVector out = a;
  for (size_t i = 0; i < out.values.size(); ++i) out.values[i] -= b.values[i];
  return out;
}

GradientVector flatten_gradients(std::span<const Tensor> grads) {
  size_t total = 0;
  for (const Tensor& g : grads) total += g.data.size();
  std::vector<double> flat;
  flat.reserve(total);
  for (const Tensor& g : grads) flat.insert(flat.end(), g.data.begin(), g.data.end());
  return GradientVector(std::move(flat));
}

std::vector<Tensor> unflatten_gradients(const GradientVector& flat,
                                        std::span<const std::vector<int64_t>> shapes) {
  int64_t total = 0;
  for (const auto& s : shapes) total += shape_numel(s);
  if (total != flat.dim()) {
    throw std::invalid_argument("unflatten_gradients: flat dim " + std::to_string(flat.dim()) +
                                " does not match shapes total " + std::to_string(total));
  }
  std::vector<Tensor> out;
  out.reserve(shapes.size());
  size_t off = 0;
  for (const auto& s : shapes) {
    const size_t n = static_cast<size_t>(shape_numel(s));
    out.emplace_back(s, std::vector<double>(flat.values.begin() + static_cast<ptrdiff_t>(off),
                                            flat.values.begin() + static_cast<ptrdiff_t>(off + n)));
    off += n;
  }
  return out;
}

}  // namespace poisonlab
