#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace poisonlab {

// Dense row-major tensor of 64-bit reals. The whole pipeline runs in double
// precision; desk scale makes this affordable and it keeps test tolerances
// tight.
struct Tensor {
  std::vector<int64_t> shape;
  std::vector<double> data;

  Tensor() = default;
  Tensor(std::vector<int64_t> s, std::vector<double> d);

  static Tensor zeros(std::vector<int64_t> shape);
  static Tensor full(std::vector<int64_t> shape, double value);
  static Tensor scalar(double value);  // shape {1}
  static Tensor vector1d(std::vector<double> values);

  int64_t size() const { return static_cast<int64_t>(data.size()); }
  bool same_shape(const Tensor& other) const { return shape == other.shape; }
  bool all_finite() const;
};

int64_t shape_numel(std::span<const int64_t> shape);
std::string shape_str(std::span<const int64_t> shape);

// Flattened model gradient in R^d, the unit of aggregation and attack.
struct GradientVector {
  std::vector<double> values;

  GradientVector() = default;
  explicit GradientVector(std::vector<double> v) : values(std::move(v)) {}
  static GradientVector zeros(int64_t dim) {
    return GradientVector(std::vector<double>(static_cast<size_t>(dim), 0.0));
  }

  int64_t dim() const { return static_cast<int64_t>(values.size()); }
  double& operator[](size_t i) { return values[i]; }
  double operator[](size_t i) const { return values[i]; }
  bool all_finite() const;
};

double dot(const GradientVector& a, const GradientVector& b);
double norm(const GradientVector& a);
double distance(const GradientVector& a, const GradientVector& b);
// Cosine similarity; 0 when either vector has zero norm (degenerate case).
double cosine_sim(const GradientVector& a, const GradientVector& b);

GradientVector scaled(const GradientVector& a, double c);
GradientVector add(const GradientVector& a, const GradientVector& b);
GradientVector sub(const GradientVector& a, const GradientVector& b);

// Flatten an ordered list of gradient tensors into one vector and back.
// Ordering is the caller's canonical parameter order; round trip is exact.
GradientVector flatten_gradients(std::span<const Tensor> grads);
std::vector<Tensor> unflatten_gradients(const GradientVector& flat,
                                        std::span<const std::vector<int64_t>> shapes);

}  // namespace poisonlab
