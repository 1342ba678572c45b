#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "poisonlab/tensor.hpp"

namespace poisonlab {

// Node handle into a Tape. Nodes only reference lower ids, so id order is a
// topological order of the recorded graph.
using ValId = int32_t;

enum class OpKind : uint8_t {
  kLeaf,
  kAdd,
  kSub,
  kMul,
  kNeg,
  kScale,      // scalar() holds the constant factor
  kMatMul,     // [m,k] x [k,n] -> [m,n]
  kTranspose,  // 2-D
  kRelu,
  kExp,
  kLog,
  kSqrt,
  kRecip,
  kSumAll,     // -> [1]
  kBroadcast,  // [1] -> arbitrary shape
  kMaxAll,     // -> [1]; meta[0] = flat index of first argmax
  kPick,       // 1-D x[i] -> [1]; meta[0] = i
  kPutAt,      // [1] -> [n] zeros except index; meta = {i, n}
  kSlice,      // 1-D segment; meta = {start, len}
  kPadSeg,     // 1-D -> [total] zeros outside segment; meta = {start, total}
  kReshape,
  kIm2Col,     // meta = {cin, h, w, kh, kw, stride}
  kCol2Im,     // meta = {cin, h, w, kh, kw, stride}
  kConcat,     // 1-D inputs; meta = input ids
};

struct TapeNode {
  OpKind op{OpKind::kLeaf};
  ValId a{-1};
  ValId b{-1};
  bool needs_grad{false};
  double scalar{0.0};
  Tensor value;
  std::vector<int64_t> meta;
};

// Reverse-mode tape with eager forward evaluation. The backward pass emits
// ordinary tape ops, so gradients are themselves tape values and a scalar
// function of first-order gradients can be differentiated again. That is the
// mechanism the poison-inversion objective relies on: d f_p / d x flows
// through the recorded model-gradient computation exactly.
class Tape {
 public:
  ValId leaf(Tensor value, bool requires_grad = false);
  ValId constant(Tensor value) { return leaf(std::move(value), false); }

  ValId add(ValId a, ValId b);
  ValId sub(ValId a, ValId b);
  ValId mul(ValId a, ValId b);
  ValId neg(ValId a);
  ValId scale(ValId a, double c);
  ValId matmul(ValId a, ValId b);
  ValId transpose(ValId a);
  ValId relu(ValId a);
  ValId exp_op(ValId a);
  ValId log_op(ValId a);
  ValId sqrt_op(ValId a);
  ValId recip(ValId a);
  ValId sum_all(ValId a);
  ValId broadcast(ValId s, std::span<const int64_t> shape);
  ValId max_all(ValId a);
  ValId pick(ValId a, int64_t index);
  ValId put_at(ValId u, int64_t index, int64_t n);
  ValId slice(ValId a, int64_t start, int64_t len);
  ValId pad_seg(ValId a, int64_t start, int64_t total);
  ValId reshape(ValId a, std::span<const int64_t> shape);
  ValId im2col(ValId input, int64_t kh, int64_t kw, int64_t stride);
  ValId concat(std::span<const ValId> parts);

  // Composites built from the primitives above.
  //
  // conv2d: input [Cin,H,W], kernel [Cout,Cin,KH,KW], optional bias [Cout]
  // (pass -1 for none), no padding, output spatial floor((H-K)/stride)+1.
  ValId conv2d(ValId input, ValId kernel, ValId bias, int64_t stride);
  // linear: weight [out,in], x [in] or [in,1], optional bias [out] -> [out]
  ValId linear(ValId weight, ValId x, ValId bias);
  // softmax cross entropy with max-subtraction stabilization; logits 1-D [C]
  ValId softmax_cross_entropy(ValId logits, int64_t label);
  ValId dot(ValId a, ValId b);          // 1-D, -> [1]
  ValId squared_norm(ValId a);          // -> [1]

  const Tensor& value(ValId id) const;
  double scalar_value(ValId id) const;  // value of a [1] node
  size_t size() const { return nodes_.size(); }

  // Reverse-mode gradients of a scalar node with respect to `wrt` nodes.
  // Gradients are returned as new tape values. A `wrt` entry that the scalar
  // does not depend on yields a zero tensor of its shape.
  std::vector<ValId> gradients(ValId scalar, std::span<const ValId> wrt);

 private:
  ValId push(TapeNode node);
  const TapeNode& node(ValId id) const;
  void check_id(ValId id) const;

  std::vector<TapeNode> nodes_;
};

}  // namespace poisonlab
