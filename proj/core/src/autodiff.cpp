#include "poisonlab/autodiff.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace poisonlab {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

ValId Tape::push(TapeNode n) {
  nodes_.push_back(std::move(n));
  return static_cast<ValId>(nodes_.size() - 1);
}

void Tape::check_id(ValId id) const {
  if (id < 0 || static_cast<size_t>(id) >= nodes_.size()) {
    throw std::invalid_argument("tape: value id " + std::to_string(id) +
                                " is not a node of this tape");
  }
}

const TapeNode& Tape::node(ValId id) const {
  check_id(id);
  return nodes_[static_cast<size_t>(id)];
}

const Tensor& Tape::value(ValId id) const { return node(id).value; }

double Tape::scalar_value(ValId id) const {
  const Tensor& v = value(id);
  require(v.size() == 1, "scalar_value: node is not a scalar, shape " + shape_str(v.shape));
  return v.data[0];
}

ValId Tape::leaf(Tensor value, bool requires_grad) {
  TapeNode n;
  n.op = OpKind::kLeaf;
  n.needs_grad = requires_grad;
  n.value = std::move(value);
  return push(std::move(n));
}

ValId Tape::add(ValId a, ValId b) {
  const TapeNode& na = node(a);
  const TapeNode& nb = node(b);
  require(na.value.same_shape(nb.value), "add: shape mismatch " + shape_str(na.value.shape) +
                                             " vs " + shape_str(nb.value.shape));
  TapeNode n;
  n.op = OpKind::kAdd;
  n.a = a;
  n.b = b;
  n.needs_grad = na.needs_grad || nb.needs_grad;
  n.value = na.value;
  for (size_t i = 0; i < n.value.data.size(); ++i) n.value.data[i] += nb.value.data[i];
  return push(std::move(n));
}

ValId Tape::sub(ValId a, ValId b) {
  const TapeNode& na = node(a);
  const TapeNode& nb = node(b);
  require(na.value.same_shape(nb.value), "sub: shape mismatch " + shape_str(na.value.shape) +
                                             " vs " + shape_str(nb.value.shape));
  TapeNode n;
  n.op = OpKind::kSub;
  n.a = a;
  n.b = b;
  n.needs_grad = na.needs_grad || nb.needs_grad;
  n.value = na.value;
  for (size_t i = 0; i < n.value.data.size(); ++i) n.value.data[i] -= nb.value.data[i];
  return push(std::move(n));
}

ValId Tape::mul(ValId a, ValId b) {
  const TapeNode& na = node(a);
  const TapeNode& nb = node(b);
  require(na.value.same_shape(nb.value), "mul: shape mismatch " + shape_str(na.value.shape) +
                                             " vs " + shape_str(nb.value.shape));
  TapeNode n;
  n.op = OpKind::kMul;
  n.a = a;
  n.b = b;
  n.needs_grad = na.needs_grad || nb.needs_grad;
  n.value = na.value;
  for (size_t i = 0; i < n.value.data.size(); ++i) n.value.data[i] *= nb.value.data[i];
  return push(std::move(n));
}

ValId Tape::neg(ValId a) {
  const TapeNode& na = node(a);
  TapeNode n;
  n.op = OpKind::kNeg;
  n.a = a;
  n.needs_grad = na.needs_grad;
  n.value = na.value;
  for (double& v : n.value.data) v = -v;
  return push(std::move(n));
}

ValId Tape::scale(ValId a, double c) {
  const TapeNode& na = node(a);
  TapeNode n;
  n.op = OpKind::kScale;
  n.a = a;
  n.scalar = c;
  n.needs_grad = na.needs_grad;
  n.value = na.value;
  for (double& v : n.value.data) v *= c;
  return push(std::move(n));
}

ValId Tape::matmul(ValId a, ValId b) {
  const TapeNode& na = node(a);
  const TapeNode& nb = node(b);
  require(na.value.shape.size() == 2 && nb.value.shape.size() == 2,
          "matmul: operands must be 2-D, got " + shape_str(na.value.shape) + " and " +
              shape_str(nb.value.shape));
  const int64_t m = na.value.shape[0];
  const int64_t k = na.value.shape[1];
  const int64_t k2 = nb.value.shape[0];
  const int64_t p = nb.value.shape[1];
  require(k == k2, "matmul: inner dimension mismatch " + shape_str(na.value.shape) + " vs " +
                       shape_str(nb.value.shape));
  TapeNode n;
  n.op = OpKind::kMatMul;
  n.a = a;
  n.b = b;
  n.needs_grad = na.needs_grad || nb.needs_grad;
  n.value = Tensor::zeros({m, p});
  const double* A = na.value.data.data();
  const double* B = nb.value.data.data();
  double* C = n.value.data.data();
  for (int64_t i = 0; i < m; ++i) {
    for (int64_t kk = 0; kk < k; ++kk) {
      const double aik = A[i * k + kk];
      if (aik == 0.0) continue;
      const double* Brow = B + kk * p;
      double* Crow = C + i * p;
      for (int64_t j = 0; j < p; ++j) Crow[j] += aik * Brow[j];
    }
  }
  return push(std::move(n));
}

ValId Tape::transpose(ValId a) {
  const TapeNode& na = node(a);
  require(na.value.shape.size() == 2, "transpose: operand must be 2-D");
  const int64_t m = na.value.shape[0];
  const int64_t p = na.value.shape[1];
  TapeNode n;
  n.op = OpKind::kTranspose;
  n.a = a;
  n.needs_grad = na.needs_grad;
  n.value = Tensor::zeros({p, m});
  for (int64_t i = 0; i < m; ++i)
    for (int64_t j = 0; j < p; ++j) n.value.data[static_cast<size_t>(j * m + i)] = na.value.data[static_cast<size_t>(i * p + j)];
  return push(std::move(n));
}

ValId Tape::relu(ValId a) {
  const TapeNode& na = node(a);
  TapeNode n;
  n.op = OpKind::kRelu;
  n.a = a;
  n.needs_grad = na.needs_grad;
  n.value = na.value;
  for (double& v : n.value.data) v = v > 0.0 ? v : 0.0;
  return push(std::move(n));
}

ValId Tape::exp_op(ValId a) {
  const TapeNode& na = node(a);
  TapeNode n;
  n.op = OpKind::kExp;
  n.a = a;
  n.needs_grad = na.needs_grad;
  n.value = na.value;
  for (double& v : n.value.data) v = std::exp(v);
  return push(std::move(n));
}

ValId Tape::log_op(ValId a) {
  const TapeNode& na = node(a);
  TapeNode n;
  n.op = OpKind::kLog;
  n.a = a;
  n.needs_grad = na.needs_grad;
  n.value = na.value;
  for (double& v : n.value.data) v = std::log(v);
  return push(std::move(n));
}

ValId Tape::sqrt_op(ValId a) {
  const TapeNode& na = node(a);
  TapeNode n;
  n.op = OpKind::kSqrt;
  n.a = a;
  n.needs_grad = na.needs_grad;
  n.value = na.value;
  for (double& v : n.value.data) v = std::sqrt(v);
  return push(std::move(n));
}

ValId Tape::recip(ValId a) {
  const TapeNode& na = node(a);
  TapeNode n;
  n.op = OpKind::kRecip;
  n.a = a;
  n.needs_grad = na.needs_grad;
  n.value = na.value;
  for (double& v : n.value.data) v = 1.0 / v;
  return push(std::move(n));
}

ValId Tape::sum_all(ValId a) {
  const TapeNode& na = node(a);
  TapeNode n;
  n.op = OpKind::kSumAll;
  n.a = a;
  n.needs_grad = na.needs_grad;
  double s = 0.0;
  for (double v : na.value.data) s += v;
  n.value = Tensor::scalar(s);
  return push(std::move(n));
}

ValId Tape::broadcast(ValId s, std::span<const int64_t> shape) {
  const TapeNode& ns = node(s);
  require(ns.value.size() == 1, "broadcast: source must be a scalar node");
  TapeNode n;
  n.op = OpKind::kBroadcast;
  n.a = s;
  n.needs_grad = ns.needs_grad;
  n.value = Tensor::full(std::vector<int64_t>(shape.begin(), shape.end()), ns.value.data[0]);
  return push(std::move(n));
}

ValId Tape::max_all(ValId a) {
  const TapeNode& na = node(a);
  TapeNode n;
  n.op = OpKind::kMaxAll;
  n.a = a;
  n.needs_grad = na.needs_grad;
  int64_t arg = 0;
  double best = na.value.data[0];
  for (int64_t i = 1; i < na.value.size(); ++i) {
    if (na.value.data[static_cast<size_t>(i)] > best) {
      best = na.value.data[static_cast<size_t>(i)];
      arg = i;
    }
  }
  n.value = Tensor::scalar(best);
  n.meta = {arg};
  return push(std::move(n));
}

ValId Tape::pick(ValId a, int64_t index) {
  const TapeNode& na = node(a);
  require(na.value.shape.size() == 1, "pick: operand must be 1-D");
  require(index >= 0 && index < na.value.size(),
          "pick: index " + std::to_string(index) + " out of range for " + shape_str(na.value.shape));
  TapeNode n;
  n.op = OpKind::kPick;
  n.a = a;
  n.needs_grad = na.needs_grad;
  n.value = Tensor::scalar(na.value.data[static_cast<size_t>(index)]);
  n.meta = {index};
  return push(std::move(n));
}

ValId Tape::put_at(ValId u, int64_t index, int64_t count) {
  const TapeNode& nu = node(u);
  require(nu.value.size() == 1, "put_at: source must be a scalar node");
  require(index >= 0 && index < count, "put_at: index out of range");
  TapeNode n;
  n.op = OpKind::kPutAt;
  n.a = u;
  n.needs_grad = nu.needs_grad;
  n.value = Tensor::zeros({count});
  n.value.data[static_cast<size_t>(index)] = nu.value.data[0];
  n.meta = {index, count};
  return push(std::move(n));
}

ValId Tape::slice(ValId a, int64_t start, int64_t len) {
  const TapeNode& na = node(a);
  require(na.value.shape.size() == 1, "slice: operand must be 1-D");
  require(start >= 0 && len >= 1 && start + len <= na.value.size(), "slice: segment out of range");
  TapeNode n;
  n.op = OpKind::kSlice;
  n.a = a;
  n.needs_grad = na.needs_grad;
  n.value = Tensor({len}, std::vector<double>(na.value.data.begin() + static_cast<ptrdiff_t>(start),
                                              na.value.data.begin() + static_cast<ptrdiff_t>(start + len)));
  n.meta = {start, len};
  return push(std::move(n));
}

ValId Tape::pad_seg(ValId a, int64_t start, int64_t total) {
  const TapeNode& na = node(a);
  require(na.value.shape.size() == 1, "pad_seg: operand must be 1-D");
  require(start >= 0 && start + na.value.size() <= total, "pad_seg: segment out of range");
  TapeNode n;
  n.op = OpKind::kPadSeg;
  n.a = a;
  n.needs_grad = na.needs_grad;
  n.value = Tensor::zeros({total});
  for (int64_t i = 0; i < na.value.size(); ++i)
    n.value.data[static_cast<size_t>(start + i)] = na.value.data[static_cast<size_t>(i)];
  n.meta = {start, total};
  return push(std::move(n));
}

ValId Tape::reshape(ValId a, std::span<const int64_t> shape) {
  const TapeNode& na = node(a);
  require(shape_numel(shape) == na.value.size(),
          "reshape: cannot view " + shape_str(na.value.shape) + " as " +
              shape_str(shape));
  TapeNode n;
  n.op = OpKind::kReshape;
  n.a = a;
  n.needs_grad = na.needs_grad;
  n.value = Tensor(std::vector<int64_t>(shape.begin(), shape.end()), na.value.data);
  return push(std::move(n));
}

namespace {
struct ConvGeom {
  int64_t cin, h, w, kh, kw, stride, oh, ow;
};

ConvGeom conv_geom(std::span<const int64_t> in_shape, int64_t kh, int64_t kw, int64_t stride) {
  ConvGeom g{};
  g.cin = in_shape[0];
  g.h = in_shape[1];
  g.w = in_shape[2];
  g.kh = kh;
  g.kw = kw;
  g.stride = stride;
  g.oh = (g.h - kh) / stride + 1;
  g.ow = (g.w - kw) / stride + 1;
  return g;
}
}  // namespace

ValId Tape::im2col(ValId input, int64_t kh, int64_t kw, int64_t stride) {
  const TapeNode& ni = node(input);
  require(ni.value.shape.size() == 3, "im2col: input must be [Cin,H,W], got " + shape_str(ni.value.shape));
  require(stride >= 1, "im2col: stride must be >= 1");
  require(kh >= 1 && kw >= 1 && kh <= ni.value.shape[1] && kw <= ni.value.shape[2],
          "im2col: kernel " + std::to_string(kh) + "x" + std::to_string(kw) +
              " does not fit input " + shape_str(ni.value.shape));
  const ConvGeom g = conv_geom(ni.value.shape, kh, kw, stride);
  TapeNode n;
  n.op = OpKind::kIm2Col;
  n.a = input;
  n.needs_grad = ni.needs_grad;
  n.value = Tensor::zeros({g.cin * g.kh * g.kw, g.oh * g.ow});
  const double* src = ni.value.data.data();
  double* dst = n.value.data.data();
  const int64_t cols = g.oh * g.ow;
  for (int64_t c = 0; c < g.cin; ++c) {
    for (int64_t ki = 0; ki < g.kh; ++ki) {
      for (int64_t kj = 0; kj < g.kw; ++kj) {
        const int64_t row = (c * g.kh + ki) * g.kw + kj;
        for (int64_t oi = 0; oi < g.oh; ++oi) {
          for (int64_t oj = 0; oj < g.ow; ++oj) {
            dst[row * cols + oi * g.ow + oj] =
                src[c * g.h * g.w + (oi * g.stride + ki) * g.w + (oj * g.stride + kj)];
          }
        }
      }
    }
  }
  n.meta = {g.cin, g.h, g.w, g.kh, g.kw, g.stride};
  return push(std::move(n));
}

ValId Tape::concat(std::span<const ValId> parts) {
  require(!parts.empty(), "concat: needs at least one input");
  int64_t total = 0;
  bool needs = false;
  for (ValId p : parts) {
    const TapeNode& np = node(p);
    require(np.value.shape.size() == 1, "concat: inputs must be 1-D");
    total += np.value.size();
    needs = needs || np.needs_grad;
  }
  TapeNode n;
  n.op = OpKind::kConcat;
  n.needs_grad = needs;
  n.value = Tensor::zeros({total});
  int64_t off = 0;
  n.meta.reserve(parts.size());
  for (ValId p : parts) {
    const TapeNode& np = node(p);
    for (int64_t i = 0; i < np.value.size(); ++i)
      n.value.data[static_cast<size_t>(off + i)] = np.value.data[static_cast<size_t>(i)];
    off += np.value.size();
    n.meta.push_back(p);
  }
  return push(std::move(n));
}

ValId Tape::conv2d(ValId input, ValId kernel, ValId bias, int64_t stride) {
  const TapeNode& ni = node(input);
  const TapeNode& nk = node(kernel);
  require(ni.value.shape.size() == 3, "conv2d: input must be [Cin,H,W], got " + shape_str(ni.value.shape));
  require(nk.value.shape.size() == 4,
          "conv2d: kernel must be [Cout,Cin,KH,KW], got " + shape_str(nk.value.shape));
  require(nk.value.shape[1] == ni.value.shape[0],
          "conv2d: channel mismatch, input " + shape_str(ni.value.shape) + " vs kernel " +
              shape_str(nk.value.shape));
  const int64_t cout = nk.value.shape[0];
  const int64_t kh = nk.value.shape[2];
  const int64_t kw = nk.value.shape[3];
  const ConvGeom g = conv_geom(ni.value.shape, kh, kw, stride);

  const ValId cols = im2col(input, kh, kw, stride);
  const ValId kmat = reshape(kernel, std::vector<int64_t>{cout, g.cin * kh * kw});
  ValId out = matmul(kmat, cols);  // [Cout, OH*OW]
  if (bias >= 0) {
    const TapeNode& nb = node(bias);
    require(nb.value.shape.size() == 1 && nb.value.shape[0] == cout,
            "conv2d: bias must be [Cout], got " + shape_str(nb.value.shape));
    const ValId bcol = reshape(bias, std::vector<int64_t>{cout, 1});
    const ValId ones = constant(Tensor::full({1, g.oh * g.ow}, 1.0));
    out = add(out, matmul(bcol, ones));
  }
  return reshape(out, std::vector<int64_t>{cout, g.oh, g.ow});
}

ValId Tape::linear(ValId weight, ValId x, ValId bias) {
  const TapeNode& nw = node(weight);
  const TapeNode& nx = node(x);
  require(nw.value.shape.size() == 2, "linear: weight must be 2-D");
  const int64_t out_dim = nw.value.shape[0];
  const int64_t in_dim = nw.value.shape[1];
  require(nx.value.size() == in_dim, "linear: input size " + shape_str(nx.value.shape) +
                                         " does not match weight " + shape_str(nw.value.shape));
  const ValId xcol = reshape(x, std::vector<int64_t>{in_dim, 1});
  ValId out = matmul(weight, xcol);  // [out,1]
  out = reshape(out, std::vector<int64_t>{out_dim});
  if (bias >= 0) {
    const TapeNode& nb = node(bias);
    require(nb.value.shape.size() == 1 && nb.value.shape[0] == out_dim,
            "linear: bias must be [out], got " + shape_str(nb.value.shape));
    out = add(out, bias);
  }
  return out;
}

ValId Tape::softmax_cross_entropy(ValId logits, int64_t label) {
  const TapeNode& nl = node(logits);
  require(nl.value.shape.size() == 1, "softmax_cross_entropy: logits must be 1-D");
  const int64_t c = nl.value.size();
  require(label >= 0 && label < c, "softmax_cross_entropy: label " + std::to_string(label) +
                                       " out of range [0, " + std::to_string(c) + ")");
  // loss = log(sum exp(z - max z)) - (z[label] - max z)
  const ValId m = max_all(logits);
  const ValId shifted = sub(logits, broadcast(m, nl.value.shape));
  const ValId se = sum_all(exp_op(shifted));
  return sub(log_op(se), pick(shifted, label));
}

ValId Tape::dot(ValId a, ValId b) { return sum_all(mul(a, b)); }

ValId Tape::squared_norm(ValId a) { return sum_all(mul(a, a)); }

std::vector<ValId> Tape::gradients(ValId scalar, std::span<const ValId> wrt) {
  check_id(scalar);
  require(node(scalar).value.size() == 1, "gradients: root must be a scalar node");
  for (ValId w : wrt) check_id(w);

  // adjoints indexed by node id; only ids <= scalar can receive one
  std::vector<ValId> adj(static_cast<size_t>(scalar) + 1, -1);
  adj[static_cast<size_t>(scalar)] = constant(Tensor::scalar(1.0));

  auto accumulate = [&](ValId target, ValId contribution) {
    if (!nodes_[static_cast<size_t>(target)].needs_grad) return;
    ValId& slot = adj[static_cast<size_t>(target)];
    slot = slot < 0 ? contribution : add(slot, contribution);
  };

  for (ValId id = scalar; id >= 0; --id) {
    const ValId u = adj[static_cast<size_t>(id)];
    if (u < 0) continue;
    // copy what the VJP emission needs: pushing nodes may reallocate nodes_
    const OpKind op = nodes_[static_cast<size_t>(id)].op;
    if (op == OpKind::kLeaf) continue;
    const ValId a = nodes_[static_cast<size_t>(id)].a;
    const ValId b = nodes_[static_cast<size_t>(id)].b;
    const double c = nodes_[static_cast<size_t>(id)].scalar;
    const std::vector<int64_t> meta = nodes_[static_cast<size_t>(id)].meta;

    switch (op) {
      case OpKind::kAdd:
        accumulate(a, u);
        accumulate(b, u);
        break;
      case OpKind::kSub:
        accumulate(a, u);
        accumulate(b, neg(u));
        break;
      case OpKind::kMul:
        if (nodes_[static_cast<size_t>(a)].needs_grad) accumulate(a, mul(u, b));
        if (nodes_[static_cast<size_t>(b)].needs_grad) accumulate(b, mul(u, a));
        break;
      case OpKind::kNeg:
        accumulate(a, neg(u));
        break;
      case OpKind::kScale:
        accumulate(a, scale(u, c));
        break;
      case OpKind::kMatMul:
        if (nodes_[static_cast<size_t>(a)].needs_grad) accumulate(a, matmul(u, transpose(b)));
        if (nodes_[static_cast<size_t>(b)].needs_grad) accumulate(b, matmul(transpose(a), u));
        break;
      case OpKind::kTranspose:
        accumulate(a, transpose(u));
        break;
      case OpKind::kRelu: {
        // the mask is piecewise constant: captured as a constant leaf so the
        // second derivative through it is zero; subgradient at 0 is 0
        Tensor mask = nodes_[static_cast<size_t>(a)].value;
        for (double& v : mask.data) v = v > 0.0 ? 1.0 : 0.0;
        accumulate(a, mul(u, constant(std::move(mask))));
        break;
      }
      case OpKind::kExp:
        accumulate(a, mul(u, id));
        break;
      case OpKind::kLog:
        accumulate(a, mul(u, recip(a)));
        break;
      case OpKind::kSqrt:
        accumulate(a, scale(mul(u, recip(id)), 0.5));
        break;
      case OpKind::kRecip:
        accumulate(a, neg(mul(u, mul(id, id))));
        break;
      case OpKind::kSumAll:
        accumulate(a, broadcast(u, nodes_[static_cast<size_t>(a)].value.shape));
        break;
      case OpKind::kBroadcast:
        accumulate(a, sum_all(u));
        break;
      case OpKind::kMaxAll: {
        const int64_t n = nodes_[static_cast<size_t>(a)].value.size();
        ValId g = put_at(u, meta[0], n);
        if (nodes_[static_cast<size_t>(a)].value.shape.size() != 1)
          g = reshape(g, nodes_[static_cast<size_t>(a)].value.shape);
        accumulate(a, g);
        break;
      }
      case OpKind::kPick:
        accumulate(a, put_at(u, meta[0], nodes_[static_cast<size_t>(a)].value.size()));
        break;
      case OpKind::kPutAt:
        accumulate(a, pick(u, meta[0]));
        break;
      case OpKind::kSlice:
        accumulate(a, pad_seg(u, meta[0], nodes_[static_cast<size_t>(a)].value.size()));
        break;
      case OpKind::kPadSeg:
        accumulate(a, slice(u, meta[0], nodes_[static_cast<size_t>(a)].value.size()));
        break;
      case OpKind::kReshape:
        accumulate(a, reshape(u, nodes_[static_cast<size_t>(a)].value.shape));
        break;
      case OpKind::kIm2Col: {
        // scatter-add transpose of the gather
        TapeNode n;
        n.op = OpKind::kCol2Im;
        n.a = u;
        n.needs_grad = nodes_[static_cast<size_t>(u)].needs_grad;
        n.meta = meta;
        const int64_t cin = meta[0], h = meta[1], w = meta[2], kh = meta[3], kw = meta[4],
                      stride = meta[5];
        const int64_t oh = (h - kh) / stride + 1;
        const int64_t ow = (w - kw) / stride + 1;
        n.value = Tensor::zeros({cin, h, w});
        const double* src = nodes_[static_cast<size_t>(u)].value.data.data();
        double* dst = n.value.data.data();
        const int64_t cols = oh * ow;
        for (int64_t ci = 0; ci < cin; ++ci)
          for (int64_t ki = 0; ki < kh; ++ki)
            for (int64_t kj = 0; kj < kw; ++kj) {
              const int64_t row = (ci * kh + ki) * kw + kj;
              for (int64_t oi = 0; oi < oh; ++oi)
                for (int64_t oj = 0; oj < ow; ++oj)
                  dst[ci * h * w + (oi * stride + ki) * w + (oj * stride + kj)] +=
                      src[row * cols + oi * ow + oj];
            }
        accumulate(a, push(std::move(n)));
        break;
      }
      case OpKind::kCol2Im:
        accumulate(a, im2col(u, meta[3], meta[4], meta[5]));
        break;
      case OpKind::kConcat: {
        int64_t off = 0;
        for (ValId part : meta) {
          const int64_t len = nodes_[static_cast<size_t>(part)].value.size();
          if (nodes_[static_cast<size_t>(part)].needs_grad)
            accumulate(static_cast<ValId>(part), slice(u, off, len));
          off += len;
        }
        break;
      }
      case OpKind::kLeaf:
        break;
    }
  }

  std::vector<ValId> out;
  out.reserve(wrt.size());
  for (ValId w : wrt) {
    const ValId g = w <= scalar ? adj[static_cast<size_t>(w)] : -1;
    out.push_back(g >= 0 ? g : constant(Tensor::zeros(node(w).value.shape)));
  }
  return out;
}

}  // namespace poisonlab
