#include "mmt/autodiff/ops.hpp"

#include <algorithm>
#include <cmath>

namespace mmt::ad {
namespace {

template <typename T>
Tape<T>& tape_of(const char* op, const Var<T>& a, const Var<T>& b) {
  if (!a.valid() || !b.valid() || &a.tape() != &b.tape()) {
    throw std::invalid_argument(std::string(op) + ": operands belong to different tapes");
  }
  return a.tape();
}

[[noreturn]] void shape_fail(const char* op, const Shape& a, const Shape& b) {
  throw ShapeError(std::string(op) + ": incompatible shapes " + to_string(a) + " and " + to_string(b));
}

bool trailing_match(const Shape& big, const Shape& small) {
  if (small.size() > big.size()) return false;
  return std::equal(small.begin(), small.end(), big.end() - static_cast<std::ptrdiff_t>(small.size()));
}

Shape broadcast_shape(const char* op, const Shape& a, const Shape& b) {
  if (a == b) return a;
  if (trailing_match(a, b)) return a;
  if (trailing_match(b, a)) return b;
  shape_fail(op, a, b);
}

// C[m,n] += A[m,k] B[k,n]; each C element sums over k in ascending order.
template <typename T>
void gemm_nn(const T* A, const T* B, T* C, std::size_t m, std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    T* c = C + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const T a = A[i * k + p];
      const T* b = B + p * n;
      for (std::size_t j = 0; j < n; ++j) c[j] += a * b[j];
    }
  }
}

// dA[m,k] += G[m,n] B[k,n]^T
template <typename T>
void gemm_nt(const T* G, const T* B, T* dA, std::size_t m, std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    const T* g = G + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const T* b = B + p * n;
      T s{0};
      for (std::size_t j = 0; j < n; ++j) s += g[j] * b[j];
      dA[i * k + p] += s;
    }
  }
}

// dB[k,n] += A[m,k]^T G[m,n]
template <typename T>
void gemm_tn(const T* A, const T* G, T* dB, std::size_t m, std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    const T* g = G + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const T a = A[i * k + p];
      T* d = dB + p * n;
      for (std::size_t j = 0; j < n; ++j) d[j] += a * g[j];
    }
  }
}

template <typename T, typename Fwd, typename Bwd>
Var<T> binary_elementwise(const char* op, const Var<T>& a, const Var<T>& b, Fwd fwd, Bwd bwd) {
  auto& tape = tape_of(op, a, b);
  const auto& av = a.value();
  const auto& bv = b.value();
  Tensor<T> out(broadcast_shape(op, av.shape(), bv.shape()));
  const std::size_t na = av.size(), nb = bv.size(), n = out.size();
  for (std::size_t i = 0; i < n; ++i) out[i] = fwd(av[i % na], bv[i % nb]);
  return tape.record(std::move(out), {a, b}, [a, b, bwd](Tape<T>& t, std::span<const T> g) {
    const auto& x = t.value(a);
    const auto& y = t.value(b);
    const std::size_t na = x.size(), nb = y.size();
    std::span<T> ga, gb;
    if (t.needs_grad(a)) ga = t.grad_buffer(a);
    if (t.needs_grad(b)) gb = t.grad_buffer(b);
    for (std::size_t i = 0; i < g.size(); ++i) {
      T da{0}, db{0};
      bwd(x[i % na], y[i % nb], g[i], da, db);
      if (!ga.empty()) ga[i % na] += da;
      if (!gb.empty()) gb[i % nb] += db;
    }
  });
}

// Elementwise op; deriv(x) is d fwd / dx evaluated at the input.
template <typename T, typename Fwd, typename Deriv>
Var<T> unary(const Var<T>& a, Fwd fwd, Deriv deriv) {
  const auto& av = a.value();
  Tensor<T> out(av.shape());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = fwd(av[i]);
  return a.tape().record(std::move(out), {a}, [a, deriv](Tape<T>& t, std::span<const T> g) {
    const auto& x = t.value(a);
    auto ga = t.grad_buffer(a);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * deriv(x[i]);
  });
}

template <typename T>
T stable_sigmoid(T x) {
  if (x >= T{0}) return T{1} / (T{1} + std::exp(-x));
  const T e = std::exp(x);
  return e / (T{1} + e);
}

std::size_t last_dim(const char* op, const Shape& s) {
  if (s.empty() || s.back() == 0) throw ShapeError(std::string(op) + ": needs a non-empty last axis, got " + to_string(s));
  return s.back();
}

}  // namespace

template <typename T>
Var<T> matmul(const Var<T>& a, const Var<T>& b) {
  auto& tape = tape_of("matmul", a, b);
  const auto& as = a.shape();
  const auto& bs = b.shape();
  std::size_t batch = 1, m = 0, k = 0, n = 0;
  Shape out_shape;
  if (as.size() == 2 && bs.size() == 2 && as[1] == bs[0]) {
    m = as[0], k = as[1], n = bs[1];
    out_shape = {m, n};
  } else if (as.size() == 3 && bs.size() == 3 && as[0] == bs[0] && as[2] == bs[1]) {
    batch = as[0], m = as[1], k = as[2], n = bs[2];
    out_shape = {batch, m, n};
  } else {
    shape_fail("matmul", as, bs);
  }
  Tensor<T> out(out_shape);
  const T* A = a.value().data().data();
  const T* B = b.value().data().data();
  for (std::size_t s = 0; s < batch; ++s) gemm_nn(A + s * m * k, B + s * k * n, out.data().data() + s * m * n, m, k, n);
  return tape.record(std::move(out), {a, b}, [a, b, batch, m, k, n](Tape<T>& t, std::span<const T> g) {
    const T* A = t.value(a).data().data();
    const T* B = t.value(b).data().data();
    if (t.needs_grad(a)) {
      T* dA = t.grad_buffer(a).data();
      for (std::size_t s = 0; s < batch; ++s) gemm_nt(g.data() + s * m * n, B + s * k * n, dA + s * m * k, m, k, n);
    }
    if (t.needs_grad(b)) {
      T* dB = t.grad_buffer(b).data();
      for (std::size_t s = 0; s < batch; ++s) gemm_tn(A + s * m * k, g.data() + s * m * n, dB + s * k * n, m, k, n);
    }
  });
}

template <typename T>
Var<T> add(const Var<T>& a, const Var<T>& b) {
  return binary_elementwise<T>(
      "add", a, b, [](T x, T y) { return x + y; },
      [](T, T, T g, T& da, T& db) {
        da = g;
        db = g;
      });
}

template <typename T>
Var<T> sub(const Var<T>& a, const Var<T>& b) {
  return binary_elementwise<T>(
      "sub", a, b, [](T x, T y) { return x - y; },
      [](T, T, T g, T& da, T& db) {
        da = g;
        db = -g;
      });
}

template <typename T>
Var<T> mul(const Var<T>& a, const Var<T>& b) {
  return binary_elementwise<T>(
      "mul", a, b, [](T x, T y) { return x * y; },
      [](T x, T y, T g, T& da, T& db) {
        da = g * y;
        db = g * x;
      });
}

template <typename T>
Var<T> scale(const Var<T>& a, T s) {
  return unary<T>(a, [s](T x) { return x * s; }, [s](T) { return s; });
}

template <typename T>
Var<T> add_scalar(const Var<T>& a, T s) {
  return unary<T>(a, [s](T x) { return x + s; }, [](T) { return T{1}; });
}

template <typename T>
Var<T> tanh(const Var<T>& a) {
  return unary<T>(a, [](T x) { return std::tanh(x); },
                  [](T x) {
                    const T y = std::tanh(x);
                    return T{1} - y * y;
                  });
}

template <typename T>
Var<T> sigmoid(const Var<T>& a) {
  return unary<T>(a, [](T x) { return stable_sigmoid(x); },
                  [](T x) {
                    const T y = stable_sigmoid(x);
                    return y * (T{1} - y);
                  });
}

template <typename T>
Var<T> exp(const Var<T>& a) {
  return unary<T>(a, [](T x) { return std::exp(x); }, [](T x) { return std::exp(x); });
}

template <typename T>
Var<T> log(const Var<T>& a) {
  return unary<T>(a, [](T x) { return std::log(x); }, [](T x) { return T{1} / x; });
}

template <typename T>
Var<T> softmax(const Var<T>& a) {
  const auto& av = a.value();
  const std::size_t cols = last_dim("softmax", av.shape());
  const std::size_t rows = av.size() / cols;
  Tensor<T> out(av.shape());
  for (std::size_t r = 0; r < rows; ++r) {
    const T* x = av.data().data() + r * cols;
    T* y = out.data().data() + r * cols;
    const T mx = *std::max_element(x, x + cols);
    T z{0};
    for (std::size_t c = 0; c < cols; ++c) z += (y[c] = std::exp(x[c] - mx));
    for (std::size_t c = 0; c < cols; ++c) y[c] /= z;
  }
  auto probs = out.storage();
  return a.tape().record(std::move(out), {a},
                         [a, rows, cols, probs = std::move(probs)](Tape<T>& t, std::span<const T> g) {
                           auto ga = t.grad_buffer(a);
                           for (std::size_t r = 0; r < rows; ++r) {
                             const T* y = probs.data() + r * cols;
                             const T* gr = g.data() + r * cols;
                             T dot{0};
                             for (std::size_t c = 0; c < cols; ++c) dot += gr[c] * y[c];
                             for (std::size_t c = 0; c < cols; ++c) ga[r * cols + c] += y[c] * (gr[c] - dot);
                           }
                         });
}

template <typename T>
Var<T> log_softmax(const Var<T>& a) {
  const auto& av = a.value();
  const std::size_t cols = last_dim("log_softmax", av.shape());
  const std::size_t rows = av.size() / cols;
  Tensor<T> out(av.shape());
  for (std::size_t r = 0; r < rows; ++r) {
    const T* x = av.data().data() + r * cols;
    T* y = out.data().data() + r * cols;
    const T mx = *std::max_element(x, x + cols);
    T z{0};
    for (std::size_t c = 0; c < cols; ++c) z += std::exp(x[c] - mx);
    const T lse = mx + std::log(z);
    for (std::size_t c = 0; c < cols; ++c) y[c] = x[c] - lse;
  }
  auto logp = out.storage();
  return a.tape().record(std::move(out), {a},
                         [a, rows, cols, logp = std::move(logp)](Tape<T>& t, std::span<const T> g) {
                           auto ga = t.grad_buffer(a);
                           for (std::size_t r = 0; r < rows; ++r) {
                             const T* gr = g.data() + r * cols;
                             T total{0};
                             for (std::size_t c = 0; c < cols; ++c) total += gr[c];
                             for (std::size_t c = 0; c < cols; ++c) {
                               ga[r * cols + c] += gr[c] - std::exp(logp[r * cols + c]) * total;
                             }
                           }
                         });
}

template <typename T>
Var<T> concat(std::span<const Var<T>> parts, std::size_t axis) {
  if (parts.empty()) throw ShapeError("concat: no inputs");
  const Shape& first = parts[0].shape();
  if (axis >= first.size()) throw ShapeError("concat: axis " + std::to_string(axis) + " out of range for " + to_string(first));
  Shape out_shape = first;
  out_shape[axis] = 0;
  std::vector<std::size_t> widths;
  for (const auto& p : parts) {
    if (&p.tape() != &parts[0].tape()) throw std::invalid_argument("concat: operands belong to different tapes");
    const Shape& s = p.shape();
    bool ok = s.size() == first.size();
    for (std::size_t d = 0; ok && d < s.size(); ++d) ok = d == axis || s[d] == first[d];
    if (!ok) shape_fail("concat", first, s);
    out_shape[axis] += s[axis];
  }
  std::size_t outer = 1, inner = 1;
  for (std::size_t d = 0; d < axis; ++d) outer *= first[d];
  for (std::size_t d = axis + 1; d < first.size(); ++d) inner *= first[d];
  for (const auto& p : parts) widths.push_back(p.shape()[axis] * inner);
  const std::size_t row = out_shape[axis] * inner;

  Tensor<T> out(out_shape);
  std::size_t offset = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto src = parts[i].value().data();
    for (std::size_t o = 0; o < outer; ++o) {
      std::copy_n(src.data() + o * widths[i], widths[i], out.data().data() + o * row + offset);
    }
    offset += widths[i];
  }
  std::vector<Var<T>> inputs(parts.begin(), parts.end());
  auto& tape = parts[0].tape();
  return tape.record(std::move(out), std::span<const Var<T>>(inputs),
                     [inputs, widths, outer, row](Tape<T>& t, std::span<const T> g) {
                       std::size_t offset = 0;
                       for (std::size_t i = 0; i < inputs.size(); ++i) {
                         if (t.needs_grad(inputs[i])) {
                           auto gi = t.grad_buffer(inputs[i]);
                           for (std::size_t o = 0; o < outer; ++o) {
                             for (std::size_t j = 0; j < widths[i]; ++j) gi[o * widths[i] + j] += g[o * row + offset + j];
                           }
                         }
                         offset += widths[i];
                       }
                     });
}

template <typename T>
Var<T> narrow(const Var<T>& a, std::size_t axis, std::size_t start, std::size_t length) {
  const Shape& s = a.shape();
  if (axis >= s.size() || start + length > s[axis]) {
    throw ShapeError("narrow: range [" + std::to_string(start) + "," + std::to_string(start + length) + ") of axis " +
                     std::to_string(axis) + " invalid for " + to_string(s));
  }
  std::size_t outer = 1, inner = 1;
  for (std::size_t d = 0; d < axis; ++d) outer *= s[d];
  for (std::size_t d = axis + 1; d < s.size(); ++d) inner *= s[d];
  Shape out_shape = s;
  out_shape[axis] = length;
  const std::size_t src_row = s[axis] * inner, dst_row = length * inner, skip = start * inner;
  Tensor<T> out(out_shape);
  const auto src = a.value().data();
  for (std::size_t o = 0; o < outer; ++o) {
    std::copy_n(src.data() + o * src_row + skip, dst_row, out.data().data() + o * dst_row);
  }
  return a.tape().record(std::move(out), {a}, [a, outer, src_row, dst_row, skip](Tape<T>& t, std::span<const T> g) {
    auto ga = t.grad_buffer(a);
    for (std::size_t o = 0; o < outer; ++o) {
      for (std::size_t j = 0; j < dst_row; ++j) ga[o * src_row + skip + j] += g[o * dst_row + j];
    }
  });
}

template <typename T>
Var<T> reshape(const Var<T>& a, Shape shape) {
  if (numel(shape) != a.value().size()) shape_fail("reshape", a.shape(), shape);
  Tensor<T> out(std::move(shape), a.value().storage());
  return a.tape().record(std::move(out), {a}, [a](Tape<T>& t, std::span<const T> g) {
    auto ga = t.grad_buffer(a);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
  });
}

template <typename T>
Var<T> repeat_axis(const Var<T>& a, std::size_t axis, std::size_t n) {
  const Shape& s = a.shape();
  if (axis > s.size()) throw ShapeError("repeat_axis: axis " + std::to_string(axis) + " invalid for " + to_string(s));
  std::size_t outer = 1, inner = 1;
  for (std::size_t d = 0; d < axis; ++d) outer *= s[d];
  for (std::size_t d = axis; d < s.size(); ++d) inner *= s[d];
  Shape out_shape(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(axis));
  out_shape.push_back(n);
  out_shape.insert(out_shape.end(), s.begin() + static_cast<std::ptrdiff_t>(axis), s.end());
  Tensor<T> out(out_shape);
  const auto src = a.value().data();
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t r = 0; r < n; ++r) std::copy_n(src.data() + o * inner, inner, out.data().data() + (o * n + r) * inner);
  }
  return a.tape().record(std::move(out), {a}, [a, outer, inner, n](Tape<T>& t, std::span<const T> g) {
    auto ga = t.grad_buffer(a);
    for (std::size_t o = 0; o < outer; ++o) {
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t i = 0; i < inner; ++i) ga[o * inner + i] += g[(o * n + r) * inner + i];
      }
    }
  });
}

template <typename T>
Var<T> embedding(const Var<T>& table, std::span<const std::int32_t> ids) {
  const Shape& s = table.shape();
  if (s.size() != 2) throw ShapeError("embedding: table must be 2-D, got " + to_string(s));
  const std::size_t rows = s[0], width = s[1];
  Tensor<T> out(Shape{ids.size(), width});
  const auto src = table.value().data();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] < 0 || static_cast<std::size_t>(ids[i]) >= rows) {
      throw std::out_of_range("embedding: id " + std::to_string(ids[i]) + " out of range [0," + std::to_string(rows) + ")");
    }
    std::copy_n(src.data() + static_cast<std::size_t>(ids[i]) * width, width, out.data().data() + i * width);
  }
  std::vector<std::int32_t> idx(ids.begin(), ids.end());
  return table.tape().record(std::move(out), {table}, [table, idx = std::move(idx), width](Tape<T>& t, std::span<const T> g) {
    auto gt = t.grad_buffer(table);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      T* row = gt.data() + static_cast<std::size_t>(idx[i]) * width;
      for (std::size_t j = 0; j < width; ++j) row[j] += g[i * width + j];
    }
  });
}

template <typename T>
Var<T> dropout(const Var<T>& a, double p, bool train, Rng& rng) {
  if (!(p >= 0.0 && p < 1.0)) throw std::invalid_argument("dropout: rate must lie in [0,1), got " + std::to_string(p));
  if (!train || p == 0.0) return a;
  const T keep_scale = static_cast<T>(1.0 / (1.0 - p));
  const auto& av = a.value();
  std::vector<T> mask(av.size());
  for (auto& m : mask) m = rng.uniform() < p ? T{0} : keep_scale;
  Tensor<T> out(av.shape());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = av[i] * mask[i];
  return a.tape().record(std::move(out), {a}, [a, mask = std::move(mask)](Tape<T>& t, std::span<const T> g) {
    auto ga = t.grad_buffer(a);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * mask[i];
  });
}

template <typename T>
Var<T> cross_entropy(const Var<T>& logits, std::span<const std::int32_t> targets, std::int32_t ignore_index) {
  const Shape& s = logits.shape();
  if (s.size() != 2 || s[0] != targets.size()) {
    throw ShapeError("cross_entropy: logits " + to_string(s) + " do not match " + std::to_string(targets.size()) +
                     " targets");
  }
  const std::size_t rows = s[0], cols = s[1];
  if (cols == 0) throw ShapeError("cross_entropy: empty vocabulary axis");
  const auto x = logits.value().data();
  std::vector<T> losses;
  std::vector<T> probs(x.size(), T{0});
  std::vector<std::int32_t> tgt(targets.begin(), targets.end());
  for (std::size_t r = 0; r < rows; ++r) {
    if (tgt[r] == ignore_index) continue;
    if (tgt[r] < 0 || static_cast<std::size_t>(tgt[r]) >= cols) {
      throw std::out_of_range("cross_entropy: target id " + std::to_string(tgt[r]) + " out of range [0," +
                              std::to_string(cols) + ")");
    }
    const T* xr = x.data() + r * cols;
    T* pr = probs.data() + r * cols;
    const T mx = *std::max_element(xr, xr + cols);
    T z{0};
    for (std::size_t c = 0; c < cols; ++c) z += (pr[c] = std::exp(xr[c] - mx));
    for (std::size_t c = 0; c < cols; ++c) pr[c] /= z;
    losses.push_back(mx + std::log(z) - xr[tgt[r]]);
  }
  if (losses.empty()) throw std::invalid_argument("cross_entropy: every target is ignored");
  const std::size_t count = losses.size();
  std::sort(losses.begin(), losses.end());
  T total{0};
  for (T l : losses) total += l;
  auto out = Tensor<T>::scalar(total / static_cast<T>(count));
  return logits.tape().record(
      std::move(out), {logits},
      [logits, probs = std::move(probs), tgt = std::move(tgt), rows, cols, count, ignore_index](Tape<T>& t,
                                                                                            std::span<const T> g) {
        auto gl = t.grad_buffer(logits);
        const T w = g[0] / static_cast<T>(count);
        for (std::size_t r = 0; r < rows; ++r) {
          if (tgt[r] == ignore_index) continue;
          for (std::size_t c = 0; c < cols; ++c) gl[r * cols + c] += w * probs[r * cols + c];
          gl[r * cols + static_cast<std::size_t>(tgt[r])] -= w;
        }
      });
}

template <typename T>
Var<T> select_rows(std::span<const std::uint8_t> keep, const Var<T>& a, const Var<T>& b) {
  auto& tape = tape_of("select_rows", a, b);
  const Shape& s = a.shape();
  if (s != b.shape() || s.empty() || s[0] != keep.size()) shape_fail("select_rows", s, b.shape());
  const std::size_t width = a.value().size() / s[0];
  std::vector<std::uint8_t> flags(keep.begin(), keep.end());
  Tensor<T> out(s);
  for (std::size_t r = 0; r < flags.size(); ++r) {
    const auto& src = flags[r] ? a.value() : b.value();
    std::copy_n(src.data().data() + r * width, width, out.data().data() + r * width);
  }
  return tape.record(std::move(out), {a, b}, [a, b, flags = std::move(flags), width](Tape<T>& t, std::span<const T> g) {
    for (int side = 0; side < 2; ++side) {
      const auto& v = side == 0 ? a : b;
      if (!t.needs_grad(v)) continue;
      auto gv = t.grad_buffer(v);
      for (std::size_t r = 0; r < flags.size(); ++r) {
        if ((flags[r] != 0) != (side == 0)) continue;
        for (std::size_t j = 0; j < width; ++j) gv[r * width + j] += g[r * width + j];
      }
    }
  });
}

template <typename T>
Var<T> sum(const Var<T>& a) {
  T total{0};
  for (T v : a.value().data()) total += v;
  return a.tape().record(Tensor<T>::scalar(total), {a}, [a](Tape<T>& t, std::span<const T> g) {
    auto ga = t.grad_buffer(a);
    for (auto& v : ga) v += g[0];
  });
}

#define MMT_INSTANTIATE_OPS(T)                                                                          \
  template Var<T> matmul(const Var<T>&, const Var<T>&);                                                 \
  template Var<T> add(const Var<T>&, const Var<T>&);                                                    \
  template Var<T> sub(const Var<T>&, const Var<T>&);                                                    \
  template Var<T> mul(const Var<T>&, const Var<T>&);                                                    \
  template Var<T> scale(const Var<T>&, T);                                                              \
  template Var<T> add_scalar(const Var<T>&, T);                                                         \
  template Var<T> tanh(const Var<T>&);                                                                  \
  template Var<T> sigmoid(const Var<T>&);                                                               \
  template Var<T> exp(const Var<T>&);                                                                   \
  template Var<T> log(const Var<T>&);                                                                   \
  template Var<T> softmax(const Var<T>&);                                                               \
  template Var<T> log_softmax(const Var<T>&);                                                           \
  template Var<T> concat(std::span<const Var<T>>, std::size_t);                                         \
  template Var<T> narrow(const Var<T>&, std::size_t, std::size_t, std::size_t);                         \
  template Var<T> reshape(const Var<T>&, Shape);                                                        \
  template Var<T> repeat_axis(const Var<T>&, std::size_t, std::size_t);                                 \
  template Var<T> embedding(const Var<T>&, std::span<const std::int32_t>);                              \
  template Var<T> dropout(const Var<T>&, double, bool, Rng&);                                           \
  template Var<T> cross_entropy(const Var<T>&, std::span<const std::int32_t>, std::int32_t);            \
  template Var<T> select_rows(std::span<const std::uint8_t>, const Var<T>&, const Var<T>&);            \
  template Var<T> sum(const Var<T>&);

MMT_INSTANTIATE_OPS(float)
MMT_INSTANTIATE_OPS(double)

#undef MMT_INSTANTIATE_OPS

}  // namespace mmt::ad
