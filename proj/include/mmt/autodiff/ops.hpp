#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mmt/autodiff/tape.hpp"
#include "mmt/common/rng.hpp"

namespace mmt::ad {

// Differentiable operations. Binary elementwise ops accept equal shapes, or a
// second operand whose shape equals the trailing dims of the first (broadcast
// over leading dims only); anything else throws ShapeError naming the op.

/// [m,k] x [k,n] -> [m,n], or batched [B,m,k] x [B,k,n] -> [B,m,n].
template <typename T> Var<T> matmul(const Var<T>& a, const Var<T>& b);

template <typename T> Var<T> add(const Var<T>& a, const Var<T>& b);
template <typename T> Var<T> sub(const Var<T>& a, const Var<T>& b);
template <typename T> Var<T> mul(const Var<T>& a, const Var<T>& b);
template <typename T> Var<T> scale(const Var<T>& a, T s);
template <typename T> Var<T> add_scalar(const Var<T>& a, T s);

template <typename T> Var<T> tanh(const Var<T>& a);
template <typename T> Var<T> sigmoid(const Var<T>& a);
template <typename T> Var<T> exp(const Var<T>& a);
template <typename T> Var<T> log(const Var<T>& a);

/// Along the last axis.
template <typename T> Var<T> softmax(const Var<T>& a);
template <typename T> Var<T> log_softmax(const Var<T>& a);

/// Joins along `axis`; all other dims must agree.
template <typename T> Var<T> concat(std::span<const Var<T>> parts, std::size_t axis);
template <typename T> Var<T> concat(std::initializer_list<Var<T>> parts, std::size_t axis) {
  return concat(std::span<const Var<T>>(parts.begin(), parts.size()), axis);
}

/// Slice [start, start+length) of `axis`.
template <typename T> Var<T> narrow(const Var<T>& a, std::size_t axis, std::size_t start, std::size_t length);
template <typename T> Var<T> reshape(const Var<T>& a, Shape shape);
/// Inserts a new axis of size n at position `axis` by repetition.
template <typename T> Var<T> repeat_axis(const Var<T>& a, std::size_t axis, std::size_t n);

/// Row gather from a [V,E] table -> [ids.size(), E].
template <typename T> Var<T> embedding(const Var<T>& table, std::span<const std::int32_t> ids);

/// Inverted dropout. Identity (same handle) when !train or p == 0; otherwise
/// each element is zeroed with probability p (one rng.uniform() per element,
/// dropped when < p) and survivors scaled by 1/(1-p). Requires 0 <= p < 1.
template <typename T> Var<T> dropout(const Var<T>& a, double p, bool train, Rng& rng);

/// Mean negative log-likelihood of `targets` under row-wise softmax of
/// [N,V] logits, skipping rows whose target equals ignore_index. Per-row
/// losses are summed in ascending order so the value does not depend on row
/// order.
template <typename T>
Var<T> cross_entropy(const Var<T>& logits, std::span<const std::int32_t> targets, std::int32_t ignore_index = -1);

/// Row r of the result is a[r] where keep[r] != 0, else b[r]; a and b share
/// a shape whose leading dim equals keep.size(). Exact (no arithmetic blend).
template <typename T>
Var<T> select_rows(std::span<const std::uint8_t> keep, const Var<T>& a, const Var<T>& b);

/// Sum of all elements -> scalar.
template <typename T> Var<T> sum(const Var<T>& a);

}  // namespace mmt::ad
