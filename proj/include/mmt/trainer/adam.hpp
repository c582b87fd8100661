#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "mmt/autodiff/tensor.hpp"

namespace mmt::trainer {

class NonFiniteGradient : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AdamOptions {
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// First/second moment estimates per parameter and the step counter.
template <typename T>
struct AdamState {
  std::vector<std::vector<T>> m;
  std::vector<std::vector<T>> v;
  std::uint64_t t = 0;

  static AdamState zeros_like(const ad::ParamStore<T>& params);
};

/// One Adam update over every parameter:
///   t += 1; m = b1 m + (1-b1) g; v = b2 v + (1-b2) g^2
///   theta -= lr * (m / (1-b1^t)) / (sqrt(v / (1-b2^t)) + eps)
/// Every gradient is checked first; a NaN/Inf aborts the step (nothing is
/// modified) with NonFiniteGradient naming the parameter.
template <typename T>
void adam_step(ad::ParamStore<T>& params, AdamState<T>& state, const AdamOptions& options);

/// Scales all gradients so their global L2 norm is at most max_norm.
/// Returns the norm before clipping.
template <typename T>
double clip_grad_norm(ad::ParamStore<T>& params, double max_norm);

}  // namespace mmt::trainer
