#include "mmt/trainer/adam.hpp"

#include <cmath>

namespace mmt::trainer {

template <typename T>
AdamState<T> AdamState<T>::zeros_like(const ad::ParamStore<T>& params) {
  AdamState s;
  for (const auto& p : params) {
    s.m.emplace_back(p.value.size(), T{0});
    s.v.emplace_back(p.value.size(), T{0});
  }
  return s;
}

template <typename T>
void adam_step(ad::ParamStore<T>& params, AdamState<T>& state, const AdamOptions& options) {
  if (state.m.size() != params.size() || state.v.size() != params.size()) {
    throw std::invalid_argument("adam_step: optimizer state does not match the parameter set");
  }
  std::size_t i = 0;
  for (const auto& p : params) {
    if (p.grad.size() != p.value.size() || state.m[i].size() != p.value.size()) {
      throw std::invalid_argument("adam_step: shape mismatch for parameter '" + p.name + "'");
    }
    for (T g : p.grad.data()) {
      if (!std::isfinite(g)) throw NonFiniteGradient("non-finite gradient in parameter '" + p.name + "'");
    }
    ++i;
  }

  state.t += 1;
  const double t = static_cast<double>(state.t);
  const T b1 = static_cast<T>(options.beta1), b2 = static_cast<T>(options.beta2);
  const T c1 = static_cast<T>(1.0 - std::pow(options.beta1, t));
  const T c2 = static_cast<T>(1.0 - std::pow(options.beta2, t));
  const T lr = static_cast<T>(options.lr), eps = static_cast<T>(options.eps);
  i = 0;
  for (auto& p : params) {
    auto& m = state.m[i];
    auto& v = state.v[i];
    auto theta = p.value.data();
    const auto grad = p.grad.data();
    for (std::size_t k = 0; k < theta.size(); ++k) {
      const T g = grad[k];
      m[k] = b1 * m[k] + (T{1} - b1) * g;
      v[k] = b2 * v[k] + (T{1} - b2) * g * g;
      const T m_hat = m[k] / c1;
      const T v_hat = v[k] / c2;
      theta[k] -= lr * m_hat / (std::sqrt(v_hat) + eps);
    }
    ++i;
  }
}

template <typename T>
double clip_grad_norm(ad::ParamStore<T>& params, double max_norm) {
  double sq = 0.0;
  for (const auto& p : params) {
    for (T g : p.grad.data()) sq += static_cast<double>(g) * static_cast<double>(g);
  }
  const double norm = std::sqrt(sq);
  if (max_norm > 0.0 && norm > max_norm) {
    const T factor = static_cast<T>(max_norm / norm);
    for (auto& p : params) {
      for (auto& g : p.grad.data()) g *= factor;
    }
  }
  return norm;
}

template struct AdamState<float>;
template struct AdamState<double>;
template void adam_step(ad::ParamStore<float>&, AdamState<float>&, const AdamOptions&);
template void adam_step(ad::ParamStore<double>&, AdamState<double>&, const AdamOptions&);
template double clip_grad_norm(ad::ParamStore<float>&, double);
template double clip_grad_norm(ad::ParamStore<double>&, double);

}  // namespace mmt::trainer
