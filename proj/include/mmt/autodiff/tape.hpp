#pragma once

#include <deque>
#include <functional>
#include <initializer_list>
#include <limits>
#include <span>
#include <vector>

#include "mmt/autodiff/tensor.hpp"

namespace mmt::ad {

template <typename T>
class Tape;

/// Handle to a value recorded on a Tape.
template <typename T>
class Var {
 public:
  Var() = default;

  Tape<T>& tape() const { return *tape_; }
  std::size_t id() const noexcept { return id_; }
  bool valid() const noexcept { return tape_ != nullptr; }

  const Tensor<T>& value() const { return tape_->value(*this); }
  const Shape& shape() const { return value().shape(); }

 private:
  friend class Tape<T>;
  Var(Tape<T>* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape<T>* tape_ = nullptr;
  std::size_t id_ = std::numeric_limits<std::size_t>::max();
};

/// Records operations in execution order; backward() walks them in exact
/// reverse. A tape and its values belong to one thread. With gradients
/// disabled the tape only evaluates (no backward closures are kept).
template <typename T>
class Tape {
 public:
  using BackwardFn = std::function<void(Tape&, std::span<const T> out_grad)>;

  explicit Tape(bool grad_enabled = true) : grad_enabled_(grad_enabled) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  bool grad_enabled() const noexcept { return grad_enabled_; }
  std::size_t size() const noexcept { return nodes_.size(); }

  /// Value without gradient.
  Var<T> constant(Tensor<T> value) {
    Node n;
    n.owned = std::move(value);
    return push(std::move(n));
  }

  /// Constant that refers to caller-owned storage, which must outlive the tape.
  Var<T> borrow(const Tensor<T>& value) {
    Node n;
    n.borrowed = &value;
    return push(std::move(n));
  }

  /// Differentiable input whose gradient is kept on the tape (see grad()).
  Var<T> leaf(Tensor<T> value) {
    Node n;
    n.owned = std::move(value);
    n.requires_grad = grad_enabled_;
    return push(std::move(n));
  }

  /// Binds a parameter: its value is borrowed and backward() accumulates
  /// into p.grad (callers zero it between steps).
  Var<T> param(Parameter<T>& p) {
    Node n;
    n.borrowed = &p.value;
    if (grad_enabled_) {
      n.requires_grad = true;
      n.param = &p;
    }
    return push(std::move(n));
  }

  const Tensor<T>& value(const Var<T>& v) const { return node(v).get(); }
  bool requires_grad(const Var<T>& v) const { return node(v).requires_grad; }

  /// Gradient accumulated for a leaf by backward(); zeros when unreached.
  Tensor<T> grad(const Var<T>& v) const {
    const Node& n = node(v);
    if (n.param) return n.param->grad;
    if (n.grad.empty()) return Tensor<T>(n.get().shape());
    return Tensor<T>(n.get().shape(), n.grad);
  }

  /// Records an op result. The closure runs during backward only when the
  /// result requires a gradient; it receives d(loss)/d(result).
  Var<T> record(Tensor<T> value, std::initializer_list<Var<T>> inputs, BackwardFn fn) {
    return record(std::move(value), std::span<const Var<T>>(inputs.begin(), inputs.size()), std::move(fn));
  }

  Var<T> record(Tensor<T> value, std::span<const Var<T>> inputs, BackwardFn fn) {
    Node n;
    n.owned = std::move(value);
    if (grad_enabled_) {
      for (const auto& in : inputs) {
        if (node(in).requires_grad) n.requires_grad = true;
      }
    }
    if (n.requires_grad) n.backward = std::move(fn);
    return push(std::move(n));
  }

  bool needs_grad(const Var<T>& v) const { return node(v).requires_grad; }

  /// Gradient slot of v for accumulation inside a backward closure.
  std::span<T> grad_buffer(const Var<T>& v) {
    Node& n = node(v);
    if (n.param) return n.param->grad.data();
    if (n.grad.empty()) n.grad.assign(n.get().size(), T{0});
    return n.grad;
  }

  /// Propagates d(loss)/d(.) to every differentiable input. loss must hold a
  /// single element. May be called once per tape.
  void backward(const Var<T>& loss) {
    if (loss.valid() && loss.value().size() != 1) {
      throw ShapeError("backward: loss must be a scalar, got shape " + to_string(loss.shape()));
    }
    if (backward_done_) throw std::logic_error("backward: already run on this tape");
    backward_done_ = true;
    if (!node(loss).requires_grad) return;
    grad_buffer(loss)[0] += T{1};
    for (std::size_t i = loss.id() + 1; i-- > 0;) {
      Node& n = nodes_[i];
      if (!n.backward || n.grad.empty()) continue;
      std::vector<T> g = std::move(n.grad);
      n.grad.clear();
      n.backward(*this, g);
    }
  }

 private:
  struct Node {
    Tensor<T> owned;
    const Tensor<T>* borrowed = nullptr;
    Parameter<T>* param = nullptr;
    bool requires_grad = false;
    std::vector<T> grad;
    BackwardFn backward;

    const Tensor<T>& get() const { return borrowed ? *borrowed : owned; }
  };

  Var<T> push(Node n) {
    nodes_.push_back(std::move(n));
    return Var<T>(this, nodes_.size() - 1);
  }

  const Node& node(const Var<T>& v) const {
    check(v);
    return nodes_[v.id()];
  }
  Node& node(const Var<T>& v) {
    check(v);
    return nodes_[v.id()];
  }
  void check(const Var<T>& v) const {
    if (v.tape_ != this || v.id() >= nodes_.size()) throw std::invalid_argument("variable does not belong to this tape");
  }

  bool grad_enabled_;
  bool backward_done_ = false;
  std::deque<Node> nodes_;
};

}  // namespace mmt::ad
