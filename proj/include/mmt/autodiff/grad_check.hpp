#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mmt/autodiff/tape.hpp"

namespace mmt::ad {

/// |analytic - numeric| / max(|analytic|, |numeric|, 1e-8)
double relative_error(double analytic, double numeric);

/// Compares the tape gradient of scalar f at x with central differences of
/// step eps; returns the largest relative error over the elements of x.
double grad_check(const std::function<Var<double>(Var<double>)>& f, const Tensor<double>& x, double eps = 1e-5);

struct ParamGradError {
  std::string name;
  double max_relative_error = 0.0;
};

/// Same check for every element of every parameter of `params`. `loss`
/// builds the scalar loss on the tape it is given (binding parameters with
/// Tape::param) and must be deterministic. Parameter grads are overwritten.
std::vector<ParamGradError> grad_check_params(ParamStore<double>& params,
                                              const std::function<Var<double>(Tape<double>&)>& loss,
                                              double eps = 1e-5);

}  // namespace mmt::ad
