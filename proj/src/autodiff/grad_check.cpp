#include "mmt/autodiff/grad_check.hpp"

#include <algorithm>
#include <cmath>

namespace mmt::ad {

double relative_error(double analytic, double numeric) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
  return std::abs(analytic - numeric) / denom;
}

double grad_check(const std::function<Var<double>(Var<double>)>& f, const Tensor<double>& x, double eps) {
  Tensor<double> analytic;
  {
    Tape<double> tape;
    const auto xv = tape.leaf(x);
    tape.backward(f(xv));
    analytic = tape.grad(xv);
  }
  const auto eval = [&](const Tensor<double>& at) {
    Tape<double> tape(false);
    return f(tape.leaf(at)).value()[0];
  };
  double worst = 0.0;
  Tensor<double> probe = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + eps;
    const double up = eval(probe);
    probe[i] = x[i] - eps;
    const double down = eval(probe);
    probe[i] = x[i];
    worst = std::max(worst, relative_error(analytic[i], (up - down) / (2.0 * eps)));
  }
  return worst;
}

std::vector<ParamGradError> grad_check_params(ParamStore<double>& params,
                                              const std::function<Var<double>(Tape<double>&)>& loss,
                                              double eps) {
  params.zero_grad();
  {
    Tape<double> tape;
    tape.backward(loss(tape));
  }
  const auto eval = [&] {
    Tape<double> tape(false);
    return loss(tape).value()[0];
  };
  std::vector<ParamGradError> report;
  for (auto& p : params) {
    ParamGradError entry{p.name, 0.0};
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      const double saved = p.value[i];
      p.value[i] = saved + eps;
      const double up = eval();
      p.value[i] = saved - eps;
      const double down = eval();
      p.value[i] = saved;
      entry.max_relative_error =
          std::max(entry.max_relative_error, relative_error(p.grad[i], (up - down) / (2.0 * eps)));
    }
    report.push_back(std::move(entry));
  }
  return report;
}

}  // namespace mmt::ad
