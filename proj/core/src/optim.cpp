#include "pinndd/optim.hpp"

#include <cmath>
#include <stdexcept>

namespace pinndd {

AdamState AdamState::create(int param_count, double lr) {
  AdamState s;
  s.first_moment = Eigen::VectorXd::Zero(param_count);
  s.second_moment = Eigen::VectorXd::Zero(param_count);
  s.lr = lr;
  return s;
}

void adam_step(AdamState& state, Params& params, const Eigen::VectorXd& grad) {
  if (grad.size() != params.values.size() || grad.size() != state.first_moment.size())
    throw std::invalid_argument("adam_step: length mismatch");
  if (!grad.allFinite())
    throw std::domain_error("adam_step: non-finite gradient entry, step aborted");

  state.step_count += 1;
  state.first_moment = state.beta1 * state.first_moment + (1.0 - state.beta1) * grad;
  state.second_moment =
      state.beta2 * state.second_moment.array() + (1.0 - state.beta2) * grad.array().square();
  const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step_count));
  const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step_count));
  params.values.array() -=
      state.lr * (state.first_moment.array() / c1) /
      ((state.second_moment.array() / c2).sqrt() + state.epsilon);
}

void ascent_step(Eigen::Ref<Eigen::VectorXd> multipliers,
                 const Eigen::Ref<const Eigen::VectorXd>& residuals, double rate) {
  if (multipliers.size() != residuals.size())
    throw std::invalid_argument("ascent_step: length mismatch");
  multipliers += rate * residuals;
}

void ascent_step(Eigen::Ref<Eigen::MatrixXd> multipliers,
                 const Eigen::Ref<const Eigen::MatrixXd>& residuals, double rate) {
  if (multipliers.rows() != residuals.rows() || multipliers.cols() != residuals.cols())
    throw std::invalid_argument("ascent_step: length mismatch");
  multipliers += rate * residuals;
}

}  // namespace pinndd
