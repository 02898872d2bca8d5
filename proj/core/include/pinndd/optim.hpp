#pragma once

#include <Eigen/Core>

#include "pinndd/network.hpp"

namespace pinndd {

/// Adam with bias correction; epsilon is added outside the square root.
struct AdamState {
  Eigen::VectorXd first_moment;
  Eigen::VectorXd second_moment;
  long step_count = 0;
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  static AdamState create(int param_count, double lr = 0.001);
};

/// One full-batch Adam step. Throws on length mismatch; a non-finite gradient
/// entry aborts the step (state and params untouched) with std::domain_error.
void adam_step(AdamState& state, Params& params, const Eigen::VectorXd& grad);

/// Gradient-ascent learning rates for the Lagrange multipliers.
struct AscentRates {
  double alpha0 = 0.0;        // boundary multipliers
  double alpha_lambda = 0.0;  // interface multipliers
  double alpha_d = 0.0;       // divergence multipliers
};

/// lambda'(x) = lambda(x) + rate * residual(x), componentwise.
void ascent_step(Eigen::Ref<Eigen::VectorXd> multipliers,
                 const Eigen::Ref<const Eigen::VectorXd>& residuals, double rate);
void ascent_step(Eigen::Ref<Eigen::MatrixXd> multipliers,
                 const Eigen::Ref<const Eigen::MatrixXd>& residuals, double rate);

}  // namespace pinndd
