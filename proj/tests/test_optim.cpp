#include <doctest.h>

#include <cmath>

#include "pinndd/optim.hpp"

using namespace pinndd;

TEST_CASE("zero gradient leaves the parameters unchanged") {
  Params p;
  p.values = Eigen::Vector3d{1.0, -2.0, 0.5};
  AdamState s = AdamState::create(3);
  adam_step(s, p, Eigen::Vector3d::Zero());
  CHECK(p.values(0) == 1.0);
  CHECK(p.values(1) == -2.0);
  CHECK(p.values(2) == 0.5);
  CHECK(s.step_count == 1);
}

TEST_CASE("first step matches the hand-evaluated recurrence") {
  // theta=0, g=2: m_hat=2, v_hat=4, step = -lr * 2 / (2 + eps)
  Params p;
  p.values = Eigen::VectorXd::Zero(1);
  AdamState s = AdamState::create(1);
  Eigen::VectorXd g(1);
  g << 2.0;
  adam_step(s, p, g);
  CHECK(p.values(0) == doctest::Approx(-0.000999999995).epsilon(1e-12));
}

TEST_CASE("adam steps are deterministic") {
  const auto run = [] {
    Params p;
    p.values = Eigen::Vector2d{0.3, -0.7};
    AdamState s = AdamState::create(2);
    for (int i = 0; i < 50; ++i) {
      const Eigen::Vector2d g{std::sin(i * 0.1) + p.values(0), p.values(1) * 0.5};
      adam_step(s, p, g);
    }
    return p.values;
  };
  const Eigen::VectorXd a = run();
  const Eigen::VectorXd b = run();
  CHECK(a == b);
}

TEST_CASE("errors: length mismatch and non-finite gradients") {
  Params p;
  p.values = Eigen::Vector2d{0.0, 0.0};
  AdamState s = AdamState::create(2);
  CHECK_THROWS_AS(adam_step(s, p, Eigen::Vector3d::Zero()), std::invalid_argument);

  Eigen::VectorXd bad(2);
  bad << 1.0, std::nan("");
  CHECK_THROWS_AS(adam_step(s, p, bad), std::domain_error);
  CHECK(p.values(0) == 0.0);  // step aborted, parameters untouched
  CHECK(s.step_count == 0);
}

TEST_CASE("one step decreases a positive-definite quadratic") {
  // f(theta) = theta' diag(2, 5) theta, gradient 2*diag*theta
  Params p;
  p.values = Eigen::Vector2d{0.8, -0.6};
  AdamState s = AdamState::create(2, 0.001);
  const auto f = [](const Eigen::VectorXd& t) { return 2 * t(0) * t(0) + 5 * t(1) * t(1); };
  const double before = f(p.values);
  const Eigen::Vector2d g{4 * p.values(0), 10 * p.values(1)};
  adam_step(s, p, g);
  CHECK(f(p.values) < before);
}

TEST_CASE("ascent step arithmetic and properties") {
  Eigen::VectorXd lambda(1), residual(1);
  lambda << 0.3;
  residual << -0.5;
  ascent_step(lambda, residual, 0.1);
  CHECK(lambda(0) == doctest::Approx(0.25).epsilon(1e-15));

  // rate 0 is the identity
  Eigen::VectorXd l2(3);
  l2 << 1, 2, 3;
  const Eigen::VectorXd before = l2;
  ascent_step(l2, Eigen::Vector3d{9, 9, 9}, 0.0);
  CHECK(l2 == before);

  // k constant-residual applications accumulate k * rate * r
  Eigen::VectorXd l3 = Eigen::VectorXd::Zero(1);
  Eigen::VectorXd r3(1);
  r3 << 0.7;
  for (int k = 0; k < 8; ++k) ascent_step(l3, r3, 0.05);
  CHECK(l3(0) == doctest::Approx(8 * 0.05 * 0.7).epsilon(1e-13));

  // linearity: ascent(l1 + l2, r, a) = ascent(l1, r, a) + l2
  Eigen::VectorXd la(2), lb(2), r(2);
  la << 0.2, -0.4;
  lb << 1.5, 2.5;
  r << 0.3, 0.6;
  Eigen::VectorXd sum = la + lb;
  ascent_step(sum, r, 0.1);
  Eigen::VectorXd only_a = la;
  ascent_step(only_a, r, 0.1);
  CHECK((sum - (only_a + lb)).cwiseAbs().maxCoeff() < 1e-15);

  Eigen::VectorXd short_lambda(2);
  CHECK_THROWS_AS(ascent_step(short_lambda, Eigen::Vector3d::Zero(), 0.1),
                  std::invalid_argument);
}
