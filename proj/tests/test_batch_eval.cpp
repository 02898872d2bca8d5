#include <doctest.h>

#include <cmath>

#include "pinndd/batch_eval.hpp"
#include "pinndd/rng.hpp"
#include "testutil.hpp"

using namespace pinndd;

TEST_CASE("zero input weights make the output the constant sin(pi/2)") {
  const NetworkSpec spec = NetworkSpec::mlp(1, 1);
  Params p;
  p.values.resize(spec.param_count());
  p.values << 0.0, 0.0, M_PI_2, 1.0, 0.0;  // W1 = 0, b1 = pi/2, W2 = 1, b2 = 0
  CHECK(forward(spec, p, {0.3, -1.2})(0) == doctest::Approx(1.0).epsilon(1e-15));

  const EvalBundle b = forward_derivs(spec, p, {0.3, -1.2});
  CHECK(b.grad(0, 0) == 0.0);
  CHECK(b.grad(1, 0) == 0.0);
  CHECK(b.laplacian(0) == 0.0);
}

TEST_CASE("the sin(x) realization evaluates exactly") {
  const NetworkSpec spec = NetworkSpec::mlp(1, 1);
  Params p;
  p.values.resize(spec.param_count());
  p.values << 1.0, 0.0, 0.0, 1.0, 0.0;  // u(x, y) = sin(x)
  const EvalBundle b = forward_derivs(spec, p, {0.5, 0.3});
  CHECK(b.value(0) == doctest::Approx(std::sin(0.5)).epsilon(1e-15));
  CHECK(b.grad(0, 0) == doctest::Approx(std::cos(0.5)).epsilon(1e-15));
  CHECK(b.grad(1, 0) == 0.0);
  CHECK(b.laplacian(0) == doctest::Approx(-std::sin(0.5)).epsilon(1e-15));
}

TEST_CASE("all-zero weights propagate the bias") {
  const NetworkSpec spec = NetworkSpec::mlp(17, 4);
  Params p;
  p.values = Eigen::VectorXd::Zero(spec.param_count());
  const LayerPlan plan = LayerPlan::build(spec);
  for (const LayerDesc& d : plan.layers)
    for (int k = 0; k < d.out_size; ++k) p.values[d.b_offset + k] = 0.01;
  CHECK(forward(spec, p, {0.4, 0.7})(0) == doctest::Approx(0.01).epsilon(1e-15));
}

TEST_CASE("evaluation is pure") {
  const NetworkSpec spec = NetworkSpec::mlp(9, 3);
  const Params p = init_params(spec, 3);
  const Eigen::Vector2d x{0.2, -0.4};
  const EvalBundle a = forward_derivs(spec, p, x);
  const EvalBundle b = forward_derivs(spec, p, x);
  CHECK(a.value(0) == b.value(0));
  CHECK(a.grad(0, 0) == b.grad(0, 0));
  CHECK(a.laplacian(0) == b.laplacian(0));
}

TEST_CASE("derivatives match finite differences on random networks") {
  Rng rng(21, 0);
  double max_grad = 0, max_lap = 0;
  for (int it = 0; it < 25; ++it) {
    const NetworkSpec spec = NetworkSpec::mlp(5 + static_cast<int>(rng.below(5)), 3);
    const Params p = init_params(spec, rng.next_u64());
    const Eigen::Vector2d x{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const EvalBundle b = forward_derivs(spec, p, x);
    const auto f = [&](double ax, double ay) { return forward(spec, p, {ax, ay})(0); };
    const double h = 1e-5;
    const double gx = (f(x(0) + h, x(1)) - f(x(0) - h, x(1))) / (2 * h);
    const double gy = (f(x(0), x(1) + h) - f(x(0), x(1) - h)) / (2 * h);
    const double h2 = 1e-4;
    const double lap =
        (f(x(0) + h2, x(1)) - 2 * f(x(0), x(1)) + f(x(0) - h2, x(1))) / (h2 * h2) +
        (f(x(0), x(1) + h2) - 2 * f(x(0), x(1)) + f(x(0), x(1) - h2)) / (h2 * h2);
    max_grad = std::max(max_grad, std::abs(gx - b.grad(0, 0)) / (std::abs(gx) + 1e-12));
    max_grad = std::max(max_grad, std::abs(gy - b.grad(1, 0)) / (std::abs(gy) + 1e-12));
    max_lap = std::max(max_lap, std::abs(lap - b.laplacian(0)) / (std::abs(lap) + 1e-12));
  }
  CHECK(max_grad < 1e-5);
  CHECK(max_lap < 1e-5);
}

TEST_CASE("branched networks route the split slices independently") {
  NetworkSpec spec;
  spec.hidden_widths = {6, 6};
  spec.branch = BranchSpec{2, 3, 2};
  spec.output_dim = 2;
  const Params p = init_params(spec, 11);

  // perturbing a branch-0 parameter must not change output 1
  const LayerPlan plan = LayerPlan::build(spec);
  const LayerDesc& branch0_hidden = plan.layers[2];
  Params q = p;
  q.values[branch0_hidden.w_offset] += 0.5;
  const Eigen::Vector2d x{0.3, 0.8};
  const Eigen::VectorXd before = forward(spec, p, x);
  const Eigen::VectorXd after = forward(spec, q, x);
  CHECK(before(1) == after(1));
  CHECK(before(0) != after(0));
}

TEST_CASE("an empty seed matrix yields a zero gradient") {
  const NetworkSpec spec = NetworkSpec::mlp(6, 2);
  const Params p = init_params(spec, 1);
  const PointMatrix pts = testutil::points({{0.1, 0.2}, {0.3, 0.4}});
  BatchEval eval(spec, DerivMode::full, pts);
  eval.forward(p);
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(p.size());
  eval.backward(p, Eigen::MatrixXd::Zero(8, 1), grad);
  CHECK(grad.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("squared-output loss gradient matches the hand chain rule") {
  // one hidden neuron: U = w3 sin(w1 x + w2 y + b1) + b2, loss = U^2
  const NetworkSpec spec = NetworkSpec::mlp(1, 1);
  Params p;
  p.values.resize(spec.param_count());
  const double w1 = 0.8, w2 = -0.4, b1 = 0.2, w3 = 1.7, b2 = -0.3;
  p.values << w1, w2, b1, w3, b2;
  const Eigen::Vector2d x{0.5, 0.25};

  const double z = w1 * x(0) + w2 * x(1) + b1;
  const double u = w3 * std::sin(z) + b2;

  PointMatrix pts(1, 2);
  pts << x(0), x(1);
  BatchEval eval(spec, DerivMode::value, pts);
  eval.forward(p);
  Eigen::MatrixXd seed(1, 1);
  seed(0, 0) = 2.0 * u;
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(p.size());
  eval.backward(p, seed, grad);

  CHECK(grad[0] == doctest::Approx(2 * u * w3 * std::cos(z) * x(0)).epsilon(1e-13));
  CHECK(grad[1] == doctest::Approx(2 * u * w3 * std::cos(z) * x(1)).epsilon(1e-13));
  CHECK(grad[2] == doctest::Approx(2 * u * w3 * std::cos(z)).epsilon(1e-13));
  CHECK(grad[3] == doctest::Approx(2 * u * std::sin(z)).epsilon(1e-13));
  CHECK(grad[4] == doctest::Approx(2 * u).epsilon(1e-13));
}

TEST_CASE("full-batch residual loss gradient matches finite differences") {
  // the 4x10 configuration named in the module contract
  const NetworkSpec spec = NetworkSpec::mlp(10, 4);
  const Params p = init_params(spec, 77);
  Rng rng(77, 1);
  PointMatrix pts(16, 2);
  for (int k = 0; k < 16; ++k) {
    pts(k, 0) = rng.uniform(0, 1);
    pts(k, 1) = rng.uniform(0, 1);
  }
  Eigen::VectorXd fvals(16);
  for (int k = 0; k < 16; ++k) fvals(k) = rng.uniform(-2, 2);

  const auto loss_of = [&](const Params& q) {
    BatchEval e(spec, DerivMode::full, pts);
    e.forward(q);
    return (e.lap().col(0) + fvals).squaredNorm() / 16.0;
  };

  BatchEval eval(spec, DerivMode::full, pts);
  eval.forward(p);
  Eigen::MatrixXd seeds = Eigen::MatrixXd::Zero(64, 1);
  seeds.block(48, 0, 16, 1) = (2.0 / 16.0) * (eval.lap().col(0) + fvals);
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(p.size());
  eval.backward(p, seeds, grad);

  double max_rel = 0;
  for (int i = 0; i < p.size(); ++i) {
    const double h = 1e-5 * (1.0 + std::abs(p.values[i]));
    Params pp = p, pm = p;
    pp.values[i] += h;
    pm.values[i] -= h;
    const double fd = (loss_of(pp) - loss_of(pm)) / (2 * h);
    max_rel = std::max(max_rel, std::abs(fd - grad[i]) / (std::abs(grad[i]) + 1e-12));
  }
  CHECK(max_rel < 1e-6);
}

TEST_CASE("chunked inference is chunk-size independent") {
  const NetworkSpec spec = NetworkSpec::mlp(12, 3);
  const Params p = init_params(spec, 5);
  Rng rng(5, 9);
  PointMatrix pts(100, 2);
  for (int k = 0; k < 100; ++k) {
    pts(k, 0) = rng.uniform(-1, 1);
    pts(k, 1) = rng.uniform(-1, 1);
  }
  const Eigen::MatrixXd a = infer_values(spec, p, pts, 7);
  const Eigen::MatrixXd b = infer_values(spec, p, pts, 100);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
}
