#include <doctest.h>

#include <cmath>

#include "pinndd/metrics.hpp"
#include "testutil.hpp"

using namespace pinndd;

TEST_CASE("relative l2 arithmetic") {
  Eigen::VectorXd exact(2), predicted(2);
  exact << 3, 4;
  predicted << 3, 0;
  CHECK(relative_l2(exact, predicted) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(relative_l2(exact, exact) == 0.0);
  CHECK(relative_l2(exact, Eigen::VectorXd::Zero(2)) == doctest::Approx(1.0).epsilon(1e-15));

  // scale awareness: scaling both arrays leaves the error unchanged
  const double e = relative_l2(exact, predicted);
  CHECK(relative_l2(5.0 * exact, 5.0 * predicted) == doctest::Approx(e).epsilon(1e-15));

  CHECK_THROWS_AS(relative_l2(Eigen::VectorXd::Zero(2), Eigen::VectorXd::Zero(2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(relative_l2(exact, Eigen::VectorXd::Zero(3)), std::invalid_argument);
}

TEST_CASE("the evaluation grid is inclusive with even spacing") {
  const PointMatrix grid = evaluation_grid({0, 1, 0, 1}, 501);
  CHECK(grid.rows() == 251001);
  CHECK(grid(0, 0) == 0.0);
  CHECK(grid(0, 1) == 0.0);
  CHECK(grid(251000, 0) == 1.0);
  CHECK(grid(251000, 1) == 1.0);
  CHECK(grid(1, 0) == doctest::Approx(1.0 / 500.0).epsilon(1e-15));
  CHECK(grid(501, 1) == doctest::Approx(1.0 / 500.0).epsilon(1e-15));
}

TEST_CASE("grid evaluation against a hand-computed constant prediction") {
  const auto problem = make_problem("poisson_smooth");
  const PartitionModel partition = PartitionModel::grid(problem->domain(), 2, 1);
  const NetworkSpec spec = NetworkSpec::mlp(4, 2);
  const std::vector<NetworkSpec> specs(2, spec);
  const std::vector<Params> params(2, testutil::constant_net(spec, 0.3));

  const int per_axis = 11;
  const ErrorReport report = evaluate_on_grid(*problem, partition, specs, params, per_axis);

  double num = 0, den = 0;
  for (int iy = 0; iy < per_axis; ++iy)
    for (int ix = 0; ix < per_axis; ++ix) {
      const double u =
          problem->exact({ix / double(per_axis - 1), iy / double(per_axis - 1)})(0);
      num += (u - 0.3) * (u - 0.3);
      den += u * u;
    }
  CHECK(report.epsilon_u == doctest::Approx(std::sqrt(num / den)).epsilon(1e-12));
  CHECK(report.per_subdomain.size() == 2);
  CHECK_FALSE(report.epsilon_p.has_value());
}

TEST_CASE("grid evaluation is deterministic") {
  const auto problem = make_problem("poisson_smooth");
  const PartitionModel partition = PartitionModel::grid(problem->domain(), 2, 1);
  const NetworkSpec spec = NetworkSpec::mlp(6, 2);
  const std::vector<NetworkSpec> specs(2, spec);
  const std::vector<Params> params = {init_params(spec, 1, 0), init_params(spec, 1, 1)};
  const ErrorReport a = evaluate_on_grid(*problem, partition, specs, params, 51);
  const ErrorReport b = evaluate_on_grid(*problem, partition, specs, params, 51);
  CHECK(a.epsilon_u == b.epsilon_u);
}

TEST_CASE("stokes grid evaluation reports pressure and gauge errors") {
  const auto problem = make_problem("stokes_interface");
  const PartitionModel partition = problem->default_partition();
  const NetworkSpec spec = problem->default_network(2);
  const std::vector<NetworkSpec> specs(2, spec);
  const std::vector<Params> params = {init_params(spec, 2, 0), init_params(spec, 2, 1)};
  const ErrorReport report = evaluate_on_grid(*problem, partition, specs, params, 41);
  REQUIRE(report.epsilon_p.has_value());
  REQUIRE(report.epsilon_p_gauge.has_value());
  CHECK(*report.epsilon_p_gauge <= *report.epsilon_p + 1e-15);
  CHECK(report.epsilon_u > 0);
}

TEST_CASE("aggregate mean and sample standard deviation") {
  const Aggregate a = aggregate({2, 2, 2});
  CHECK(a.mean == 2.0);
  CHECK(*a.std_dev == 0.0);

  const Aggregate b = aggregate({1, 3});
  CHECK(b.mean == 2.0);
  CHECK(*b.std_dev == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

  const Aggregate c = aggregate({3, 1});
  CHECK(c.mean == b.mean);
  CHECK(*c.std_dev == *b.std_dev);

  CHECK_FALSE(aggregate({5}).std_dev.has_value());
  CHECK_THROWS_AS(aggregate({}), std::invalid_argument);
}
