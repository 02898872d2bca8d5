#include <doctest.h>

#include <cmath>

#include "pinndd/geometry.hpp"
#include "pinndd/rng.hpp"

using namespace pinndd;

TEST_CASE("grid cells are numbered row-major from the bottom-left corner") {
  const PartitionModel p = PartitionModel::grid({0, 1, 0, 1}, 2, 2);
  CHECK(p.subdomain_count() == 4);
  CHECK(p.locate({0.25, 0.25}) == 0);
  CHECK(p.locate({0.75, 0.25}) == 1);
  CHECK(p.locate({0.25, 0.75}) == 2);
  CHECK(p.locate({0.75, 0.75}) == 3);
}

TEST_CASE("locate applies the half-open tie rules") {
  const PartitionModel p2 = PartitionModel::grid({0, 1, 0, 1}, 2, 1);
  CHECK(p2.locate({0.5, 0.25}) == 1);   // boundary point belongs to the right cell
  CHECK(p2.locate({1.0, 0.25}) == 1);   // last cell is closed
  CHECK(p2.locate({0.0, 0.25}) == 0);

  // a cell width that is not representable exactly
  const PartitionModel p3 = PartitionModel::grid({0, 1, 0, 1}, 3, 1);
  const double third = 1.0 / 3.0;
  CHECK(p3.locate({third, 0.5}) == 1);
  CHECK(p3.locate({2 * third, 0.5}) == 2);

  const PartitionModel radial = PartitionModel::radial({-1, 1, -1, 1}, {0.5, 0.8});
  CHECK(radial.locate({0.2, 0.0}) == 0);
  CHECK(radial.locate({0.5, 0.0}) == 1);  // r = 0.5 belongs to the annulus
  CHECK(radial.locate({0.6, 0.0}) == 1);
  CHECK(radial.locate({0.8, 0.0}) == 2);
  CHECK(radial.locate({0.95, 0.2}) == 2);
}

TEST_CASE("canonical normals point outward from the higher-index subdomain") {
  const PartitionModel grid = PartitionModel::grid({0, 1, 0, 1}, 2, 1);
  REQUIRE(grid.interfaces().size() == 1);
  const Interface& vertical = grid.interfaces()[0];
  CHECK(vertical.hi == 1);
  CHECK(vertical.lo == 0);
  const Eigen::Vector2d n = vertical.normal_at({0.5, 0.3});
  CHECK(n(0) == -1.0);
  CHECK(n(1) == 0.0);

  const PartitionModel radial = PartitionModel::radial({-1, 1, -1, 1}, {0.5, 0.8});
  const Interface& inner = radial.interfaces()[0];
  CHECK(inner.hi == 1);
  const Eigen::Vector2d nc = inner.normal_at({0.5, 0.0});
  CHECK(nc(0) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(nc(1) == doctest::Approx(0.0).epsilon(1e-15));

  // unit length at random interface points
  Rng rng(3, 0);
  double worst = 0;
  for (int k = 0; k < 1000; ++k) {
    const double s = rng.uniform(0, 2 * M_PI);
    const Eigen::Vector2d x{0.5 * std::cos(s), 0.5 * std::sin(s)};
    worst = std::max(worst, std::abs(inner.normal_at(x).norm() - 1.0));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("horizontal interfaces carry the downward canonical normal") {
  const PartitionModel grid = PartitionModel::grid({0, 1, 0, 1}, 1, 2);
  REQUIRE(grid.interfaces().size() == 1);
  const Eigen::Vector2d n = grid.interfaces()[0].normal_at({0.5, 0.5});
  CHECK(n(0) == 0.0);
  CHECK(n(1) == -1.0);
}

TEST_CASE("neighbor sets are ascending and interfaces split into components") {
  const PartitionModel p = PartitionModel::grid({0, 1, 0, 1}, 3, 3);
  CHECK(p.interfaces().size() == 12);  // 2 vertical + 2 horizontal lines, 3 segments each
  CHECK(p.components().size() == 4);
  const std::vector<int> n4 = p.neighbors(4);  // center cell
  CHECK(n4 == std::vector<int>{1, 3, 5, 7});
  CHECK(p.touches_boundary(4) == false);
  CHECK(p.touches_boundary(0) == true);

  const PartitionModel radial = PartitionModel::radial({-1, 1, -1, 1}, {0.5, 0.8});
  CHECK(radial.touches_boundary(0) == false);
  CHECK(radial.touches_boundary(1) == false);
  CHECK(radial.touches_boundary(2) == true);
}

TEST_CASE("interface containment tests") {
  const PartitionModel grid = PartitionModel::grid({0, 1, 0, 1}, 2, 1);
  const Interface& f = grid.interfaces()[0];
  CHECK(f.contains({0.5, 0.7}));
  CHECK(!f.contains({0.5001, 0.7}));
  CHECK(!f.contains({0.5, 1.2}));

  const PartitionModel radial = PartitionModel::radial({-2, 2, -2, 2}, {1.0});
  const Interface& circle = radial.interfaces()[0];
  CHECK(circle.contains({std::cos(1.1), std::sin(1.1)}));
  CHECK(!circle.contains({1.01, 0.0}));
}

TEST_CASE("construction rejects invalid shapes") {
  CHECK_THROWS_AS(PartitionModel::grid({0, 1, 0, 1}, 0, 2), std::invalid_argument);
  CHECK_THROWS_AS(PartitionModel::radial({0, 1, 0, 1}, {}), std::invalid_argument);
  CHECK_THROWS_AS(PartitionModel::radial({0, 1, 0, 1}, {0.8, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(PartitionModel::radial({-1, 1, -1, 1}, {1.5}), std::invalid_argument);
}
