#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "pinndd/sampling.hpp"

using namespace pinndd;

namespace {

// each of the n equal strata must hold exactly one point
bool stratified(const std::vector<double>& xs, double lo, double hi) {
  const int n = static_cast<int>(xs.size());
  std::vector<int> counts(n, 0);
  for (double x : xs) {
    const int k = std::clamp(static_cast<int>((x - lo) / (hi - lo) * n), 0, n - 1);
    counts[k]++;
  }
  return std::all_of(counts.begin(), counts.end(), [](int c) { return c == 1; });
}

}  // namespace

TEST_CASE("latin hypercube stratification holds per axis") {
  for (int n : {1, 2, 7, 50, 333}) {
    for (std::uint64_t seed : {1ULL, 9ULL, 123ULL}) {
      const std::vector<double> xs = latin_hypercube_1d(n, -2.0, 3.0, seed, 0);
      CHECK(stratified(xs, -2.0, 3.0));
      const PointMatrix pts = latin_hypercube_2d(n, {0, 1, 0, 1}, seed, 1);
      std::vector<double> col0(n), col1(n);
      for (int k = 0; k < n; ++k) {
        col0[k] = pts(k, 0);
        col1[k] = pts(k, 1);
      }
      CHECK(stratified(col0, 0, 1));
      CHECK(stratified(col1, 0, 1));
    }
  }
}

TEST_CASE("latin hypercube draws are deterministic and validated") {
  const auto a = latin_hypercube_1d(40, 0, 1, 7, 3);
  const auto b = latin_hypercube_1d(40, 0, 1, 7, 3);
  CHECK(a == b);
  CHECK_THROWS_AS(latin_hypercube_1d(0, 0, 1, 7, 3), std::invalid_argument);
  CHECK_THROWS_AS(latin_hypercube_1d(5, 1, 1, 7, 3), std::invalid_argument);

  // n = 2: one coordinate in each half
  const auto two = latin_hypercube_1d(2, 0, 1, 11, 0);
  CHECK(((two[0] < 0.5) != (two[1] < 0.5)));
}

TEST_CASE("interior samples partition the global draw") {
  const PartitionModel p = PartitionModel::grid({0, 1, 0, 1}, 2, 2);
  SamplePlan plan;
  plan.interior = 2000;
  plan.boundary_per_edge = 200;
  plan.interface_default = 200;
  const SampleSet s = build_samples(p, plan, 1);
  long total = 0;
  for (const auto& pts : s.interior) {
    CHECK(pts.rows() > 0);
    total += pts.rows();
  }
  CHECK(total == 2000);
  // every interior point satisfies its subdomain predicate
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < s.interior[i].rows(); ++k)
      CHECK(p.locate(s.interior[i].row(k).transpose()) == i);

  // 2 full interface lines at 200 points each
  long iface_total = 0;
  for (const auto& pts : s.interface_pts) iface_total += pts.rows();
  CHECK(iface_total == 400);

  // 200 per domain edge, assigned by membership
  long bd_total = 0;
  for (const auto& pts : s.boundary) bd_total += pts.rows();
  CHECK(bd_total == 800);
}

TEST_CASE("interface lines of larger grids carry 200 points each") {
  const PartitionModel p9 = PartitionModel::grid({0, 1, 0, 1}, 3, 3);
  SamplePlan plan;
  plan.interior = 2000;
  plan.boundary_per_edge = 200;
  plan.interface_default = 200;
  const SampleSet s = build_samples(p9, plan, 4);
  long iface_total = 0;
  for (const auto& pts : s.interface_pts) iface_total += pts.rows();
  CHECK(iface_total == 800);  // 4 lines x 200

  const PartitionModel p16 = PartitionModel::grid({0, 1, 0, 1}, 4, 4);
  const SampleSet s16 = build_samples(p16, plan, 4);
  iface_total = 0;
  for (const auto& pts : s16.interface_pts) iface_total += pts.rows();
  CHECK(iface_total == 1200);  // 6 lines x 200
}

TEST_CASE("circle samples land on the circle to machine precision") {
  const PartitionModel p = PartitionModel::radial({-1, 1, -1, 1}, {0.5, 0.8});
  SamplePlan plan;
  plan.interior = 2000;
  plan.boundary_per_edge = 100;
  plan.interface_counts = {150, 300};
  const SampleSet s = build_samples(p, plan, 2);
  REQUIRE(s.interface_pts.size() == 2);
  CHECK(s.interface_pts[0].rows() == 150);
  CHECK(s.interface_pts[1].rows() == 300);
  double worst = 0;
  for (int k = 0; k < 150; ++k) {
    const double r2 = s.interface_pts[0].row(k).squaredNorm();
    worst = std::max(worst, std::abs(r2 - 0.25));
  }
  CHECK(worst < 1e-12);

  // the inner subdomains touch no outer boundary
  CHECK(s.boundary[0].rows() == 0);
  CHECK(s.boundary[1].rows() == 0);
  CHECK(s.boundary[2].rows() == 400);
}

TEST_CASE("sampling is seed-deterministic and seeds differ") {
  const PartitionModel p = PartitionModel::grid({0, 1, 0, 1}, 2, 1);
  SamplePlan plan;
  plan.interior = 100;
  plan.boundary_per_edge = 10;
  plan.interface_default = 20;
  const SampleSet a = build_samples(p, plan, 5);
  const SampleSet b = build_samples(p, plan, 5);
  const SampleSet c = build_samples(p, plan, 6);
  CHECK(a.interior[0] == b.interior[0]);
  CHECK(a.interface_pts[0] == b.interface_pts[0]);
  CHECK(a.interior[0] != c.interior[0]);
}

TEST_CASE("sample sets survive the JSON round trip bitwise") {
  const PartitionModel p = PartitionModel::grid({0, 1, 0, 1}, 2, 1);
  SamplePlan plan;
  plan.interior = 50;
  plan.boundary_per_edge = 5;
  plan.interface_default = 10;
  const SampleSet a = build_samples(p, plan, 3);
  const SampleSet b = sample_set_from_json(sample_set_to_json(a));
  CHECK(a.seed == b.seed);
  REQUIRE(a.interior.size() == b.interior.size());
  for (std::size_t i = 0; i < a.interior.size(); ++i) CHECK(a.interior[i] == b.interior[i]);
  for (std::size_t i = 0; i < a.boundary.size(); ++i) CHECK(a.boundary[i] == b.boundary[i]);
  for (std::size_t i = 0; i < a.interface_pts.size(); ++i)
    CHECK(a.interface_pts[i] == b.interface_pts[i]);
}

TEST_CASE("a subdomain starved of interior points is a configuration error") {
  const PartitionModel p = PartitionModel::grid({0, 1, 0, 1}, 4, 4);
  SamplePlan plan;
  plan.interior = 3;  // cannot cover 16 subdomains
  plan.boundary_per_edge = 4;
  plan.interface_default = 4;
  CHECK_THROWS_AS(build_samples(p, plan, 1), std::runtime_error);
}
