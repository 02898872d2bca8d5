#include <doctest.h>

#include <cmath>

#include "pinndd/problems.hpp"
#include "pinndd/verify.hpp"

using namespace pinndd;

TEST_CASE("smooth poisson exact solution and forcing") {
  const auto p = make_problem("poisson_smooth");
  CHECK(p->exact({0.25, 0.25})(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(p->forcing({0.25, 0.25})(0) ==
        doctest::Approx(78.956835208714869).epsilon(1e-13));  // 8 pi^2
}

TEST_CASE("discontinuous-coefficient exact solution, forcing, and weights") {
  const auto p = make_problem("disc_coeff");
  CHECK(p->exact({0.5, 0.5})(0) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(p->forcing({0.5, 0.5})(0) ==
        doctest::Approx(19.739208802178717).epsilon(1e-13));  // 2 pi^2
  CHECK(p->flux_weight(0, 0) == 10.0);
  CHECK(p->flux_weight(1, 0) == 1.0);
  CHECK(p->flux_weight(2, 0) == 1.0);
  CHECK(p->flux_weight(3, 0) == 10.0);
}

TEST_CASE("poisson interface forcing per region") {
  const auto p = make_problem("poisson_interface");
  // region 1 value frozen from symbolic differentiation of exp(-r^2)
  CHECK(p->forcing({0.6, 0.0})(0) == doctest::Approx(1.7860513947418395).epsilon(1e-14));
  CHECK(p->region_of({0.6, 0.0}) == 1);
  CHECK(p->region_of({0.2, 0.0}) == 0);
  CHECK(p->region_of({0.9, 0.0}) == 2);
  CHECK(p->region_of({0.5, 0.0}) == 1);  // tie rule: r = 0.5 belongs to the annulus
}

TEST_CASE("poisson interface jump data against frozen two-sided values") {
  const auto p = make_problem("poisson_interface");
  const PartitionModel partition = p->default_partition();
  const Interface& gamma1 = partition.interfaces()[0];
  const Interface& gamma2 = partition.interfaces()[1];

  Eigen::VectorXd pj, qj;
  p->jump(gamma1, {0.5, 0.0}, pj, qj);
  CHECK(pj(0) == doctest::Approx(0.77880078307140487).epsilon(1e-14));
  CHECK(qj(0) == doctest::Approx(0.77880078307140487).epsilon(1e-14));

  const double s = 1.1;
  p->jump(gamma1, {0.5 * std::cos(s), 0.5 * std::sin(s)}, pj, qj);
  CHECK(pj(0) == doctest::Approx(1.4230112856082540).epsilon(1e-13));
  CHECK(qj(0) == doctest::Approx(-0.59510255339343532).epsilon(1e-13));

  p->jump(gamma2, {0.8, 0.0}, pj, qj);
  CHECK(pj(0) == doctest::Approx(-0.52729242404304856).epsilon(1e-13));
  CHECK(qj(0) == doctest::Approx(-0.84366787846887769).epsilon(1e-13));

  CHECK_THROWS_AS(p->jump(gamma1, {0.7, 0.0}, pj, qj), std::invalid_argument);
}

TEST_CASE("smooth poisson jumps vanish identically") {
  const auto p = make_problem("poisson_smooth");
  const PartitionModel partition = PartitionModel::grid(p->domain(), 2, 2);
  Eigen::VectorXd pj, qj;
  for (const Interface& f : partition.interfaces()) {
    p->jump(f, 0.5 * (f.a + f.b), pj, qj);
    CHECK(pj(0) == 0.0);
    CHECK(qj(0) == 0.0);
  }
}

TEST_CASE("stokes exact solution: frozen values and interface continuity") {
  const auto p = make_problem("stokes_interface");
  const Eigen::VectorXd inner = p->exact({0.3, 0.4});
  CHECK(inner(0) == doctest::Approx(-0.0766875).epsilon(1e-13));
  CHECK(inner(1) == doctest::Approx(-0.171).epsilon(1e-13));
  CHECK(inner(2) == doctest::Approx(1.17).epsilon(1e-13));
  const Eigen::VectorXd outer = p->exact({1.2, -0.5});
  CHECK(outer(0) == doctest::Approx(-0.51759222023955133).epsilon(1e-13));
  CHECK(outer(1) == doctest::Approx(-0.14006460350044853).epsilon(1e-13));
  CHECK(outer(2) == doctest::Approx(-1.7154190273532680).epsilon(1e-13));

  // both branch formulas agree on the interface
  for (double s : {0.0, 0.7, 2.1, 4.4}) {
    const Eigen::Vector2d x{std::cos(s), std::sin(s)};
    Eigen::VectorXd vi, vo;
    Eigen::Matrix2Xd gi, go;
    p->exact_in_region(0, x, vi, gi);
    p->exact_in_region(1, x, vo, go);
    for (int f = 0; f < 3; ++f) CHECK(vi(f) == doctest::Approx(vo(f)).epsilon(1e-12));
  }

  // the solution is regular at the partition center
  const Eigen::VectorXd center = p->exact({0.0, 0.0});
  CHECK(center.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("stokes tangential force and flux-jump cross-check") {
  CHECK(stokes_tangential_force(0.0) == 0.0);
  CHECK(stokes_tangential_force(M_PI / 6) == doctest::Approx(20.0).epsilon(1e-14));

  const auto p = make_problem("stokes_interface");
  const Interface& gamma = p->default_partition().interfaces()[0];
  double worst = 0;
  for (int k = 0; k < 97; ++k) {
    const double s = 2 * M_PI * k / 97.0;
    const Eigen::Vector2d x{std::cos(s), std::sin(s)};
    Eigen::VectorXd pj, qj;
    p->jump(gamma, x, pj, qj);
    // velocity values and pressure are continuous; the velocity flux jump
    // equals F_tau * t along the canonical (inward) normal
    CHECK(std::abs(pj(0)) < 1e-12);
    CHECK(std::abs(pj(1)) < 1e-12);
    CHECK(std::abs(pj(2)) < 1e-12);
    const double ft = stokes_tangential_force(s);
    worst = std::max(worst, std::abs(qj(0) - ft * (-std::sin(s))));
    worst = std::max(worst, std::abs(qj(1) - ft * (std::cos(s))));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("stokes momentum forcing vanishes on both sides") {
  const auto p = make_problem("stokes_interface");
  CHECK(p->forcing({0.3, 0.1}).cwiseAbs().maxCoeff() == 0.0);
  CHECK(p->forcing({1.5, -0.4}).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("exact-solution oracles pass and catch corruption") {
  for (const std::string& name : problem_names()) {
    const auto checks = verify_problem(*make_problem(name), 100, 9);
    for (const auto& c : checks) {
      INFO(c.name);
      CHECK(c.passed);
    }
  }

  // negative control: a corrupted forcing constant must fail the residual oracle
  class Corrupted final : public Problem {
   public:
    Corrupted() : Problem("poisson_smooth", {0, 1, 0, 1}, 1), inner_(make_problem("poisson_smooth")) {}
    PartitionModel default_partition() const override { return inner_->default_partition(); }
    int region_of(const Eigen::Vector2d& x) const override { return inner_->region_of(x); }
    int region_for_subdomain(int i) const override { return inner_->region_for_subdomain(i); }
    void exact_in_region(int r, const Eigen::Vector2d& x, Eigen::VectorXd& v,
                         Eigen::Matrix2Xd& g) const override {
      inner_->exact_in_region(r, x, v, g);
    }
    Eigen::VectorXd forcing_in_region(int r, const Eigen::Vector2d& x) const override {
      return inner_->forcing_in_region(r, x) * 1.01;
    }

   private:
    std::shared_ptr<const Problem> inner_;
  };
  const auto checks = verify_problem(Corrupted{}, 50, 9);
  bool residual_failed = false;
  for (const auto& c : checks)
    if (c.name.find("pde residual") != std::string::npos) residual_failed = !c.passed;
  CHECK(residual_failed);
}

TEST_CASE("problem registry and partition validation") {
  CHECK_THROWS_AS(make_problem("unknown"), std::invalid_argument);
  const auto disc = make_problem("disc_coeff");
  CHECK_THROWS_AS(disc->validate_partition(PartitionModel::grid({0, 4, 0, 4}, 3, 3)),
                  std::invalid_argument);
  const auto smooth = make_problem("poisson_smooth");
  CHECK_THROWS_AS(smooth->default_network(5), std::invalid_argument);
  CHECK(smooth->default_network(9).hidden_widths == std::vector<int>{16, 16, 16, 16});
}
