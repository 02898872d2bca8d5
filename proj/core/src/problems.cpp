#include "pinndd/problems.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pinndd {

namespace {
constexpr double kPi = std::numbers::pi;
}

void Problem::validate_partition(const PartitionModel& partition) const {
  const PartitionModel native = default_partition();
  if (partition.is_radial() != native.is_radial() ||
      partition.subdomain_count() != native.subdomain_count())
    throw std::invalid_argument(name_ + ": partition does not match the problem");
}

Eigen::VectorXd Problem::exact(const Eigen::Vector2d& x) const {
  Eigen::VectorXd value;
  Eigen::Matrix2Xd grad;
  exact_in_region(region_of(x), x, value, grad);
  return value;
}

Eigen::VectorXd Problem::exact_with_grad(const Eigen::Vector2d& x, Eigen::Matrix2Xd& grad) const {
  Eigen::VectorXd value;
  exact_in_region(region_of(x), x, value, grad);
  return value;
}

Eigen::VectorXd Problem::forcing(const Eigen::Vector2d& x) const {
  return forcing_in_region(region_of(x), x);
}

Eigen::VectorXd Problem::boundary_value(const Eigen::Vector2d& x) const {
  return exact(x).head(boundary_field_count());
}

void Problem::jump(const Interface& interface, const Eigen::Vector2d& x,
                   Eigen::VectorXd& p, Eigen::VectorXd& q) const {
  if (!interface.contains(x))
    throw std::invalid_argument(name_ + ": point is off the interface");
  const Eigen::Vector2d n = interface.normal_at(x);
  const int region_hi = region_for_subdomain(interface.hi);
  const int region_lo = region_for_subdomain(interface.lo);
  Eigen::VectorXd value_hi, value_lo;
  Eigen::Matrix2Xd grad_hi, grad_lo;
  exact_in_region(region_hi, x, value_hi, grad_hi);
  exact_in_region(region_lo, x, value_lo, grad_lo);
  p = value_hi - value_lo;
  q.resize(field_count_);
  for (int f = 0; f < field_count_; ++f)
    q(f) = flux_weight(region_hi, f) * grad_hi.col(f).dot(n) -
           flux_weight(region_lo, f) * grad_lo.col(f).dot(n);
}

SamplePlan Problem::default_sample_plan() const { return {}; }

NetworkSpec Problem::default_network(int /*subdomain_count*/) const {
  return NetworkSpec::mlp(50);
}

double stokes_tangential_force(double s) { return 20.0 * std::sin(3.0 * s); }

// ---------------------------------------------------------------------------

namespace {

/// -lap u = f on (0,1)^2 with u = sin(2 pi x) sin(2 pi y).
class PoissonSmooth final : public Problem {
 public:
  PoissonSmooth() : Problem("poisson_smooth", {0, 1, 0, 1}, 1) {}

  PartitionModel default_partition() const override {
    return PartitionModel::grid(domain_, 2, 1);
  }
  bool partition_configurable() const override { return true; }
  void validate_partition(const PartitionModel& partition) const override {
    if (partition.is_radial())
      throw std::invalid_argument("poisson_smooth: expects a grid partition");
  }

  int region_of(const Eigen::Vector2d&) const override { return 0; }
  int region_for_subdomain(int) const override { return 0; }

  void exact_in_region(int, const Eigen::Vector2d& x, Eigen::VectorXd& value,
                       Eigen::Matrix2Xd& grad) const override {
    value.resize(1);
    grad.resize(2, 1);
    const double sx = std::sin(2 * kPi * x(0)), cx = std::cos(2 * kPi * x(0));
    const double sy = std::sin(2 * kPi * x(1)), cy = std::cos(2 * kPi * x(1));
    value(0) = sx * sy;
    grad(0, 0) = 2 * kPi * cx * sy;
    grad(1, 0) = 2 * kPi * sx * cy;
  }

  Eigen::VectorXd forcing_in_region(int, const Eigen::Vector2d& x) const override {
    Eigen::VectorXd f(1);
    f(0) = 8 * kPi * kPi * std::sin(2 * kPi * x(0)) * std::sin(2 * kPi * x(1));
    return f;
  }

  SamplePlan default_sample_plan() const override { return {2000, 200, 200, {}}; }

  NetworkSpec default_network(int subdomain_count) const override {
    switch (subdomain_count) {
      case 1: return NetworkSpec::mlp(50);
      case 2: return NetworkSpec::mlp(35);
      case 4: return NetworkSpec::mlp(23);
      case 9: return NetworkSpec::mlp(16);
      case 16: return NetworkSpec::mlp(11);
      default:
        throw std::invalid_argument(
            "poisson_smooth: no default network width for this partition, set one explicitly");
    }
  }
};

/// -div(c grad u) = f on (0,4)^2 with c piecewise 10/1/1/10 on the 2x2
/// partition and u = sin(pi x) sin(pi y) / c.
class DiscCoeff final : public Problem {
 public:
  DiscCoeff() : Problem("disc_coeff", {0, 4, 0, 4}, 1) {}

  PartitionModel default_partition() const override {
    return PartitionModel::grid(domain_, 2, 2);
  }
  void validate_partition(const PartitionModel& partition) const override {
    if (partition.is_radial() || partition.grid_nx() != 2 || partition.grid_ny() != 2 ||
        partition.domain().x1 != 4.0)
      throw std::invalid_argument("disc_coeff: requires the 2x2 partition of (0,4)^2");
  }

  int region_of(const Eigen::Vector2d& x) const override {
    return default_partition().locate(x);
  }

  void exact_in_region(int region, const Eigen::Vector2d& x, Eigen::VectorXd& value,
                       Eigen::Matrix2Xd& grad) const override {
    value.resize(1);
    grad.resize(2, 1);
    const double c = coefficient(region);
    const double sx = std::sin(kPi * x(0)), cx = std::cos(kPi * x(0));
    const double sy = std::sin(kPi * x(1)), cy = std::cos(kPi * x(1));
    value(0) = sx * sy / c;
    grad(0, 0) = kPi * cx * sy / c;
    grad(1, 0) = kPi * sx * cy / c;
  }

  Eigen::VectorXd forcing_in_region(int, const Eigen::Vector2d& x) const override {
    Eigen::VectorXd f(1);
    f(0) = 2 * kPi * kPi * std::sin(kPi * x(0)) * std::sin(kPi * x(1));
    return f;
  }

  double flux_weight(int region, int) const override { return coefficient(region); }

  SamplePlan default_sample_plan() const override { return {2000, 200, 200, {}}; }
  NetworkSpec default_network(int) const override { return NetworkSpec::mlp(23); }

  static double coefficient(int region) { return (region == 0 || region == 3) ? 10.0 : 1.0; }
};

/// -lap u = f on (-1,1)^2 with the piecewise exact solution jumping across
/// the circles r = 0.5 and r = 0.8.
class PoissonInterface final : public Problem {
 public:
  PoissonInterface() : Problem("poisson_interface", {-1, 1, -1, 1}, 1) {}

  PartitionModel default_partition() const override {
    return PartitionModel::radial(domain_, {0.5, 0.8});
  }

  int region_of(const Eigen::Vector2d& x) const override {
    const double r = x.norm();
    if (r < 0.5) return 0;
    if (r < 0.8) return 1;
    return 2;
  }

  void exact_in_region(int region, const Eigen::Vector2d& x, Eigen::VectorXd& value,
                       Eigen::Matrix2Xd& grad) const override {
    value.resize(1);
    grad.resize(2, 1);
    if (region == 1) {
      const double e = std::exp(-x.squaredNorm());
      value(0) = e;
      grad(0, 0) = -2 * x(0) * e;
      grad(1, 0) = -2 * x(1) * e;
      return;
    }
    const double sign = (region == 0) ? -1.0 : 1.0;
    const double sx = std::sin(kPi * x(0)), cx = std::cos(kPi * x(0));
    const double sy = std::sin(kPi * x(1)), cy = std::cos(kPi * x(1));
    value(0) = sign * sx * sy;
    grad(0, 0) = sign * kPi * cx * sy;
    grad(1, 0) = sign * kPi * sx * cy;
  }

  Eigen::VectorXd forcing_in_region(int region, const Eigen::Vector2d& x) const override {
    Eigen::VectorXd f(1);
    if (region == 1) {
      const double r2 = x.squaredNorm();
      f(0) = 4.0 * (1.0 - r2) * std::exp(-r2);
    } else {
      const double sign = (region == 0) ? -1.0 : 1.0;
      f(0) = sign * 2 * kPi * kPi * std::sin(kPi * x(0)) * std::sin(kPi * x(1));
    }
    return f;
  }

  SamplePlan default_sample_plan() const override { return {2000, 100, 200, {150, 300}}; }
  NetworkSpec default_network(int) const override { return NetworkSpec::mlp(30); }
};

/// Stokes flow on (-2,2)^2 driven by a tangential force on the unit circle,
/// rewritten as an interface problem with h = 0 on both sides. Velocity and
/// pressure follow the closed-form solution in polar coordinates.
class StokesInterface final : public Problem {
 public:
  StokesInterface() : Problem("stokes_interface", {-2, 2, -2, 2}, 3) {}

  PartitionModel default_partition() const override {
    return PartitionModel::radial(domain_, {1.0});
  }

  int region_of(const Eigen::Vector2d& x) const override { return x.norm() < 1.0 ? 0 : 1; }

  void exact_in_region(int region, const Eigen::Vector2d& x, Eigen::VectorXd& value,
                       Eigen::Matrix2Xd& grad) const override {
    value.resize(3);
    grad.resize(2, 3);
    const double r = x.norm();
    if (region == 0 && r == 0.0) {
      value.setZero();
      grad.setZero();
      return;
    }
    const double s = std::atan2(x(1), x(0));
    const double c2 = std::cos(2 * s), s2 = std::sin(2 * s);
    const double c3 = std::cos(3 * s), s3 = std::sin(3 * s);
    const double c4 = std::cos(4 * s), s4 = std::sin(4 * s);

    double u, ur, us, v, vr, vs, p, pr, ps;
    if (region == 0) {
      const double r2 = r * r, r3 = r2 * r, r4 = r2 * r2;
      u = 1.25 * r2 * c2 + 0.625 * r4 * c4 - 2.5 * r4 * c2;
      ur = 2.5 * r * c2 + 2.5 * r3 * c4 - 10.0 * r3 * c2;
      us = -2.5 * r2 * s2 - 2.5 * r4 * s4 + 5.0 * r4 * s2;
      v = -1.25 * r2 * s2 + 0.625 * r4 * s4 + 2.5 * r4 * s2;
      vr = -2.5 * r * s2 + 2.5 * r3 * s4 + 10.0 * r3 * s2;
      vs = -2.5 * r2 * c2 + 2.5 * r4 * c4 + 5.0 * r4 * c2;
      p = -10.0 * r3 * c3;
      pr = -30.0 * r2 * c3;
      ps = 30.0 * r3 * s3;
    } else {
      const double i2 = 1.0 / (r * r), i3 = i2 / r, i4 = i2 * i2, i5 = i4 / r;
      u = -1.25 * i2 * c2 + 3.125 * i4 * c4 - 2.5 * i2 * c4;
      ur = 2.5 * i3 * c2 - 12.5 * i5 * c4 + 5.0 * i3 * c4;
      us = 2.5 * i2 * s2 - 12.5 * i4 * s4 + 10.0 * i2 * s4;
      v = 1.25 * i2 * s2 + 3.125 * i4 * s4 - 2.5 * i2 * s4;
      vr = -2.5 * i3 * s2 - 12.5 * i5 * s4 + 5.0 * i3 * s4;
      vs = 2.5 * i2 * c2 + 12.5 * i4 * c4 - 10.0 * i2 * c4;
      p = -10.0 * i3 * c3;
      pr = 30.0 * i4 * c3;
      ps = 30.0 * i3 * s3;
    }
    value << u, v, p;
    const Eigen::Vector2d rhat{std::cos(s), std::sin(s)};
    const Eigen::Vector2d shat{-std::sin(s), std::cos(s)};
    grad.col(0) = ur * rhat + (us / r) * shat;
    grad.col(1) = vr * rhat + (vs / r) * shat;
    grad.col(2) = pr * rhat + (ps / r) * shat;
  }

  Eigen::VectorXd forcing_in_region(int, const Eigen::Vector2d&) const override {
    // The flow is driven entirely by the interface force; the external
    // momentum forcing vanishes on both sides (-mu lap u + grad p = 0).
    return Eigen::VectorXd::Zero(2);
  }

  double flux_weight(int, int field) const override { return field < 2 ? kMu : 1.0; }

  SamplePlan default_sample_plan() const override { return {5000, 200, 200, {}}; }

  NetworkSpec default_network(int) const override {
    NetworkSpec spec;
    spec.input_dim = 2;
    spec.hidden_widths = {90, 90, 90};
    spec.branch = BranchSpec{3, 30, 3};
    spec.output_dim = 3;
    return spec;
  }

  static constexpr double kMu = 1.0;
};

}  // namespace

std::shared_ptr<const Problem> make_problem(const std::string& name) {
  if (name == "poisson_smooth") return std::make_shared<PoissonSmooth>();
  if (name == "disc_coeff") return std::make_shared<DiscCoeff>();
  if (name == "poisson_interface") return std::make_shared<PoissonInterface>();
  if (name == "stokes_interface") return std::make_shared<StokesInterface>();
  throw std::invalid_argument("unknown problem: " + name);
}

std::vector<std::string> problem_names() {
  return {"poisson_smooth", "disc_coeff", "poisson_interface", "stokes_interface"};
}

}  // namespace pinndd
