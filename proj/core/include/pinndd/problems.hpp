#pragma once

#include <Eigen/Core>
#include <memory>
#include <string>
#include <vector>

#include "pinndd/geometry.hpp"
#include "pinndd/network.hpp"
#include "pinndd/sampling.hpp"

namespace pinndd {

/// One benchmark problem: PDE residual data, boundary data, exact piecewise
/// solution with gradients, and interface jump data derived from the exact
/// solution's two-sided traces.
class Problem {
 public:
  virtual ~Problem() = default;

  const std::string& name() const { return name_; }
  const Rect& domain() const { return domain_; }
  int field_count() const { return field_count_; }
  bool is_stokes() const { return field_count_ == 3; }
  /// Momentum equation count: 1 for scalar problems, 2 for Stokes.
  int forcing_dim() const { return is_stokes() ? 2 : 1; }
  /// Fields with Dirichlet data on the outer boundary (velocity only for
  /// Stokes; the pressure carries no boundary condition).
  int boundary_field_count() const { return is_stokes() ? 2 : 1; }

  virtual PartitionModel default_partition() const = 0;
  virtual bool partition_configurable() const { return false; }
  /// Throws if this problem cannot be posed on the given partition.
  virtual void validate_partition(const PartitionModel& partition) const;

  /// Native region of the exact piecewise solution containing x.
  virtual int region_of(const Eigen::Vector2d& x) const = 0;
  /// Region owning training subdomain i (identity for the interface
  /// problems; the smooth problem has a single region).
  virtual int region_for_subdomain(int i) const { return i; }

  virtual void exact_in_region(int region, const Eigen::Vector2d& x,
                               Eigen::VectorXd& value, Eigen::Matrix2Xd& grad) const = 0;
  virtual Eigen::VectorXd forcing_in_region(int region, const Eigen::Vector2d& x) const = 0;
  /// c-weight of the normal flux: 1, the piecewise diffusion coefficient, or
  /// the viscosity for velocity fields (pressure flux weight 1).
  virtual double flux_weight(int region, int field) const { return 1.0; }

  Eigen::VectorXd exact(const Eigen::Vector2d& x) const;
  Eigen::VectorXd exact_with_grad(const Eigen::Vector2d& x, Eigen::Matrix2Xd& grad) const;
  Eigen::VectorXd forcing(const Eigen::Vector2d& x) const;
  /// Dirichlet data on the outer boundary (boundary_field_count entries).
  Eigen::VectorXd boundary_value(const Eigen::Vector2d& x) const;

  /// Jump data (p, q) per field at an interface point, oriented by the
  /// canonical normal: higher-index side minus lower-index side, fluxes
  /// c-weighted along the canonical normal. Throws if x is off the interface.
  void jump(const Interface& interface, const Eigen::Vector2d& x,
            Eigen::VectorXd& p, Eigen::VectorXd& q) const;

  /// Benchmark defaults for this problem.
  virtual SamplePlan default_sample_plan() const;
  virtual NetworkSpec default_network(int subdomain_count) const;

 protected:
  Problem(std::string name, Rect domain, int field_count)
      : name_(std::move(name)), domain_(domain), field_count_(field_count) {}

  std::string name_;
  Rect domain_;
  int field_count_ = 1;
};

/// Tangential interface force magnitude of the immersed-interface flow,
/// F_tau(s) = 20 sin(3s) for arc length s on the unit circle. Used by the
/// oracle that cross-checks the velocity flux jump, which equals
/// F_tau(s) * t(s) along the canonical (inward) normal.
double stokes_tangential_force(double s);

std::shared_ptr<const Problem> make_problem(const std::string& name);
std::vector<std::string> problem_names();

}  // namespace pinndd
