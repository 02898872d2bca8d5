#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "pinndd/geometry.hpp"
#include "pinndd/network.hpp"
#include "pinndd/problems.hpp"
#include "pinndd/sampling.hpp"

namespace pinndd {

/// Relative L2 errors over the fixed evaluation grid.
struct ErrorReport {
  long epoch = 0;
  double epsilon_u = 0;
  std::optional<double> epsilon_p;        // Stokes, literal metric
  std::optional<double> epsilon_p_gauge;  // Stokes, mean-shift removed
  std::optional<double> mean_abs_divergence;
  std::vector<double> per_subdomain;
  int grid_nx = 0, grid_ny = 0;
};

/// sqrt(sum (u-U)^2 / sum u^2); throws on length mismatch, empty input, or an
/// identically zero reference.
double relative_l2(const Eigen::Ref<const Eigen::VectorXd>& exact,
                   const Eigen::Ref<const Eigen::VectorXd>& predicted);

/// Inclusive n x n grid over the rectangle, row-major from the bottom-left.
PointMatrix evaluation_grid(const Rect& domain, int per_axis = 501);

/// Stitches the per-subdomain networks over the 501 x 501 grid and computes
/// the relative L2 error(s). Sums run in fixed grid order, so the result is
/// independent of evaluation chunking.
ErrorReport evaluate_on_grid(const Problem& problem, const PartitionModel& partition,
                             const std::vector<NetworkSpec>& specs,
                             const std::vector<Params>& params, int per_axis = 501);

/// Mean |div U| over the interior collocation points (Stokes diagnostics).
double mean_abs_divergence(const Problem& problem, const SampleSet& samples,
                           const std::vector<NetworkSpec>& specs,
                           const std::vector<Params>& params);

struct Aggregate {
  double mean = 0;
  std::optional<double> std_dev;  // absent with fewer than two replicates
};

/// Mean and sample standard deviation (n-1 divisor) over replicate values.
Aggregate aggregate(const std::vector<double>& values);

}  // namespace pinndd
