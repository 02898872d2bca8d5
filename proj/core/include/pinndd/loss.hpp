#pragma once

#include <Eigen/Core>
#include <vector>

#include "pinndd/batch_eval.hpp"
#include "pinndd/geometry.hpp"
#include "pinndd/optim.hpp"
#include "pinndd/problems.hpp"
#include "pinndd/sampling.hpp"

namespace pinndd {

/// Interface targets decoupling the two neighboring networks: the average of
/// both traces plus/minus half the prescribed jump. The higher-index side
/// takes +1/2 (p, q), the lower-index side -1/2 (p, q); when a jump vanishes
/// the two sides' targets coincide.
struct InterfaceTilde {
  Eigen::MatrixXd value_hi, value_lo;  // points x fields
  Eigen::MatrixXd flux_hi, flux_lo;
};

struct TildeValues {
  std::vector<InterfaceTilde> interfaces;
  long epoch = -1;
};

/// Interface traces one subdomain sends at a communication round. The flux is
/// c-weighted and taken along the canonical normal regardless of sender.
struct TraceMessage {
  int interface_index = -1;
  int sender = -1;
  Eigen::MatrixXd value;  // points x fields
  Eigen::MatrixXd flux;
  long epoch = 0;
};

/// Prescribed jump data (p, q) per interface sample point and field.
struct InterfaceJumps {
  Eigen::MatrixXd p, q;
};

/// Combines one trace message per (interface, side) into the tilde snapshot.
/// Reduction order is fixed (ascending interface index), so the result does
/// not depend on message arrival order. Throws if a side is missing,
/// duplicated, or carries a stale epoch stamp.
TildeValues synchronize(const std::vector<TraceMessage>& messages,
                        const std::vector<InterfaceJumps>& jumps, long epoch);

/// Lagrange multipliers of one subdomain, aligned one-to-one with its sample
/// points: boundary rows x constrained boundary fields, one block per local
/// interface (all fields constrained), and one entry per interior point for
/// the divergence constraint (Stokes only).
struct MultiplierState {
  Eigen::MatrixXd boundary;
  std::vector<Eigen::MatrixXd> interfaces;
  Eigen::VectorXd divergence;
};

/// All loss terms of one subdomain. Quadratic terms are means over their
/// sample sets; the Lagrangian terms are plain sums and may be negative.
struct LossBreakdown {
  double residual = 0;        // PDE residual
  double divergence = 0;      // squared divergence (Stokes)
  double boundary = 0;        // Dirichlet mismatch
  double iface_value = 0;     // trace vs tilde value
  double iface_flux = 0;      // flux vs tilde flux
  double lag_boundary = 0;
  double lag_iface = 0;
  double lag_divergence = 0;

  double plain() const { return residual + divergence + boundary + iface_value + iface_flux; }
  double augmented() const { return plain() + lag_boundary + lag_iface + lag_divergence; }
};

/// Evaluates one subdomain's network over its collocation groups and
/// assembles every loss term and its exact parameter gradient.
///
/// Call order per epoch: forward(params) -> prepare(tilde) -> optional
/// apply_ascent -> losses -> optional gradient. prepare() caches the
/// residuals the later calls read, so it must be re-run after the tilde
/// snapshot changes.
class SubdomainEngine {
 public:
  SubdomainEngine(std::shared_ptr<const Problem> problem, const PartitionModel& partition,
                  const SampleSet& samples, const NetworkSpec& spec, int subdomain);

  void forward(const Params& params);
  void prepare(const TildeValues& tilde);

  TraceMessage trace(int local_index, long epoch) const;
  void apply_ascent(MultiplierState& multipliers, const AscentRates& rates,
                    bool divergence_multiplier) const;
  LossBreakdown losses(const MultiplierState* multipliers) const;
  void gradient(const Params& params, const MultiplierState* multipliers, bool augmented,
                bool divergence_multiplier, Eigen::VectorXd& grad);

  MultiplierState zero_multipliers() const;
  /// lambda_ij := trace value minus tilde (run right after prepare()).
  void reinit_interface_multipliers(MultiplierState& multipliers) const;
  /// lambda_div := div U at the interior points of the last forward().
  void reinit_divergence_multipliers(MultiplierState& multipliers) const;

  /// Global interface indices this subdomain touches, ascending.
  const std::vector<int>& local_interfaces() const { return local_ifaces_; }
  int subdomain() const { return subdomain_; }
  double mean_abs_divergence() const;

 private:
  struct IfaceSlice {
    int global = 0;
    int offset = 0;
    int count = 0;
    bool hi_side = false;
  };

  std::shared_ptr<const Problem> problem_;
  int subdomain_ = 0;
  int region_ = 0;
  int fields_ = 1;

  std::unique_ptr<BatchEval> interior_;
  std::unique_ptr<BatchEval> boundary_;
  std::unique_ptr<BatchEval> iface_;

  Eigen::MatrixXd forcing_;     // interior points x forcing_dim
  Eigen::MatrixXd boundary_g_;  // boundary points x boundary fields
  Eigen::MatrixXd normals_;     // concatenated interface points x 2
  Eigen::VectorXd flux_w_;      // per field
  std::vector<IfaceSlice> slices_;
  std::vector<int> local_ifaces_;

  // residual caches filled by prepare()
  Eigen::MatrixXd r_interior_;   // interior x forcing_dim
  Eigen::VectorXd div_;          // interior (Stokes)
  Eigen::MatrixXd r_boundary_;   // boundary x boundary fields
  Eigen::MatrixXd r_iface_val_;  // concatenated interface x fields
  Eigen::MatrixXd r_iface_flux_;
  Eigen::MatrixXd flux_;  // concatenated interface x fields

  // seed buffers
  Eigen::MatrixXd seed_interior_, seed_boundary_, seed_iface_;
};

}  // namespace pinndd
