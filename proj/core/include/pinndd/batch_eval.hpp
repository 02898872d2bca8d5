#pragma once

#include <Eigen/Core>
#include <vector>

#include "pinndd/network.hpp"

namespace pinndd {

using PointMatrix = Eigen::Matrix<double, Eigen::Dynamic, 2>;

/// How many derivative streams to carry through the forward pass:
/// value only, value + spatial gradient, or value + gradient + Laplacian.
enum class DerivMode { value = 1, first = 3, full = 4 };

/// Value, spatial gradient and Laplacian of every network output at one point.
struct EvalBundle {
  Eigen::VectorXd value;      // per output
  Eigen::Matrix2Xd grad;      // column f = (d/dx, d/dy) of output f
  Eigen::VectorXd laplacian;  // per output
};

/// Batched evaluation of one network over a fixed point set.
///
/// Streams are stacked by rows: rows [0,n) carry values, [n,2n) d/dx,
/// [2n,3n) d/dy and [3n,4n) the Laplacian. Derivatives are exact: the sine
/// layers propagate (v, v_x, v_y, lap v) analytically, and backward() runs
/// reverse accumulation over that extended forward pass, so parameter
/// gradients of any functional seeded on the output streams are exact too.
///
/// forward() must be called before value()/dx()/dy()/lap()/backward(); the
/// stored intermediates belong to the parameters of the last forward() call.
class BatchEval {
 public:
  BatchEval(const NetworkSpec& spec, DerivMode mode, const PointMatrix& points);

  void forward(const Params& params);

  /// Accumulates d(loss)/d(params) into `grad` for the scalar loss whose
  /// adjoints with respect to the output streams are given by `seeds`,
  /// a (streams*n) x output_dim matrix stacked like the activations.
  void backward(const Params& params, const Eigen::MatrixXd& seeds,
                Eigen::VectorXd& grad) const;

  int points() const { return n_; }
  int outputs() const { return plan_.stage_widths.back(); }
  int streams() const { return m_; }
  int param_count() const { return plan_.param_count; }
  const LayerPlan& plan() const { return plan_; }

  // Views into the output stage, each n x output_dim.
  auto value() const { return act_.back().topRows(n_); }
  auto dx() const { return act_.back().middleRows(n_, n_); }
  auto dy() const { return act_.back().middleRows(2 * n_, n_); }
  auto lap() const { return act_.back().middleRows(3 * n_, n_); }

 private:
  LayerPlan plan_;
  int n_ = 0;
  int m_ = 1;
  std::vector<Eigen::MatrixXd> act_;          // per stage, (m*n) x width
  std::vector<Eigen::MatrixXd> z_;            // per layer, (m*n) x out
  std::vector<Eigen::MatrixXd> cosz_, sinz_;  // per sine layer, n x out
  mutable Eigen::MatrixXd g_cur_, g_prev_;
};

/// Single-point conveniences wrapping a one-row BatchEval.
Eigen::VectorXd forward(const NetworkSpec& spec, const Params& params,
                        const Eigen::Vector2d& x);
EvalBundle forward_derivs(const NetworkSpec& spec, const Params& params,
                          const Eigen::Vector2d& x);

/// Value-only inference over many points, chunked so memory stays flat.
/// Results are identical for any chunk size. Output is n x output_dim.
Eigen::MatrixXd infer_values(const NetworkSpec& spec, const Params& params,
                             const PointMatrix& points, int chunk = 16384);

}  // namespace pinndd
