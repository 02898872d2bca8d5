#include "pinndd/batch_eval.hpp"

#include <stdexcept>

namespace pinndd {

namespace {

inline Eigen::Map<const Eigen::MatrixXd> weight_map(const Params& p, const LayerDesc& d) {
  return {p.values.data() + d.w_offset, d.in_size, d.out_size};
}

inline Eigen::Map<const Eigen::VectorXd> bias_map(const Params& p, const LayerDesc& d) {
  return {p.values.data() + d.b_offset, d.out_size};
}

}  // namespace

BatchEval::BatchEval(const NetworkSpec& spec, DerivMode mode, const PointMatrix& points)
    : plan_(LayerPlan::build(spec)),
      n_(static_cast<int>(points.rows())),
      m_(static_cast<int>(mode)) {
  if (spec.input_dim != 2)
    throw std::invalid_argument("batch_eval: only 2-d inputs are supported");
  const int stages = static_cast<int>(plan_.stage_widths.size());
  act_.resize(stages);
  for (int s = 0; s < stages; ++s) act_[s].setZero(m_ * n_, plan_.stage_widths[s]);
  z_.resize(plan_.layers.size());
  cosz_.resize(plan_.layers.size());
  sinz_.resize(plan_.layers.size());
  for (std::size_t l = 0; l < plan_.layers.size(); ++l) {
    const LayerDesc& d = plan_.layers[l];
    z_[l].setZero(m_ * n_, d.out_size);
    if (d.sine) {
      cosz_[l].setZero(n_, d.out_size);
      sinz_[l].setZero(n_, d.out_size);
    }
  }
  // Input streams are constants: values are the points, d/dx and d/dy are the
  // coordinate axis indicators, the Laplacian of the identity map is zero.
  act_[0].topRows(n_) = points;
  if (m_ >= 3) {
    act_[0].block(n_, 0, n_, 1).setOnes();
    act_[0].block(2 * n_, 1, n_, 1).setOnes();
  }
  const int max_width = *std::max_element(plan_.stage_widths.begin(), plan_.stage_widths.end());
  g_cur_.setZero(m_ * n_, max_width);
  g_prev_.setZero(m_ * n_, max_width);
}

void BatchEval::forward(const Params& params) {
  if (params.size() != plan_.param_count)
    throw std::invalid_argument("batch_eval: parameter vector length mismatch");
  for (std::size_t l = 0; l < plan_.layers.size(); ++l) {
    const LayerDesc& d = plan_.layers[l];
    const auto in = act_[d.stage].middleCols(d.in_offset, d.in_size);
    Eigen::MatrixXd& z = z_[l];
    z.noalias() = in * weight_map(params, d);
    z.topRows(n_).rowwise() += bias_map(params, d).transpose();

    auto out = act_[d.stage + 1].middleCols(d.out_offset, d.out_size);
    if (!d.sine) {
      out = z;
      continue;
    }
    const auto zv = z.topRows(n_).array();
    cosz_[l] = zv.cos();
    sinz_[l] = zv.sin();
    const auto c = cosz_[l].array();
    const auto s = sinz_[l].array();
    out.topRows(n_) = sinz_[l];
    if (m_ >= 3) {
      const auto zx = z.middleRows(n_, n_).array();
      const auto zy = z.middleRows(2 * n_, n_).array();
      out.middleRows(n_, n_) = c * zx;
      out.middleRows(2 * n_, n_) = c * zy;
      if (m_ == 4) {
        const auto zl = z.middleRows(3 * n_, n_).array();
        out.middleRows(3 * n_, n_) = c * zl - s * (zx.square() + zy.square());
      }
    }
  }
}

void BatchEval::backward(const Params& params, const Eigen::MatrixXd& seeds,
                         Eigen::VectorXd& grad) const {
  if (seeds.rows() != m_ * n_ || seeds.cols() != outputs())
    throw std::invalid_argument("batch_eval: seed matrix shape mismatch");
  if (grad.size() != plan_.param_count)
    throw std::invalid_argument("batch_eval: gradient vector length mismatch");

  const int last_stage = static_cast<int>(plan_.stage_widths.size()) - 1;
  g_cur_.leftCols(plan_.stage_widths[last_stage]) = seeds;

  int layer = static_cast<int>(plan_.layers.size()) - 1;
  for (int stage = last_stage - 1; stage >= 0; --stage) {
    const int w_prev = plan_.stage_widths[stage];
    auto g_in = g_prev_.leftCols(w_prev);
    if (stage > 0) g_in.setZero();
    for (; layer >= 0 && plan_.layers[layer].stage == stage; --layer) {
      const LayerDesc& d = plan_.layers[layer];
      const auto g_out = g_cur_.middleCols(d.out_offset, d.out_size);
      const Eigen::MatrixXd& z = z_[layer];

      Eigen::MatrixXd gz(m_ * n_, d.out_size);
      if (!d.sine) {
        gz = g_out;
      } else {
        const auto c = cosz_[layer].array();
        const auto s = sinz_[layer].array();
        const auto gv = g_out.topRows(n_).array();
        if (m_ == 1) {
          gz.topRows(n_) = gv * c;
        } else {
          const auto gx = g_out.middleRows(n_, n_).array();
          const auto gy = g_out.middleRows(2 * n_, n_).array();
          const auto zx = z.middleRows(n_, n_).array();
          const auto zy = z.middleRows(2 * n_, n_).array();
          if (m_ == 3) {
            gz.topRows(n_) = gv * c - (gx * zx + gy * zy) * s;
            gz.middleRows(n_, n_) = gx * c;
            gz.middleRows(2 * n_, n_) = gy * c;
          } else {
            const auto gl = g_out.middleRows(3 * n_, n_).array();
            const auto zl = z.middleRows(3 * n_, n_).array();
            gz.topRows(n_) =
                gv * c - (gx * zx + gy * zy + gl * zl) * s - gl * c * (zx.square() + zy.square());
            gz.middleRows(n_, n_) = gx * c - 2.0 * (gl * s) * zx;
            gz.middleRows(2 * n_, n_) = gy * c - 2.0 * (gl * s) * zy;
            gz.middleRows(3 * n_, n_) = gl * c;
          }
        }
      }

      const auto in = act_[stage].middleCols(d.in_offset, d.in_size);
      Eigen::Map<Eigen::MatrixXd> gw(grad.data() + d.w_offset, d.in_size, d.out_size);
      gw.noalias() += in.transpose() * gz;
      Eigen::Map<Eigen::VectorXd> gb(grad.data() + d.b_offset, d.out_size);
      gb.noalias() += gz.topRows(n_).colwise().sum().transpose();
      if (stage > 0)
        g_in.middleCols(d.in_offset, d.in_size).noalias() += gz * weight_map(params, d).transpose();
    }
    std::swap(g_cur_, g_prev_);
  }
}

Eigen::VectorXd forward(const NetworkSpec& spec, const Params& params, const Eigen::Vector2d& x) {
  PointMatrix pts(1, 2);
  pts << x(0), x(1);
  BatchEval eval(spec, DerivMode::value, pts);
  eval.forward(params);
  return eval.value().transpose();
}

EvalBundle forward_derivs(const NetworkSpec& spec, const Params& params, const Eigen::Vector2d& x) {
  PointMatrix pts(1, 2);
  pts << x(0), x(1);
  BatchEval eval(spec, DerivMode::full, pts);
  eval.forward(params);
  EvalBundle out;
  out.value = eval.value().transpose();
  out.grad.resize(2, eval.outputs());
  out.grad.row(0) = eval.dx();
  out.grad.row(1) = eval.dy();
  out.laplacian = eval.lap().transpose();
  return out;
}

Eigen::MatrixXd infer_values(const NetworkSpec& spec, const Params& params,
                             const PointMatrix& points, int chunk) {
  const int n = static_cast<int>(points.rows());
  const LayerPlan plan = LayerPlan::build(spec);
  Eigen::MatrixXd out(n, plan.stage_widths.back());
  for (int start = 0; start < n; start += chunk) {
    const int len = std::min(chunk, n - start);
    BatchEval eval(spec, DerivMode::value, points.middleRows(start, len));
    eval.forward(params);
    out.middleRows(start, len) = eval.value();
  }
  return out;
}

}  // namespace pinndd
