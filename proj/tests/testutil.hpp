#pragma once

#include <Eigen/Core>
#include <cmath>

#include "pinndd/batch_eval.hpp"
#include "pinndd/network.hpp"
#include "pinndd/sampling.hpp"

namespace testutil {

/// Network whose every output is the constant `value` (all weights zero, the
/// affine output biases set); handy for exercising the loss arithmetic.
inline pinndd::Params constant_net(const pinndd::NetworkSpec& spec, double value) {
  const pinndd::LayerPlan plan = pinndd::LayerPlan::build(spec);
  pinndd::Params p;
  p.values = Eigen::VectorXd::Zero(plan.param_count);
  for (const pinndd::LayerDesc& layer : plan.layers) {
    if (layer.sine) continue;
    for (int k = 0; k < layer.out_size; ++k) p.values[layer.b_offset + k] = value;
  }
  return p;
}

inline pinndd::SampleSet manual_samples(std::vector<pinndd::PointMatrix> interior,
                                        std::vector<pinndd::PointMatrix> boundary,
                                        std::vector<pinndd::PointMatrix> iface) {
  pinndd::SampleSet s;
  s.interior = std::move(interior);
  s.boundary = std::move(boundary);
  s.interface_pts = std::move(iface);
  return s;
}

inline pinndd::PointMatrix points(std::initializer_list<std::pair<double, double>> list) {
  pinndd::PointMatrix m(static_cast<int>(list.size()), 2);
  int k = 0;
  for (const auto& [x, y] : list) {
    m(k, 0) = x;
    m(k, 1) = y;
    ++k;
  }
  return m;
}

inline pinndd::PointMatrix empty_points() { return pinndd::PointMatrix(0, 2); }

}  // namespace testutil
