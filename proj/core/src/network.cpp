#include "pinndd/network.hpp"

#include <cmath>
#include <stdexcept>

#include "pinndd/rng.hpp"

namespace pinndd {

void NetworkSpec::validate() const {
  if (input_dim < 1) throw std::invalid_argument("network: input_dim must be >= 1");
  if (hidden_widths.empty()) throw std::invalid_argument("network: hidden_widths must be non-empty");
  for (int w : hidden_widths)
    if (w < 1) throw std::invalid_argument("network: hidden widths must be positive");
  if (branch) {
    if (branch->split_layer < 1 || branch->split_layer > static_cast<int>(hidden_widths.size()))
      throw std::invalid_argument("network: branch split layer out of range");
    const int split_width = hidden_widths[branch->split_layer - 1];
    if (branch->branch_count * branch->branch_width != split_width)
      throw std::invalid_argument("network: branch_count * branch_width must equal the split layer width");
    if (output_dim != branch->branch_count)
      throw std::invalid_argument("network: branched output_dim must equal branch_count");
    if (branch->split_layer != static_cast<int>(hidden_widths.size()))
      throw std::invalid_argument("network: branch split must follow the last shared hidden layer");
  } else if (output_dim < 1) {
    throw std::invalid_argument("network: output_dim must be >= 1");
  }
}

NetworkSpec NetworkSpec::mlp(int width, int depth, int input_dim) {
  NetworkSpec spec;
  spec.input_dim = input_dim;
  spec.hidden_widths.assign(static_cast<std::size_t>(depth), width);
  spec.output_dim = 1;
  return spec;
}

LayerPlan LayerPlan::build(const NetworkSpec& spec) {
  spec.validate();
  LayerPlan plan;
  plan.stage_widths.push_back(spec.input_dim);
  int offset = 0;

  auto add_layer = [&](int in_offset, int in_size, int out_offset, int out_size, int stage, bool sine) {
    LayerDesc d;
    d.stage = stage;
    d.in_offset = in_offset;
    d.in_size = in_size;
    d.out_offset = out_offset;
    d.out_size = out_size;
    d.w_offset = offset;
    d.b_offset = offset + in_size * out_size;
    d.sine = sine;
    offset = d.b_offset + out_size;
    plan.layers.push_back(d);
  };

  int stage = 0;
  for (int w : spec.hidden_widths) {
    add_layer(0, plan.stage_widths.back(), 0, w, stage, true);
    plan.stage_widths.push_back(w);
    ++stage;
  }
  if (spec.branch) {
    const int bw = spec.branch->branch_width;
    const int bc = spec.branch->branch_count;
    plan.stage_widths.push_back(bc * bw);
    for (int b = 0; b < bc; ++b) add_layer(b * bw, bw, b * bw, bw, stage, true);
    ++stage;
    plan.stage_widths.push_back(bc);
    for (int b = 0; b < bc; ++b) add_layer(b * bw, bw, b, 1, stage, false);
  } else {
    plan.stage_widths.push_back(spec.output_dim);
    add_layer(0, spec.hidden_widths.back(), 0, spec.output_dim, stage, false);
  }
  plan.param_count = offset;
  return plan;
}

int NetworkSpec::param_count() const { return LayerPlan::build(*this).param_count; }

Params init_params(const NetworkSpec& spec, std::uint64_t seed, std::uint64_t stream) {
  const LayerPlan plan = LayerPlan::build(spec);
  Params params;
  params.values.resize(plan.param_count);
  Rng rng(seed, stream);
  for (const LayerDesc& layer : plan.layers) {
    const double std_dev = std::sqrt(2.0 / (layer.in_size + layer.out_size));
    const int nw = layer.in_size * layer.out_size;
    for (int k = 0; k < nw; ++k)
      params.values[layer.w_offset + k] = std_dev * rng.next_normal();
    for (int k = 0; k < layer.out_size; ++k)
      params.values[layer.b_offset + k] = 0.01;
  }
  return params;
}

}  // namespace pinndd
