#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <vector>

namespace pinndd {

/// Branched head: after hidden layer `split_layer` (1-based), the activations
/// are sliced into `branch_count` groups of `branch_width` neurons. Each slice
/// feeds one private sine hidden layer of `branch_width` neurons followed by a
/// single affine output, so output b depends only on slice b past the split.
struct BranchSpec {
  int split_layer = 0;
  int branch_width = 0;
  int branch_count = 0;
};

/// Architecture of one local network: affine + sine hidden layers, affine
/// output (no activation on the last layer).
struct NetworkSpec {
  int input_dim = 2;
  std::vector<int> hidden_widths;
  std::optional<BranchSpec> branch;
  int output_dim = 1;

  void validate() const;   // throws std::invalid_argument
  int param_count() const;

  /// All hidden layers `width` wide, `depth` of them, scalar output.
  static NetworkSpec mlp(int width, int depth = 4, int input_dim = 2);
};

/// One dense layer in the evaluation plan. Reads `in_size` columns starting at
/// `in_offset` of the previous stage and writes `out_size` columns starting at
/// `out_offset` of the next stage. Weights are stored column-major (out x in)
/// at `w_offset` in the flat parameter vector, biases directly after.
struct LayerDesc {
  int stage = 0;
  int in_offset = 0, in_size = 0;
  int out_offset = 0, out_size = 0;
  int w_offset = 0, b_offset = 0;
  bool sine = true;
};

/// Evaluation plan: stage widths plus the dense layers connecting them.
/// Stage 0 is the input; the last stage holds the network outputs.
struct LayerPlan {
  std::vector<int> stage_widths;
  std::vector<LayerDesc> layers;
  int param_count = 0;

  static LayerPlan build(const NetworkSpec& spec);
};

/// Flat parameter storage for one local network.
struct Params {
  Eigen::VectorXd values;

  int size() const { return static_cast<int>(values.size()); }
};

/// Xavier-normal weights (std = sqrt(2/(fan_in+fan_out))), biases 0.01.
Params init_params(const NetworkSpec& spec, std::uint64_t seed, std::uint64_t stream = 0);

}  // namespace pinndd
