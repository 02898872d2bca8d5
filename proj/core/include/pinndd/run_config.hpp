#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pinndd/sampling.hpp"
#include "pinndd/train.hpp"

namespace pinndd {

/// One experiment: problem, algorithm, partition, network, schedule, rates,
/// sample plan and replicate seeds. Unset optional fields resolve to the
/// benchmark defaults of the chosen problem.
struct RunConfig {
  std::string problem = "poisson_smooth";
  std::string algorithm = "a2";

  // partition override (grid problems only); 0 means problem default
  int grid_nx = 0, grid_ny = 0;

  std::vector<int> hidden_widths;  // empty -> problem default network

  long epochs = 10000;            // a1/a2 total epochs; a3: outer * inner if 0
  long outer_iterations = 0;      // a3
  long inner_epochs = 0;          // a3
  std::vector<long> checkpoints;  // empty -> {10000,20000,50000,100000} clipped to total

  double alpha0 = 0.1;
  double alpha_lambda = 0.1;
  double alpha_d = 0.0;
  double lr = 0.001;
  bool adam_reset_at_outer = false;
  bool use_div_multiplier = true;

  // sample plan overrides; 0 / empty means problem default
  int samples_interior = 0;
  int samples_boundary_per_edge = 0;
  int samples_interface_default = 0;
  std::vector<int> samples_interface_counts;
  std::string samples_file;  // import a sample-set JSON (single seed runs only)

  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  long loss_trace_stride = 0;
  std::string workers = "sequential";
  std::string output;

  static RunConfig from_json_text(const std::string& text);
  std::string to_json_text() const;

  long total_epochs() const {
    return (algorithm == "a3") ? outer_iterations * inner_epochs : epochs;
  }
};

/// Everything resolved against the problem defaults, ready to execute.
struct ResolvedRun {
  std::shared_ptr<const Problem> problem;
  PartitionModel partition;
  SamplePlan plan;
  std::vector<NetworkSpec> specs;
  TrainConfig train;
  std::vector<std::uint64_t> seeds;
  std::string samples_file;
};

ResolvedRun resolve(const RunConfig& config);

/// Per-seed training outcome as recorded.
struct SeedRecord {
  std::uint64_t seed = 0;
  TrainResult result;
  double seconds = 0;
};

/// Full experiment record: config echo, per-seed checkpoint errors, loss
/// traces, aggregate statistics, and enough provenance to re-execute. The
/// `results` JSON subtree is a deterministic function of the config.
struct RunRecord {
  RunConfig config;
  std::vector<SeedRecord> seeds;

  std::string to_json_text() const;
  /// Serialization of the deterministic results subtree only (no timings).
  std::string results_json_text() const;
  /// Reads back the fields needed to render reports (checkpoint errors,
  /// communication counts, traces); parameters are not restored.
  static RunRecord from_json_text(const std::string& text);
};

}  // namespace pinndd
