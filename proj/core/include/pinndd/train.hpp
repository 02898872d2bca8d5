#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "pinndd/loss.hpp"
#include "pinndd/metrics.hpp"
#include "pinndd/optim.hpp"

namespace pinndd {

enum class Algorithm { a1, a2, a3 };
enum class WorkerMode { sequential, parallel };

Algorithm algorithm_from_string(const std::string& s);
std::string to_string(Algorithm a);

struct TrainConfig {
  Algorithm algorithm = Algorithm::a1;
  long epochs = 0;            // total; for a3 must equal outer_iterations * inner_epochs
  long outer_iterations = 0;  // a3 only
  long inner_epochs = 0;      // a3 only
  AscentRates rates;
  double lr = 0.001;
  bool adam_reset_at_outer = false;  // reset Adam moments at a3 outer boundaries
  bool use_div_multiplier = true;    // Stokes: divergence multiplier term and ascent
  std::vector<long> checkpoints;
  long loss_trace_stride = 0;  // 0 disables the trace
  WorkerMode workers = WorkerMode::sequential;
  std::uint64_t seed = 1;
};

struct CheckpointRecord {
  long epoch = 0;
  long communications = 0;
  ErrorReport report;
  std::vector<double> best_loss;  // plain objective per subdomain
};

struct LossTraceEntry {
  long epoch = 0;
  std::vector<double> loss;  // plain objective per subdomain
};

struct TrainResult {
  std::vector<Params> best_params;
  std::vector<double> best_loss;
  long communications = 0;
  std::vector<CheckpointRecord> checkpoints;
  std::vector<LossTraceEntry> loss_trace;
  bool aborted = false;
  std::string abort_reason;
  long abort_epoch = -1;
};

/// Runs the selected training algorithm. All subdomains advance in lockstep:
/// each epoch every worker takes one full-batch Adam step on its localized
/// objective against the current tilde snapshot; snapshots are recombined
/// every epoch (a1, a2) or once per outer iteration (a3). Results are
/// bitwise identical for sequential and parallel workers.
TrainResult train(std::shared_ptr<const Problem> problem, const PartitionModel& partition,
                  const SampleSet& samples, const std::vector<NetworkSpec>& specs,
                  const TrainConfig& config);

}  // namespace pinndd
