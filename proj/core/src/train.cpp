#include "pinndd/train.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <functional>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace pinndd {

Algorithm algorithm_from_string(const std::string& s) {
  if (s == "a1") return Algorithm::a1;
  if (s == "a2") return Algorithm::a2;
  if (s == "a3") return Algorithm::a3;
  throw std::invalid_argument("unknown algorithm: " + s + " (expected a1, a2 or a3)");
}

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::a1: return "a1";
    case Algorithm::a2: return "a2";
    default: return "a3";
  }
}

namespace {

/// Fork-join pool with persistent threads. run(f) executes f(i) for every
/// worker index and returns after all have finished. Sequential mode simply
/// loops in the calling thread; both modes perform the identical per-index
/// work, so results match bitwise.
class WorkerPool {
 public:
  WorkerPool(int count, WorkerMode mode) : count_(count), parallel_(mode == WorkerMode::parallel) {
    if (!parallel_) return;
    threads_.reserve(count_);
    for (int i = 0; i < count_; ++i)
      threads_.emplace_back([this, i] { worker_loop(i); });
  }

  ~WorkerPool() {
    if (!parallel_) return;
    {
      std::unique_lock lock(mutex_);
      stop_ = true;
    }
    cv_start_.notify_all();
    for (auto& t : threads_) t.join();
  }

  void run(const std::function<void(int)>& task) {
    if (!parallel_) {
      for (int i = 0; i < count_; ++i) task(i);
      return;
    }
    {
      std::unique_lock lock(mutex_);
      task_ = &task;
      pending_ = count_;
      ++generation_;
    }
    cv_start_.notify_all();
    std::unique_lock lock(mutex_);
    cv_done_.wait(lock, [this] { return pending_ == 0; });
    task_ = nullptr;
    if (error_) {
      auto err = error_;
      error_ = nullptr;
      std::rethrow_exception(err);
    }
  }

 private:
  void worker_loop(int index) {
    std::uint64_t seen = 0;
    while (true) {
      const std::function<void(int)>* task = nullptr;
      {
        std::unique_lock lock(mutex_);
        cv_start_.wait(lock, [&] { return stop_ || generation_ != seen; });
        if (stop_) return;
        seen = generation_;
        task = task_;
      }
      try {
        (*task)(index);
      } catch (...) {
        std::unique_lock lock(mutex_);
        if (!error_) error_ = std::current_exception();
      }
      {
        std::unique_lock lock(mutex_);
        if (--pending_ == 0) cv_done_.notify_all();
      }
    }
  }

  int count_;
  bool parallel_;
  std::vector<std::thread> threads_;
  std::mutex mutex_;
  std::condition_variable cv_start_, cv_done_;
  const std::function<void(int)>* task_ = nullptr;
  int pending_ = 0;
  std::uint64_t generation_ = 0;
  bool stop_ = false;
  std::exception_ptr error_;
};

struct SubdomainState {
  std::unique_ptr<SubdomainEngine> engine;
  Params params;
  AdamState adam;
  MultiplierState multipliers;
  Eigen::VectorXd grad;
  Params best_params;
  double best_loss = std::numeric_limits<double>::infinity();
  double last_plain = 0;
  bool non_finite = false;
};

}  // namespace

TrainResult train(std::shared_ptr<const Problem> problem, const PartitionModel& partition,
                  const SampleSet& samples, const std::vector<NetworkSpec>& specs,
                  const TrainConfig& config) {
  const int nsub = partition.subdomain_count();
  if (static_cast<int>(specs.size()) != nsub)
    throw std::invalid_argument("train: one network spec per subdomain required");
  const bool a3 = config.algorithm == Algorithm::a3;
  const bool lagrangian = config.algorithm != Algorithm::a1;
  long total = config.epochs;
  long inner = 0;
  if (a3) {
    if (config.outer_iterations < 1 || config.inner_epochs < 1)
      throw std::invalid_argument("train: a3 requires outer_iterations and inner_epochs >= 1");
    inner = config.inner_epochs;
    total = config.outer_iterations * config.inner_epochs;
    if (config.epochs > 0 && config.epochs != total)
      throw std::invalid_argument("train: a3 epochs must equal outer_iterations * inner_epochs");
  } else if (total < 0) {
    throw std::invalid_argument("train: epochs must be >= 0");
  }
  for (long cp : config.checkpoints)
    if (cp < 1 || cp > total)
      throw std::invalid_argument("train: checkpoint epochs must lie in [1, total epochs]");
  const bool div_mult = config.use_div_multiplier && problem->is_stokes();

  // jump data, fixed for the whole run
  std::vector<InterfaceJumps> jumps;
  for (std::size_t g = 0; g < partition.interfaces().size(); ++g) {
    const Interface& f = partition.interfaces()[g];
    const PointMatrix& pts = samples.interface_pts[g];
    InterfaceJumps j;
    j.p.resize(pts.rows(), problem->field_count());
    j.q.resize(pts.rows(), problem->field_count());
    for (int k = 0; k < pts.rows(); ++k) {
      Eigen::VectorXd p, q;
      problem->jump(f, pts.row(k).transpose(), p, q);
      j.p.row(k) = p;
      j.q.row(k) = q;
    }
    jumps.push_back(std::move(j));
  }

  std::vector<SubdomainState> states(nsub);
  for (int i = 0; i < nsub; ++i) {
    SubdomainState& st = states[i];
    st.engine = std::make_unique<SubdomainEngine>(problem, partition, samples, specs[i], i);
    st.params = init_params(specs[i], config.seed, static_cast<std::uint64_t>(i));
    st.adam = AdamState::create(st.params.size(), config.lr);
    st.multipliers = st.engine->zero_multipliers();
    st.grad = Eigen::VectorXd::Zero(st.params.size());
    st.best_params = st.params;
  }

  TrainResult result;
  result.best_params.resize(nsub);
  result.best_loss.assign(nsub, 0.0);

  TildeValues snapshot;        // tilde values the losses are evaluated against
  TildeValues fresh_snapshot;  // a3: freshly communicated values at an outer boundary
  WorkerPool pool(nsub, config.workers);
  std::vector<std::vector<TraceMessage>> traces(nsub);

  auto collect_traces = [&](long epoch_stamp) {
    std::vector<TraceMessage> all;
    for (int i = 0; i < nsub; ++i)
      for (auto& msg : traces[i]) all.push_back(std::move(msg));
    return synchronize(all, jumps, epoch_stamp);
  };

  const auto record_checkpoint = [&](long epoch) {
    CheckpointRecord cp;
    cp.epoch = epoch;
    cp.communications = result.communications;
    std::vector<Params> best;
    for (auto& st : states) best.push_back(st.best_params);
    cp.report = evaluate_on_grid(*problem, partition, specs, best);
    cp.report.epoch = epoch;
    if (problem->is_stokes())
      cp.report.mean_abs_divergence = mean_abs_divergence(*problem, samples, specs, best);
    for (auto& st : states) cp.best_loss.push_back(st.best_loss);
    result.checkpoints.push_back(std::move(cp));
  };

  // Body e: forward at the current parameters, recombine traces (every epoch
  // for a1/a2, at outer boundaries for a3), then per subdomain: multiplier
  // ascent, best tracking against the snapshot the listing prescribes, and
  // one Adam step. Body e thereby finishes listing iteration e-1 (its
  // communication, ascent, and best check) and performs iteration e's
  // parameter update; the trailing half-body after the loop finishes the
  // last iteration without a further update.
  for (long e = 0; e <= total; ++e) {
    const bool last = e == total;
    const bool boundary_body = a3 ? (e % inner == 0) : true;

    pool.run([&](int i) {
      SubdomainState& st = states[i];
      st.engine->forward(st.params);
      traces[i].clear();
      if (boundary_body || last)
        for (std::size_t k = 0; k < st.engine->local_interfaces().size(); ++k)
          traces[i].push_back(st.engine->trace(static_cast<int>(k), e));
    });

    if (boundary_body || last) {
      TildeValues next = collect_traces(e);
      if (e > 0) ++result.communications;
      if (a3 && e > 0) {
        fresh_snapshot = std::move(next);
      } else {
        snapshot = std::move(next);
      }
    }
    const bool have_old = a3 && e > 0 && (boundary_body || last);

    std::atomic<bool> abort{false};
    pool.run([&](int i) {
      SubdomainState& st = states[i];
      // ascent and best check against the snapshot current for listing
      // iteration e-1 (a3 keeps the frozen snapshot until the boundary work
      // below swaps in the fresh one)
      st.engine->prepare(snapshot);
      if (e > 0 && lagrangian)
        st.engine->apply_ascent(st.multipliers, config.rates, div_mult);
      const LossBreakdown bd = st.engine->losses(lagrangian ? &st.multipliers : nullptr);
      const double plain = bd.plain();
      st.last_plain = plain;
      if (!std::isfinite(plain)) {
        st.non_finite = true;
        abort = true;
        return;
      }
      if (plain < st.best_loss) {
        st.best_loss = plain;
        st.best_params = st.params;
      }
      if (last) return;

      if (have_old) {
        // outer boundary: the new snapshot takes over for the next outer
        // iteration and the interface (and divergence) multipliers restart
        // from the loss gradient against it
        st.engine->prepare(fresh_snapshot);
        st.engine->reinit_interface_multipliers(st.multipliers);
        if (div_mult) st.engine->reinit_divergence_multipliers(st.multipliers);
        if (config.adam_reset_at_outer) st.adam = AdamState::create(st.params.size(), config.lr);
      }

      st.grad.setZero();
      st.engine->gradient(st.params, lagrangian ? &st.multipliers : nullptr, lagrangian,
                          div_mult, st.grad);
      if (!st.grad.allFinite()) {
        st.non_finite = true;
        abort = true;
        return;
      }
      adam_step(st.adam, st.params, st.grad);
    });

    if (have_old) snapshot = std::move(fresh_snapshot);

    if (abort) {
      result.aborted = true;
      result.abort_epoch = e;
      for (int i = 0; i < nsub; ++i)
        if (states[i].non_finite)
          result.abort_reason = "non-finite loss or gradient in subdomain " + std::to_string(i) +
                                " at epoch " + std::to_string(e);
      break;
    }

    if (config.loss_trace_stride > 0 && e % config.loss_trace_stride == 0) {
      LossTraceEntry entry;
      entry.epoch = e;
      for (auto& st : states) entry.loss.push_back(st.last_plain);
      result.loss_trace.push_back(std::move(entry));
    }
    if (std::find(config.checkpoints.begin(), config.checkpoints.end(), e) !=
        config.checkpoints.end())
      record_checkpoint(e);
  }

  for (int i = 0; i < nsub; ++i) {
    result.best_params[i] = states[i].best_params;
    result.best_loss[i] = states[i].best_loss;
  }
  return result;
}

}  // namespace pinndd
