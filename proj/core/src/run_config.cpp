#include "pinndd/run_config.hpp"

#include <algorithm>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "pinndd/rng.hpp"

namespace pinndd {

namespace {

template <typename T>
void get_if_present(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

RunConfig RunConfig::from_json_text(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  RunConfig c;
  get_if_present(j, "problem", c.problem);
  get_if_present(j, "algorithm", c.algorithm);
  get_if_present(j, "grid_nx", c.grid_nx);
  get_if_present(j, "grid_ny", c.grid_ny);
  get_if_present(j, "hidden_widths", c.hidden_widths);
  get_if_present(j, "epochs", c.epochs);
  get_if_present(j, "outer_iterations", c.outer_iterations);
  get_if_present(j, "inner_epochs", c.inner_epochs);
  get_if_present(j, "checkpoints", c.checkpoints);
  get_if_present(j, "alpha0", c.alpha0);
  get_if_present(j, "alpha_lambda", c.alpha_lambda);
  get_if_present(j, "alpha_d", c.alpha_d);
  get_if_present(j, "lr", c.lr);
  get_if_present(j, "adam_reset_at_outer", c.adam_reset_at_outer);
  get_if_present(j, "use_div_multiplier", c.use_div_multiplier);
  get_if_present(j, "samples_interior", c.samples_interior);
  get_if_present(j, "samples_boundary_per_edge", c.samples_boundary_per_edge);
  get_if_present(j, "samples_interface_default", c.samples_interface_default);
  get_if_present(j, "samples_interface_counts", c.samples_interface_counts);
  get_if_present(j, "samples_file", c.samples_file);
  get_if_present(j, "seeds", c.seeds);
  get_if_present(j, "loss_trace_stride", c.loss_trace_stride);
  get_if_present(j, "workers", c.workers);
  get_if_present(j, "output", c.output);
  return c;
}

namespace {

nlohmann::json config_to_json(const RunConfig& c) {
  nlohmann::json j;
  j["problem"] = c.problem;
  j["algorithm"] = c.algorithm;
  j["grid_nx"] = c.grid_nx;
  j["grid_ny"] = c.grid_ny;
  j["hidden_widths"] = c.hidden_widths;
  j["epochs"] = c.epochs;
  j["outer_iterations"] = c.outer_iterations;
  j["inner_epochs"] = c.inner_epochs;
  j["checkpoints"] = c.checkpoints;
  j["alpha0"] = c.alpha0;
  j["alpha_lambda"] = c.alpha_lambda;
  j["alpha_d"] = c.alpha_d;
  j["lr"] = c.lr;
  j["adam_reset_at_outer"] = c.adam_reset_at_outer;
  j["use_div_multiplier"] = c.use_div_multiplier;
  j["samples_interior"] = c.samples_interior;
  j["samples_boundary_per_edge"] = c.samples_boundary_per_edge;
  j["samples_interface_default"] = c.samples_interface_default;
  j["samples_interface_counts"] = c.samples_interface_counts;
  j["samples_file"] = c.samples_file;
  j["seeds"] = c.seeds;
  j["loss_trace_stride"] = c.loss_trace_stride;
  j["workers"] = c.workers;
  j["output"] = c.output;
  return j;
}

}  // namespace

std::string RunConfig::to_json_text() const { return config_to_json(*this).dump(2); }

ResolvedRun resolve(const RunConfig& config) {
  ResolvedRun r;
  r.problem = make_problem(config.problem);

  if (config.grid_nx > 0 || config.grid_ny > 0) {
    if (!r.problem->partition_configurable())
      throw std::invalid_argument(config.problem + ": partition is fixed for this problem");
    r.partition =
        PartitionModel::grid(r.problem->domain(), std::max(config.grid_nx, 1),
                             std::max(config.grid_ny, 1));
  } else {
    r.partition = r.problem->default_partition();
  }
  r.problem->validate_partition(r.partition);

  NetworkSpec spec;
  if (!config.hidden_widths.empty()) {
    spec.input_dim = 2;
    spec.hidden_widths = config.hidden_widths;
    spec.output_dim = r.problem->field_count();
    if (r.problem->is_stokes())
      throw std::invalid_argument("stokes_interface: the branched default network is required");
  } else {
    spec = r.problem->default_network(r.partition.subdomain_count());
  }
  spec.validate();
  r.specs.assign(r.partition.subdomain_count(), spec);

  r.plan = r.problem->default_sample_plan();
  if (config.samples_interior > 0) r.plan.interior = config.samples_interior;
  if (config.samples_boundary_per_edge > 0)
    r.plan.boundary_per_edge = config.samples_boundary_per_edge;
  if (config.samples_interface_default > 0)
    r.plan.interface_default = config.samples_interface_default;
  if (!config.samples_interface_counts.empty())
    r.plan.interface_counts = config.samples_interface_counts;

  TrainConfig& t = r.train;
  t.algorithm = algorithm_from_string(config.algorithm);
  t.epochs = config.epochs;
  t.outer_iterations = config.outer_iterations;
  t.inner_epochs = config.inner_epochs;
  if (t.algorithm == Algorithm::a3) {
    if (t.outer_iterations < 1 || t.inner_epochs < 1)
      throw std::invalid_argument("a3 requires outer_iterations and inner_epochs");
    t.epochs = t.outer_iterations * t.inner_epochs;
  }
  t.rates.alpha0 = config.alpha0;
  t.rates.alpha_lambda = config.alpha_lambda;
  t.rates.alpha_d = config.alpha_d;
  t.lr = config.lr;
  t.adam_reset_at_outer = config.adam_reset_at_outer;
  t.use_div_multiplier = config.use_div_multiplier;
  t.loss_trace_stride = config.loss_trace_stride;
  if (config.workers == "sequential")
    t.workers = WorkerMode::sequential;
  else if (config.workers == "parallel")
    t.workers = WorkerMode::parallel;
  else
    throw std::invalid_argument("workers must be 'sequential' or 'parallel'");

  if (config.checkpoints.empty()) {
    for (long cp : {10000L, 20000L, 50000L, 100000L})
      if (cp <= t.epochs) t.checkpoints.push_back(cp);
    if (t.checkpoints.empty() && t.epochs > 0) t.checkpoints.push_back(t.epochs);
  } else {
    t.checkpoints = config.checkpoints;
    std::sort(t.checkpoints.begin(), t.checkpoints.end());
    for (long cp : t.checkpoints)
      if (cp < 1 || cp > t.epochs)
        throw std::invalid_argument("checkpoint epochs must lie in [1, total epochs]");
  }

  r.seeds = config.seeds;
  if (r.seeds.empty()) throw std::invalid_argument("at least one seed is required");
  r.samples_file = config.samples_file;
  if (!r.samples_file.empty() && r.seeds.size() != 1)
    throw std::invalid_argument("an imported sample set fixes the points; use a single seed");
  return r;
}

namespace {

nlohmann::json report_to_json(const ErrorReport& rep) {
  nlohmann::json j;
  j["epoch"] = rep.epoch;
  j["epsilon_u"] = rep.epsilon_u;
  if (rep.epsilon_p) j["epsilon_p"] = *rep.epsilon_p;
  if (rep.epsilon_p_gauge) j["epsilon_p_gauge"] = *rep.epsilon_p_gauge;
  if (rep.mean_abs_divergence) j["mean_abs_divergence"] = *rep.mean_abs_divergence;
  j["per_subdomain"] = rep.per_subdomain;
  j["grid"] = {rep.grid_nx, rep.grid_ny};
  return j;
}

nlohmann::json results_to_json(const RunRecord& record) {
  nlohmann::json seeds = nlohmann::json::array();
  for (const SeedRecord& sr : record.seeds) {
    nlohmann::json s;
    s["seed"] = sr.seed;
    s["communications"] = sr.result.communications;
    s["aborted"] = sr.result.aborted;
    if (sr.result.aborted) {
      s["abort_reason"] = sr.result.abort_reason;
      s["abort_epoch"] = sr.result.abort_epoch;
    }
    s["best_loss"] = sr.result.best_loss;
    nlohmann::json cps = nlohmann::json::array();
    for (const CheckpointRecord& cp : sr.result.checkpoints) {
      nlohmann::json c;
      c["epoch"] = cp.epoch;
      c["communications"] = cp.communications;
      c["best_loss"] = cp.best_loss;
      c["report"] = report_to_json(cp.report);
      cps.push_back(std::move(c));
    }
    s["checkpoints"] = std::move(cps);
    if (!sr.result.loss_trace.empty()) {
      nlohmann::json tr = nlohmann::json::array();
      for (const LossTraceEntry& e : sr.result.loss_trace)
        tr.push_back({{"epoch", e.epoch}, {"loss", e.loss}});
      s["loss_trace"] = std::move(tr);
    }
    seeds.push_back(std::move(s));
  }

  nlohmann::json out;
  out["seeds"] = std::move(seeds);

  // aggregate over seeds per checkpoint epoch
  if (!record.seeds.empty() && !record.seeds.front().result.checkpoints.empty()) {
    nlohmann::json agg = nlohmann::json::array();
    const auto& first = record.seeds.front().result.checkpoints;
    for (std::size_t k = 0; k < first.size(); ++k) {
      std::vector<double> eu, ep;
      for (const SeedRecord& sr : record.seeds) {
        if (k >= sr.result.checkpoints.size()) continue;
        eu.push_back(sr.result.checkpoints[k].report.epsilon_u);
        if (sr.result.checkpoints[k].report.epsilon_p)
          ep.push_back(*sr.result.checkpoints[k].report.epsilon_p);
      }
      if (eu.empty()) continue;
      nlohmann::json a;
      a["epoch"] = first[k].epoch;
      a["communications"] = first[k].communications;
      const Aggregate au = aggregate(eu);
      a["epsilon_u_mean"] = au.mean;
      if (au.std_dev) a["epsilon_u_std"] = *au.std_dev;
      if (!ep.empty()) {
        const Aggregate ap = aggregate(ep);
        a["epsilon_p_mean"] = ap.mean;
        if (ap.std_dev) a["epsilon_p_std"] = *ap.std_dev;
      }
      agg.push_back(std::move(a));
    }
    out["aggregate"] = std::move(agg);
  }
  return out;
}

}  // namespace

std::string RunRecord::results_json_text() const { return results_to_json(*this).dump(2); }

RunRecord RunRecord::from_json_text(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  RunRecord record;
  record.config = RunConfig::from_json_text(j.at("config").dump());
  for (const auto& s : j.at("results").at("seeds")) {
    SeedRecord sr;
    sr.seed = s.at("seed").get<std::uint64_t>();
    sr.result.communications = s.at("communications").get<long>();
    sr.result.aborted = s.value("aborted", false);
    sr.result.abort_reason = s.value("abort_reason", std::string{});
    sr.result.best_loss = s.at("best_loss").get<std::vector<double>>();
    for (const auto& c : s.at("checkpoints")) {
      CheckpointRecord cp;
      cp.epoch = c.at("epoch").get<long>();
      cp.communications = c.at("communications").get<long>();
      cp.best_loss = c.at("best_loss").get<std::vector<double>>();
      const auto& rep = c.at("report");
      cp.report.epoch = rep.at("epoch").get<long>();
      cp.report.epsilon_u = rep.at("epsilon_u").get<double>();
      if (rep.contains("epsilon_p")) cp.report.epsilon_p = rep.at("epsilon_p").get<double>();
      if (rep.contains("epsilon_p_gauge"))
        cp.report.epsilon_p_gauge = rep.at("epsilon_p_gauge").get<double>();
      if (rep.contains("mean_abs_divergence"))
        cp.report.mean_abs_divergence = rep.at("mean_abs_divergence").get<double>();
      cp.report.per_subdomain = rep.at("per_subdomain").get<std::vector<double>>();
      sr.result.checkpoints.push_back(std::move(cp));
    }
    if (s.contains("loss_trace")) {
      for (const auto& e : s.at("loss_trace")) {
        LossTraceEntry entry;
        entry.epoch = e.at("epoch").get<long>();
        entry.loss = e.at("loss").get<std::vector<double>>();
        sr.result.loss_trace.push_back(std::move(entry));
      }
    }
    record.seeds.push_back(std::move(sr));
  }
  return record;
}

std::string RunRecord::to_json_text() const {
  nlohmann::json j;
  j["artifact"] = {{"name", "pinndd"}, {"version", "1.0.0"}};
  j["rng"] = Rng::kAlgorithm;
  j["config"] = config_to_json(config);
  j["results"] = results_to_json(*this);
  nlohmann::json timing;
  timing["seconds_per_seed"] = nlohmann::json::array();
  double total = 0;
  for (const SeedRecord& sr : seeds) {
    timing["seconds_per_seed"].push_back(sr.seconds);
    total += sr.seconds;
  }
  timing["total_seconds"] = total;
  j["timing"] = std::move(timing);
  return j.dump(2);
}

}  // namespace pinndd
