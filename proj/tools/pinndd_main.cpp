// Command line front end: runs experiments, reproduces the benchmark tables,
// executes the verification suite, and renders stored records.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "pinndd/runner.hpp"
#include "pinndd/verify.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

struct RunFlags {
  std::string config_file;
  std::string problem, algorithm, workers, output, samples_file, dump_samples;
  long epochs = -1, outer = -1, inner = -1, trace_stride = -1;
  double alpha0 = -1, alpha_lambda = -1, alpha_d = -1, lr = -1;
  int grid_nx = -1, grid_ny = -1;
  int interior = -1, boundary_per_edge = -1, interface_default = -1;
  std::vector<int> widths;
  std::vector<long> checkpoints;
  std::vector<std::uint64_t> seeds;
  bool adam_reset = false, no_div_multiplier = false;
};

pinndd::RunConfig merge_flags(const RunFlags& f) {
  pinndd::RunConfig c;
  if (!f.config_file.empty()) c = pinndd::RunConfig::from_json_text(read_file(f.config_file));
  if (!f.problem.empty()) c.problem = f.problem;
  if (!f.algorithm.empty()) c.algorithm = f.algorithm;
  if (!f.workers.empty()) c.workers = f.workers;
  if (!f.output.empty()) c.output = f.output;
  if (!f.samples_file.empty()) c.samples_file = f.samples_file;
  if (f.epochs >= 0) c.epochs = f.epochs;
  if (f.outer >= 0) c.outer_iterations = f.outer;
  if (f.inner >= 0) c.inner_epochs = f.inner;
  if (f.trace_stride >= 0) c.loss_trace_stride = f.trace_stride;
  if (f.alpha0 >= 0) c.alpha0 = f.alpha0;
  if (f.alpha_lambda >= 0) c.alpha_lambda = f.alpha_lambda;
  if (f.alpha_d >= 0) c.alpha_d = f.alpha_d;
  if (f.lr >= 0) c.lr = f.lr;
  if (f.grid_nx >= 0) c.grid_nx = f.grid_nx;
  if (f.grid_ny >= 0) c.grid_ny = f.grid_ny;
  if (f.interior >= 0) c.samples_interior = f.interior;
  if (f.boundary_per_edge >= 0) c.samples_boundary_per_edge = f.boundary_per_edge;
  if (f.interface_default >= 0) c.samples_interface_default = f.interface_default;
  if (!f.widths.empty()) c.hidden_widths = f.widths;
  if (!f.checkpoints.empty()) c.checkpoints = f.checkpoints;
  if (!f.seeds.empty()) c.seeds = f.seeds;
  if (f.adam_reset) c.adam_reset_at_outer = true;
  if (f.no_div_multiplier) c.use_div_multiplier = false;
  return c;
}

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--config", f.config_file, "JSON config file (flags override its values)");
  cmd->add_option("--problem", f.problem,
                  "poisson_smooth | disc_coeff | poisson_interface | stokes_interface");
  cmd->add_option("--algorithm", f.algorithm, "a1 | a2 | a3");
  cmd->add_option("--epochs", f.epochs, "total training epochs (a1/a2)");
  cmd->add_option("--no", f.outer, "a3 outer iterations");
  cmd->add_option("--nl", f.inner, "a3 inner epochs per outer iteration");
  cmd->add_option("--checkpoints", f.checkpoints, "checkpoint epochs")->delimiter(',');
  cmd->add_option("--alpha0", f.alpha0, "boundary multiplier ascent rate");
  cmd->add_option("--alpha-lambda", f.alpha_lambda, "interface multiplier ascent rate");
  cmd->add_option("--alpha-d", f.alpha_d, "divergence multiplier ascent rate (Stokes)");
  cmd->add_option("--lr", f.lr, "Adam learning rate");
  cmd->add_option("--grid", [&f](const std::vector<std::string>& vals) {
        const std::string& v = vals.front();
        const auto x = v.find('x');
        if (x == std::string::npos) return false;
        f.grid_nx = std::stoi(v.substr(0, x));
        f.grid_ny = std::stoi(v.substr(x + 1));
        return true;
      },
      "grid partition, e.g. 2x1 or 3x3 (grid problems only)");
  cmd->add_option("--widths", f.widths, "hidden layer widths")->delimiter(',');
  cmd->add_option("--interior", f.interior, "interior sample count");
  cmd->add_option("--boundary-per-edge", f.boundary_per_edge, "boundary samples per edge");
  cmd->add_option("--interface-samples", f.interface_default, "samples per interface line/circle");
  cmd->add_option("--seeds", f.seeds, "replicate seeds")->delimiter(',');
  cmd->add_option("--loss-trace-stride", f.trace_stride, "record loss every k epochs (0 = off)");
  cmd->add_option("--workers", f.workers, "sequential | parallel");
  cmd->add_option("--samples", f.samples_file, "import a sample-set JSON (single seed)");
  cmd->add_option("--out", f.output, "output record path");
  cmd->add_flag("--adam-reset-at-outer", f.adam_reset, "reset Adam moments at a3 outer iterations");
  cmd->add_flag("--no-div-multiplier", f.no_div_multiplier,
                "drop the divergence multiplier term (Stokes)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partitioned physics-informed neural network solver"};
  app.require_subcommand(1);

  RunFlags run_flags;
  CLI::App* run_cmd = app.add_subcommand("run", "execute one experiment config");
  add_run_flags(run_cmd, run_flags);
  run_cmd->add_option("--dump-samples", run_flags.dump_samples,
                      "write the first seed's sample set to this path and exit");

  int table_id = 3;
  double table_scale = 1.0;
  std::string table_out = "table";
  std::vector<std::uint64_t> table_seeds = {1, 2, 3, 4, 5};
  std::string table_workers = "sequential";
  CLI::App* table_cmd =
      app.add_subcommand("reproduce-table", "run every row of a benchmark table");
  table_cmd->add_option("--table", table_id, "table id: 1, 3, 4, 5 or 6")->required();
  table_cmd->add_option("--scale", table_scale, "epoch scale factor (1 = published schedule)");
  table_cmd->add_option("--seeds", table_seeds, "replicate seeds")->delimiter(',');
  table_cmd->add_option("--workers", table_workers, "sequential | parallel");
  table_cmd->add_option("--out", table_out, "output prefix (.csv and .md are appended)");

  CLI::App* verify_cmd = app.add_subcommand("verify", "run the oracle suite");

  std::string report_in, report_format = "csv", report_out;
  CLI::App* report_cmd = app.add_subcommand("report", "render a stored run record");
  report_cmd->add_option("--in", report_in, "run record JSON")->required();
  report_cmd->add_option("--format", report_format, "csv | md");
  report_cmd->add_option("--out", report_out, "output path (stdout if omitted)");

  RunFlags sample_flags;
  std::string samples_out = "samples.json";
  CLI::App* samples_cmd =
      app.add_subcommand("samples", "generate and export a sample set as JSON");
  add_run_flags(samples_cmd, sample_flags);
  samples_cmd->add_option("--samples-out", samples_out, "output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      const pinndd::RunConfig config = merge_flags(run_flags);
      if (!run_flags.dump_samples.empty()) {
        const pinndd::ResolvedRun r = pinndd::resolve(config);
        const pinndd::SampleSet samples =
            pinndd::build_samples(r.partition, r.plan, r.seeds.front());
        write_file(run_flags.dump_samples, pinndd::sample_set_to_json(samples));
        std::cout << "wrote " << run_flags.dump_samples << "\n";
        return 0;
      }
      const pinndd::RunRecord record = pinndd::run(config);
      if (config.output.empty())
        std::cout << record.to_json_text() << "\n";
      else
        std::cout << "wrote " << config.output << "\n";
      for (const pinndd::SeedRecord& sr : record.seeds)
        if (sr.result.aborted)
          std::cerr << "seed " << sr.seed << " aborted: " << sr.result.abort_reason << "\n";
      return 0;
    }
    if (*table_cmd) {
      const pinndd::TableResult result =
          pinndd::reproduce_table(table_id, table_scale, table_seeds, table_workers);
      write_file(table_out + ".csv", pinndd::table_to_csv(result));
      write_file(table_out + ".md", pinndd::table_to_markdown(result));
      std::cout << pinndd::table_to_markdown(result) << "\n";
      std::cout << "wrote " << table_out << ".csv and " << table_out << ".md\n";
      return 0;
    }
    if (*verify_cmd) {
      const auto checks = pinndd::verify_all();
      std::cout << pinndd::format_report(checks);
      return pinndd::all_passed(checks) ? 0 : 1;
    }
    if (*report_cmd) {
      const pinndd::RunRecord record = pinndd::RunRecord::from_json_text(read_file(report_in));
      const std::string text = report_format == "md" ? pinndd::record_to_markdown(record)
                                                     : pinndd::record_to_csv(record);
      if (report_out.empty())
        std::cout << text;
      else {
        write_file(report_out, text);
        std::cout << "wrote " << report_out << "\n";
      }
      return 0;
    }
    if (*samples_cmd) {
      const pinndd::RunConfig config = merge_flags(sample_flags);
      const pinndd::ResolvedRun r = pinndd::resolve(config);
      const pinndd::SampleSet samples =
          pinndd::build_samples(r.partition, r.plan, r.seeds.front());
      write_file(samples_out, pinndd::sample_set_to_json(samples));
      std::cout << "wrote " << samples_out << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
