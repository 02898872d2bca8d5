#include "pinndd/runner.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pinndd {

namespace {

SampleSet load_sample_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open sample file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return sample_set_from_json(buffer.str());
}

std::string format_sig(double v, int digits = 6) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

}  // namespace

RunRecord run(const RunConfig& config) {
  const ResolvedRun r = resolve(config);
  RunRecord record;
  record.config = config;
  for (const std::uint64_t seed : r.seeds) {
    const auto t0 = std::chrono::steady_clock::now();
    SampleSet samples = r.samples_file.empty() ? build_samples(r.partition, r.plan, seed)
                                               : load_sample_file(r.samples_file);
    TrainConfig train_config = r.train;
    train_config.seed = seed;
    SeedRecord sr;
    sr.seed = seed;
    sr.result = train(r.problem, r.partition, samples, r.specs, train_config);
    sr.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    record.seeds.push_back(std::move(sr));
  }
  if (!config.output.empty()) {
    std::ofstream out(config.output);
    if (!out) throw std::runtime_error("cannot write record: " + config.output);
    out << record.to_json_text() << "\n";
  }
  return record;
}

namespace {

struct A3Row {
  long inner;
  double alpha_lambda;
  double alpha_d;  // Stokes only
};

RunConfig base_config(const std::string& problem, const std::string& algorithm, long total,
                      const std::vector<long>& checkpoints,
                      const std::vector<std::uint64_t>& seeds) {
  RunConfig c;
  c.problem = problem;
  c.algorithm = algorithm;
  c.epochs = total;
  c.checkpoints = checkpoints;
  c.seeds = seeds;
  c.alpha0 = 0.1;
  c.alpha_lambda = 0.0;
  c.alpha_d = 0.0;
  return c;
}

std::string a3_params_label(const A3Row& row, bool stokes) {
  std::ostringstream os;
  os << "Nl=" << row.inner << ", alpha_lambda=" << row.alpha_lambda;
  if (stokes) os << ", alpha_d=" << row.alpha_d;
  return os.str();
}

}  // namespace

std::vector<TableRow> table_rows(int table, double scale,
                                 const std::vector<std::uint64_t>& seeds) {
  const long total = std::lround(100000 * scale);
  std::vector<long> checkpoints;
  for (long cp : {10000L, 20000L, 50000L, 100000L}) {
    const long scaled = std::lround(cp * scale);
    if (scaled >= 1 && scaled <= total) checkpoints.push_back(scaled);
  }
  if (checkpoints.empty() || checkpoints.back() != total)
    throw std::invalid_argument("table scale must keep the checkpoint schedule integral");

  std::vector<TableRow> rows;
  const auto add_a1_a2 = [&](const std::string& problem, const std::string& block, int nx, int ny,
                             double a2_alpha_lambda, double a2_alpha_d) {
    RunConfig a1 = base_config(problem, "a1", total, checkpoints, seeds);
    a1.grid_nx = nx;
    a1.grid_ny = ny;
    rows.push_back({block, "A1", "", a1});
    RunConfig a2 = a1;
    a2.algorithm = "a2";
    a2.alpha_lambda = a2_alpha_lambda;
    a2.alpha_d = a2_alpha_d;
    std::ostringstream os;
    os << "alpha_lambda=" << a2_alpha_lambda;
    if (a2_alpha_d > 0) os << ", alpha_d=" << a2_alpha_d;
    rows.push_back({block, "A2", os.str(), a2});
  };
  const auto add_a3 = [&](const std::string& problem, const std::string& block, int nx, int ny,
                          const std::vector<A3Row>& a3_rows, bool stokes) {
    for (const A3Row& row : a3_rows) {
      if (total % row.inner != 0)
        throw std::invalid_argument("table scale incompatible with Nl=" +
                                    std::to_string(row.inner));
      RunConfig c = base_config(problem, "a3", total, checkpoints, seeds);
      c.grid_nx = nx;
      c.grid_ny = ny;
      c.inner_epochs = row.inner;
      c.outer_iterations = total / row.inner;
      c.alpha_lambda = row.alpha_lambda;
      c.alpha_d = row.alpha_d;
      rows.push_back({block, "A3", a3_params_label(row, stokes), c});
    }
  };

  switch (table) {
    case 1: {
      // single network study: plain loss vs boundary-constrained loss
      RunConfig j1 = base_config("poisson_smooth", "a1", total, checkpoints, seeds);
      j1.grid_nx = 1;
      j1.grid_ny = 1;
      j1.samples_interior = 1000;
      rows.push_back({"single network", "J1", "", j1});
      RunConfig j2 = j1;
      j2.algorithm = "a2";
      rows.push_back({"single network", "J2", "alpha0=0.1", j2});
      break;
    }
    case 3: {
      const std::vector<A3Row> a3_rows = {
          {100, 0.1, 0}, {200, 0.05, 0}, {500, 0.01, 0}, {1000, 0.005, 0}};
      const int grids[4][2] = {{2, 1}, {2, 2}, {3, 3}, {4, 4}};
      const char* blocks[4] = {"2 subdomains", "4 subdomains", "9 subdomains", "16 subdomains"};
      for (int b = 0; b < 4; ++b) {
        add_a1_a2("poisson_smooth", blocks[b], grids[b][0], grids[b][1], 0.1, 0);
        add_a3("poisson_smooth", blocks[b], grids[b][0], grids[b][1], a3_rows, false);
      }
      break;
    }
    case 4: {
      const std::vector<A3Row> a3_rows = {
          {100, 0.05, 0}, {200, 0.01, 0}, {500, 0.002, 0}, {1000, 0.001, 0}};
      add_a1_a2("disc_coeff", "discontinuous coefficient", 0, 0, 0.1, 0);
      add_a3("disc_coeff", "discontinuous coefficient", 0, 0, a3_rows, false);
      break;
    }
    case 5: {
      const std::vector<A3Row> a3_rows = {
          {100, 0.005, 0}, {200, 0.003, 0}, {500, 0.001, 0}, {1000, 0.0005, 0}};
      add_a1_a2("poisson_interface", "Poisson interfaces", 0, 0, 0.1, 0);
      add_a3("poisson_interface", "Poisson interfaces", 0, 0, a3_rows, false);
      break;
    }
    case 6: {
      const std::vector<A3Row> a3_rows = {
          {100, 0.02, 0.2}, {200, 0.001, 0.1}, {500, 0.0, 0.05}, {1000, 0.0, 0.01}};
      add_a1_a2("stokes_interface", "Stokes interface", 0, 0, 0.1, 0.1);
      add_a3("stokes_interface", "Stokes interface", 0, 0, a3_rows, true);
      break;
    }
    default:
      throw std::invalid_argument("unknown table id (expected 1, 3, 4, 5 or 6)");
  }
  return rows;
}

TableResult reproduce_table(int table, double scale, const std::vector<std::uint64_t>& seeds,
                            const std::string& workers) {
  TableResult result;
  result.rows = table_rows(table, scale, seeds);
  for (TableRow& row : result.rows) {
    row.config.workers = workers;
    result.records.push_back(run(row.config));
  }
  return result;
}

namespace {

struct Cell {
  std::string mean_std;
  std::string comm;
};

std::vector<Cell> record_cells(const RunRecord& record, bool pressure) {
  std::vector<Cell> cells;
  const std::size_t ncp =
      record.seeds.empty() ? 0 : record.seeds.front().result.checkpoints.size();
  for (std::size_t k = 0; k < ncp; ++k) {
    std::vector<double> eu, ep;
    long comm = 0;
    for (const SeedRecord& sr : record.seeds) {
      eu.push_back(sr.result.checkpoints[k].report.epsilon_u);
      if (pressure && sr.result.checkpoints[k].report.epsilon_p)
        ep.push_back(*sr.result.checkpoints[k].report.epsilon_p);
      comm = sr.result.checkpoints[k].communications;
    }
    const Aggregate au = aggregate(eu);
    std::ostringstream os;
    os << format_sig(au.mean);
    if (au.std_dev) os << " (" << format_sig(*au.std_dev, 3) << ")";
    if (pressure && !ep.empty()) {
      const Aggregate ap = aggregate(ep);
      os << ", " << format_sig(ap.mean);
      if (ap.std_dev) os << " (" << format_sig(*ap.std_dev, 3) << ")";
    }
    cells.push_back({os.str(), std::to_string(comm)});
  }
  return cells;
}

std::vector<long> checkpoint_epochs(const TableResult& result) {
  for (const RunRecord& record : result.records)
    for (const SeedRecord& sr : record.seeds) {
      std::vector<long> out;
      for (const CheckpointRecord& cp : sr.result.checkpoints) out.push_back(cp.epoch);
      if (!out.empty()) return out;
    }
  return {};
}

}  // namespace

std::string table_to_csv(const TableResult& result) {
  std::ostringstream os;
  const std::vector<long> epochs = checkpoint_epochs(result);
  os << "block,algorithm,parameters";
  for (long e : epochs)
    os << ",eps_u_mean@" << e << ",eps_u_std@" << e << ",eps_p_mean@" << e << ",eps_p_std@" << e
       << ",communications@" << e;
  os << "\n";
  for (std::size_t r = 0; r < result.rows.size(); ++r) {
    const TableRow& row = result.rows[r];
    const RunRecord& record = result.records[r];
    os << '"' << row.block << "\"," << row.label << ",\"" << row.params << '"';
    const std::size_t ncp =
        record.seeds.empty() ? 0 : record.seeds.front().result.checkpoints.size();
    for (std::size_t k = 0; k < ncp; ++k) {
      std::vector<double> eu, ep;
      long comm = 0;
      for (const SeedRecord& sr : record.seeds) {
        eu.push_back(sr.result.checkpoints[k].report.epsilon_u);
        if (sr.result.checkpoints[k].report.epsilon_p)
          ep.push_back(*sr.result.checkpoints[k].report.epsilon_p);
        comm = sr.result.checkpoints[k].communications;
      }
      const Aggregate au = aggregate(eu);
      os << "," << format_sig(au.mean) << "," << (au.std_dev ? format_sig(*au.std_dev) : "");
      if (!ep.empty()) {
        const Aggregate ap = aggregate(ep);
        os << "," << format_sig(ap.mean) << "," << (ap.std_dev ? format_sig(*ap.std_dev) : "");
      } else {
        os << ",,";
      }
      os << "," << comm;
    }
    os << "\n";
  }
  return os.str();
}

std::string table_to_markdown(const TableResult& result) {
  std::ostringstream os;
  const std::vector<long> epochs = checkpoint_epochs(result);
  std::string block;
  for (std::size_t r = 0; r < result.rows.size(); ++r) {
    const TableRow& row = result.rows[r];
    if (row.block != block) {
      block = row.block;
      os << "\n### " << block << "\n\n";
      os << "| Algorithm | Parameters |";
      for (long e : epochs) os << " " << e << " epochs |";
      os << "\n|---|---|";
      for (std::size_t k = 0; k < epochs.size(); ++k) os << "---|";
      os << "\n";
    }
    os << "| " << row.label << " | " << row.params << " |";
    const bool pressure = result.records[r].config.problem == "stokes_interface";
    for (const Cell& cell : record_cells(result.records[r], pressure))
      os << " " << cell.mean_std << " (" << cell.comm << ") |";
    os << "\n";
  }
  return os.str();
}

std::string record_to_csv(const RunRecord& record) {
  std::ostringstream os;
  os << "seed,epoch,communications,epsilon_u";
  const bool pressure = record.config.problem == "stokes_interface";
  if (pressure) os << ",epsilon_p,epsilon_p_gauge,mean_abs_divergence";
  os << "\n";
  for (const SeedRecord& sr : record.seeds) {
    for (const CheckpointRecord& cp : sr.result.checkpoints) {
      os << sr.seed << "," << cp.epoch << "," << cp.communications << ","
         << format_sig(cp.report.epsilon_u);
      if (pressure)
        os << "," << (cp.report.epsilon_p ? format_sig(*cp.report.epsilon_p) : "") << ","
           << (cp.report.epsilon_p_gauge ? format_sig(*cp.report.epsilon_p_gauge) : "") << ","
           << (cp.report.mean_abs_divergence ? format_sig(*cp.report.mean_abs_divergence) : "");
      os << "\n";
    }
  }
  return os.str();
}

std::string record_to_markdown(const RunRecord& record) {
  std::ostringstream os;
  os << "| Epoch | Communications | eps_u mean (std) |";
  const bool pressure = record.config.problem == "stokes_interface";
  if (pressure) os << " eps_p mean (std) |";
  os << "\n|---|---|---|";
  if (pressure) os << "---|";
  os << "\n";
  const std::size_t ncp =
      record.seeds.empty() ? 0 : record.seeds.front().result.checkpoints.size();
  for (std::size_t k = 0; k < ncp; ++k) {
    std::vector<double> eu, ep;
    long comm = 0, epoch = 0;
    for (const SeedRecord& sr : record.seeds) {
      eu.push_back(sr.result.checkpoints[k].report.epsilon_u);
      if (sr.result.checkpoints[k].report.epsilon_p)
        ep.push_back(*sr.result.checkpoints[k].report.epsilon_p);
      comm = sr.result.checkpoints[k].communications;
      epoch = sr.result.checkpoints[k].epoch;
    }
    const Aggregate au = aggregate(eu);
    os << "| " << epoch << " | " << comm << " | " << format_sig(au.mean);
    if (au.std_dev) os << " (" << format_sig(*au.std_dev, 3) << ")";
    os << " |";
    if (pressure && !ep.empty()) {
      const Aggregate ap = aggregate(ep);
      os << " " << format_sig(ap.mean);
      if (ap.std_dev) os << " (" << format_sig(*ap.std_dev, 3) << ")";
      os << " |";
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace pinndd
