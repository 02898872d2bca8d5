#pragma once

#include <string>
#include <vector>

#include "pinndd/run_config.hpp"

namespace pinndd {

/// Executes the config once per seed and collects the record.
RunRecord run(const RunConfig& config);

/// One row of a benchmark table: a run config plus its display labels.
struct TableRow {
  std::string block;   // partition block label, e.g. "2 subdomains"
  std::string label;   // algorithm label, e.g. "A3"
  std::string params;  // parameter column, e.g. "Nl=100, alpha_lambda=0.1"
  RunConfig config;
};

/// The benchmark study rows for table ids 1, 3, 4, 5, 6 at an epoch scale
/// factor (scale 1 is the published 100,000-epoch schedule).
std::vector<TableRow> table_rows(int table, double scale,
                                 const std::vector<std::uint64_t>& seeds);

struct TableResult {
  std::vector<TableRow> rows;
  std::vector<RunRecord> records;  // aligned with rows
};

TableResult reproduce_table(int table, double scale, const std::vector<std::uint64_t>& seeds,
                            const std::string& workers = "sequential");

std::string table_to_csv(const TableResult& result);
std::string table_to_markdown(const TableResult& result);

/// Formats a stored run record (CSV with one row per checkpoint, or a
/// Markdown summary table).
std::string record_to_csv(const RunRecord& record);
std::string record_to_markdown(const RunRecord& record);

}  // namespace pinndd
