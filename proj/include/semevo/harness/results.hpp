// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "semevo/harness/engine.hpp"

namespace semevo {

inline constexpr const char* kResultsVersionLine = "# semevo-results v1";
inline constexpr const char* kReportVersionLine = "# semevo-report v1";

// Column order of results.tsv; stable across releases of format v1.
const std::vector<std::string>& results_columns();
// Numeric columns that `report` aggregates.
const std::vector<std::string>& metric_columns();

std::string results_row(const RunResult& result);
// Version line, header, then one row per result. Holds no timings, so equal
// seeds give equal bytes.
std::string results_tsv(const std::vector<RunResult>& results);

std::string summary_json(const RunResult& result);

// results.tsv, one summary_<run_id>.json per run, and long-format tables:
// accuracy_curve.tsv, drift_similarity.tsv, old_new.tsv, timing.tsv.
void emit_results(const std::vector<RunResult>& results, const std::filesystem::path& dir);

struct ResultsTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

ResultsTable parse_results(const std::string& text);
ResultsTable read_results(const std::vector<std::filesystem::path>& paths);
// One row per group_hash with the group's n and the mean and sample
// standard deviation of every metric column.
std::string aggregate_report(const ResultsTable& table);

}  // namespace semevo
