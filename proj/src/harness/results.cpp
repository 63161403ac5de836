// SPDX-License-Identifier: Apache-2.0
#include "semevo/harness/results.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace semevo {

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string sci(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

std::string hex(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string join(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += '\t';
    out += cells[i];
  }
  return out;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, '\t')) out.push_back(cell);
  if (!line.empty() && line.back() == '\t') out.emplace_back();
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

double final_residual(const RunResult& r) { return r.tasks.empty() ? 0.0 : r.tasks.back().residual; }

nlohmann::json finite_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

}  // namespace

const std::vector<std::string>& results_columns() {
  static const std::vector<std::string> cols = {
      "run_id",         "group_hash",       "config_hash",       "source",
      "split",          "num_tasks",        "total_classes",     "dimension",
      "drift_kind",     "solver",           "queue_capacity",    "noise_scale",
      "update_stride",  "resolve_stride",   "gd_steps",          "test_balance",
      "test_limit_per_class", "seed",       "stream_seed",       "last_accuracy",
      "old_accuracy",   "new_accuracy",     "select_accuracy",   "excluded_accuracy",
      "mean_drift_similarity", "final_residual", "replay_ok"};
  return cols;
}

const std::vector<std::string>& metric_columns() {
  static const std::vector<std::string> cols = {
      "last_accuracy",     "old_accuracy",          "new_accuracy",  "select_accuracy",
      "excluded_accuracy", "mean_drift_similarity", "final_residual"};
  return cols;
}

std::string results_row(const RunResult& r) {
  const RunConfig& c = r.config;
  return join({r.run_id,
               hex(r.group_hash),
               hex(r.config_hash),
               to_string(c.source),
               to_string(c.split),
               std::to_string(c.num_tasks),
               std::to_string(c.total_classes),
               std::to_string(c.dimension),
               to_string(c.drift.kind),
               to_string(c.solver),
               std::to_string(c.queue_capacity),
               num(c.noise_scale),
               std::to_string(c.update_stride),
               std::to_string(c.resolve_stride),
               std::to_string(c.gd_steps),
               to_string(c.test_balance),
               std::to_string(c.test_limit_per_class),
               std::to_string(c.seed),
               std::to_string(c.stream_seed),
               num(r.last_accuracy),
               num(r.old_accuracy),
               num(r.new_accuracy),
               num(r.select_accuracy),
               num(r.excluded_accuracy),
               num(r.mean_drift_similarity),
               sci(final_residual(r)),
               r.replay_checked ? (r.replay_ok ? "yes" : "no") : "skipped"});
}

std::string results_tsv(const std::vector<RunResult>& results) {
  std::string out = std::string(kResultsVersionLine) + "\n" + join(results_columns()) + "\n";
  for (const RunResult& r : results) out += results_row(r) + "\n";
  return out;
}

std::string summary_json(const RunResult& r) {
  nlohmann::ordered_json j;
  j["format"] = "semevo-summary v1";
  j["run_id"] = r.run_id;
  j["config_hash"] = hex(r.config_hash);
  j["group_hash"] = hex(r.group_hash);
  j["seed"] = r.config.seed;
  j["stream_seed"] = r.config.stream_seed;
  j["config"] = canonical_text(r.config);
  j["last_accuracy"] = finite_or_null(r.last_accuracy);
  j["old_accuracy"] = finite_or_null(r.old_accuracy);
  j["new_accuracy"] = finite_or_null(r.new_accuracy);
  j["select_accuracy"] = finite_or_null(r.select_accuracy);
  j["excluded_accuracy"] = finite_or_null(r.excluded_accuracy);
  j["mean_drift_similarity"] = finite_or_null(r.mean_drift_similarity);
  j["replay"] = r.replay_checked ? (r.replay_ok ? "ok" : "mismatch") : "skipped";
  auto& tasks = j["tasks"] = nlohmann::ordered_json::array();
  for (const TaskMetrics& m : r.tasks) {
    nlohmann::ordered_json t;
    t["task"] = m.task;
    t["seen_classes"] = m.seen_classes;
    t["streamed"] = m.streamed;
    t["evaluated"] = m.evaluated;
    t["accuracy"] = m.accuracy;
    t["solves"] = m.solves;
    t["residual"] = finite_or_null(m.residual);
    t["gram_condition"] = finite_or_null(m.gram_condition);
    t["ridge_applied"] = m.ridge_applied;
    t["replay_mismatches"] = m.replay_mismatches;
    tasks.push_back(std::move(t));
  }
  auto& per_class = j["class_accuracy"] = nlohmann::ordered_json::object();
  for (const auto& [c, a] : r.class_accuracy) per_class[std::to_string(c)] = a;
  const PhaseTiming& tm = r.timing;
  j["timing_seconds_per_sample"] = {
      {"samples", tm.samples},
      {"forward", tm.per_sample(tm.forward)},
      {"queue_update", tm.per_sample(tm.queue_update)},
      {"solve", tm.per_sample(tm.solve)},
      {"predict", tm.per_sample(tm.predict)},
      {"total", tm.per_sample(tm.total())}};
  return j.dump(2) + "\n";
}

void emit_results(const std::vector<RunResult>& results, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::kIo, "cannot create output directory " + dir.string());
  }
  write_file(dir / "results.tsv", results_tsv(results));

  std::string curve = std::string(kResultsVersionLine) +
                      "\nrun_id\tsolver\ttask\tarrivals\tper_class\taccuracy\n";
  std::string drift = std::string(kResultsVersionLine) +
                      "\nrun_id\tsolver\ttask\tclass_id\tcosine\tdegenerate\n";
  std::string old_new = std::string(kResultsVersionLine) + "\nrun_id\tsolver\tgroup\taccuracy\n";
  std::string timing = std::string(kResultsVersionLine) +
                       "\nrun_id\tsolver\tphase\tseconds_per_sample\n";
  for (const RunResult& r : results) {
    const std::string head = r.run_id + "\t" + to_string(r.config.solver) + "\t";
    for (const TaskMetrics& m : r.tasks) {
      for (const CurvePoint& p : m.curve) {
        curve += head + std::to_string(m.task) + "\t" + std::to_string(p.arrivals) + "\t" +
                 num(p.per_class) + "\t" + num(p.accuracy) + "\n";
      }
      for (const auto& [c, s] : m.drift) {
        drift += head + std::to_string(m.task) + "\t" + std::to_string(c) + "\t" + num(s.cosine) +
                 "\t" + (s.degenerate ? "1" : "0") + "\n";
      }
    }
    old_new += head + "old\t" + num(r.old_accuracy) + "\n";
    old_new += head + "new\t" + num(r.new_accuracy) + "\n";
    const PhaseTiming& tm = r.timing;
    timing += head + "forward\t" + sci(tm.per_sample(tm.forward)) + "\n";
    timing += head + "queue_update\t" + sci(tm.per_sample(tm.queue_update)) + "\n";
    timing += head + "solve\t" + sci(tm.per_sample(tm.solve)) + "\n";
    timing += head + "predict\t" + sci(tm.per_sample(tm.predict)) + "\n";
    timing += head + "total\t" + sci(tm.per_sample(tm.total())) + "\n";
    write_file(dir / ("summary_" + r.run_id + ".json"), summary_json(r));
  }
  write_file(dir / "accuracy_curve.tsv", curve);
  write_file(dir / "drift_similarity.tsv", drift);
  write_file(dir / "old_new.tsv", old_new);
  write_file(dir / "timing.tsv", timing);
}

ResultsTable parse_results(const std::string& text) {
  ResultsTable table;
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto cells = split_tabs(line);
    if (!have_header) {
      table.columns = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != table.columns.size()) {
      throw Error(ErrorCode::kInconsistent, "results row has " + std::to_string(cells.size()) +
                                                " cells, header has " +
                                                std::to_string(table.columns.size()));
    }
    table.rows.push_back(std::move(cells));
  }
  if (!have_header) table.columns = results_columns();
  return table;
}

ResultsTable read_results(const std::vector<std::filesystem::path>& paths) {
  ResultsTable merged;
  merged.columns = results_columns();
  for (const auto& path : paths) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    ResultsTable t = parse_results(ss.str());
    if (t.columns != merged.columns) {
      throw Error(ErrorCode::kInconsistent, path.string() + " has a different column layout");
    }
    for (auto& row : t.rows) merged.rows.push_back(std::move(row));
  }
  return merged;
}

std::string aggregate_report(const ResultsTable& table) {
  auto col = [&](const std::string& name) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
      if (table.columns[i] == name) return i;
    }
    throw Error(ErrorCode::kInconsistent, "results lack column " + name);
  };
  const std::vector<std::string> keep = {"group_hash", "source",         "split",
                                         "num_tasks",  "drift_kind",     "solver",
                                         "queue_capacity", "noise_scale", "test_balance",
                                         "test_limit_per_class"};
  std::vector<std::string> header = keep;
  header.emplace_back("n");
  for (const auto& m : metric_columns()) {
    header.push_back(m + "_mean");
    header.push_back(m + "_std");
  }
  std::string out = std::string(kReportVersionLine) + "\n" + join(header) + "\n";

  // Groups in first-appearance order.
  std::vector<std::string> order;
  std::map<std::string, std::vector<std::size_t>> groups;
  const std::size_t g = col("group_hash");
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    auto [it, inserted] = groups.try_emplace(table.rows[r][g]);
    if (inserted) order.push_back(table.rows[r][g]);
    it->second.push_back(r);
  }
  for (const auto& key : order) {
    const auto& members = groups[key];
    std::vector<std::string> cells;
    for (const auto& k : keep) cells.push_back(table.rows[members.front()][col(k)]);
    cells.push_back(std::to_string(members.size()));
    for (const auto& m : metric_columns()) {
      const std::size_t c = col(m);
      double sum = 0;
      std::size_t n = 0;
      for (std::size_t r : members) {
        const double v = std::strtod(table.rows[r][c].c_str(), nullptr);
        if (std::isnan(v)) continue;
        sum += v;
        ++n;
      }
      const double mean = n ? sum / static_cast<double>(n) : std::nan("");
      double sq = 0;
      for (std::size_t r : members) {
        const double v = std::strtod(table.rows[r][c].c_str(), nullptr);
        if (!std::isnan(v)) sq += (v - mean) * (v - mean);
      }
      const double sd = n > 1 ? std::sqrt(sq / static_cast<double>(n - 1)) : (n ? 0.0 : std::nan(""));
      cells.push_back(m == "final_residual" ? sci(mean) : num(mean));
      cells.push_back(m == "final_residual" ? sci(sd) : num(sd));
    }
    out += join(cells) + "\n";
  }
  return out;
}

}  // namespace semevo
