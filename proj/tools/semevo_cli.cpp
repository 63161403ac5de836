// SPDX-License-Identifier: Apache-2.0
// semevo: command-line driver for runs, sweeps, dumps and reports.
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "semevo/harness/feature_dump.hpp"
#include "semevo/harness/gd_oracle.hpp"
#include "semevo/harness/results.hpp"
#include "semevo/harness/sources.hpp"

namespace {

using namespace semevo;

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfig: return 2;
    case ErrorCode::kIo: return 3;
    case ErrorCode::kBadMagic:
    case ErrorCode::kBadVersion:
    case ErrorCode::kTruncated:
    case ErrorCode::kDimensionMismatch:
    case ErrorCode::kNonFinite:
    case ErrorCode::kInconsistent: return 4;
    case ErrorCode::kSingular:
    case ErrorCode::kDivergence:
    case ErrorCode::kDegenerateInput: return 5;
    case ErrorCode::kStructural:
    case ErrorCode::kMissingClass: return 6;
  }
  return 1;
}

RunConfig make_config(const std::string& path, const std::vector<std::string>& overrides) {
  RunConfig cfg = path.empty() ? RunConfig{} : load_config(path);
  for (const std::string& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::kConfig, "--set expects key=value, got " + kv);
    set_config_key(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  validate(cfg);
  return cfg;
}

void print_result(const RunResult& r) {
  std::printf("%-40s last %.4f  old %.4f  new %.4f  drift-cos %.4f  replay %s\n", r.run_id.c_str(),
              r.last_accuracy, r.old_accuracy, r.new_accuracy, r.mean_drift_similarity,
              r.replay_checked ? (r.replay_ok ? "ok" : "MISMATCH") : "skipped");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  for (char ch : s + ",") {
    if (ch == ',') {
      if (!item.empty()) out.push_back(item);
      item.clear();
    } else if (ch != ' ') {
      item += ch;
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Test-time drift compensation engine for class-incremental learning"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;

  auto* run = app.add_subcommand("run", "Run one scenario and write results");
  run->add_option("-c,--config", config_path, "Config file");
  run->add_option("-s,--set", overrides, "Override a key, key=value");
  run->add_option("-o,--out", out_dir, "Output directory (overrides output_dir)");

  std::string sweep_key, sweep_values, sweep_seeds;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  auto* sweep = app.add_subcommand("sweep", "Grid over one key and seeds, in parallel");
  sweep->add_option("-c,--config", config_path, "Config file");
  sweep->add_option("-s,--set", overrides, "Override a key, key=value");
  sweep->add_option("-k,--key", sweep_key, "Key to sweep")->required();
  sweep->add_option("-v,--values", sweep_values, "Comma-separated values")->required();
  sweep->add_option("--seeds", sweep_seeds, "Comma-separated seeds (default: config seed)");
  sweep->add_option("-j,--jobs", jobs, "Parallel workers");
  sweep->add_option("-o,--out", out_dir, "Output directory");

  auto* oracle = app.add_subcommand("gd-oracle", "Offline converged GD projector vs the online solve");
  oracle->add_option("-c,--config", config_path, "Config file");
  oracle->add_option("-s,--set", overrides, "Override a key, key=value");
  oracle->add_option("-o,--out", out_dir, "Output directory");

  auto* gen = app.add_subcommand("gen", "Write one feature dump per encoder stage");
  gen->add_option("-c,--config", config_path, "Config file");
  gen->add_option("-s,--set", overrides, "Override a key, key=value");
  gen->add_option("-o,--out", out_dir, "Dump directory")->required();

  std::vector<std::string> files;
  auto* check = app.add_subcommand("ingest-check", "Validate feature dumps");
  check->add_option("files", files, "Dump files")->required();

  std::string report_out;
  auto* report = app.add_subcommand("report", "Aggregate results files by setting");
  report->add_option("files", files, "results.tsv files")->required();
  report->add_option("-o,--out", report_out, "Write the report here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      RunConfig cfg = make_config(config_path, overrides);
      if (!out_dir.empty()) cfg.output_dir = out_dir;
      const ScenarioData data = build_source(cfg);
      const RunResult r = run_engine(data.bank, cfg);
      emit_results({r}, cfg.output_dir);
      print_result(r);
      return r.replay_ok ? 0 : 7;
    }
    if (sweep->parsed()) {
      const RunConfig base = make_config(config_path, overrides);
      const std::filesystem::path dir = out_dir.empty() ? base.output_dir : out_dir;
      std::vector<RunConfig> grid;
      const auto seeds = sweep_seeds.empty() ? std::vector<std::string>{std::to_string(base.seed)}
                                             : split_list(sweep_seeds);
      for (const auto& value : split_list(sweep_values)) {
        for (const auto& seed : seeds) {
          RunConfig cfg = base;
          set_config_key(cfg, sweep_key, value);
          set_config_key(cfg, "seed", seed);
          validate(cfg);
          grid.push_back(cfg);
        }
      }
      std::vector<RunResult> results(grid.size());
      std::vector<std::future<void>> pending;
      std::size_t next = 0;
      auto worker = [&](std::size_t i) {
        RunConfig cfg = grid[i];
        cfg.output_dir = (dir / "runs" / make_run_id(cfg)).string();
        const ScenarioData data = build_source(cfg);
        results[i] = run_engine(data.bank, cfg);
        emit_results({results[i]}, cfg.output_dir);
      };
      while (next < grid.size() || !pending.empty()) {
        while (next < grid.size() && pending.size() < jobs) {
          pending.push_back(std::async(std::launch::async, worker, next++));
        }
        pending.front().get();
        pending.erase(pending.begin());
      }
      std::vector<std::filesystem::path> parts;
      for (const RunResult& r : results) {
        print_result(r);
        parts.push_back(dir / "runs" / r.run_id / "results.tsv");
      }
      const ResultsTable merged = read_results(parts);
      std::ofstream(dir / "results.tsv") << results_tsv(results);
      std::ofstream(dir / "report.tsv") << aggregate_report(merged);
      std::cout << aggregate_report(merged);
      return 0;
    }
    if (oracle->parsed()) {
      RunConfig cfg = make_config(config_path, overrides);
      if (!out_dir.empty()) cfg.output_dir = out_dir;
      const ScenarioData data = build_source(cfg);
      const OracleComparison cmp = compare_with_oracle(data.bank, cfg);
      emit_results({cmp.analytic, cmp.oracle}, cfg.output_dir);
      print_result(cmp.analytic);
      print_result(cmp.oracle);
      std::printf("gd_oracle - analytic last accuracy: %+.4f\n",
                  cmp.oracle.last_accuracy - cmp.analytic.last_accuracy);
      return 0;
    }
    if (gen->parsed()) {
      const RunConfig cfg = make_config(config_path, overrides);
      const ScenarioData data = build_source(cfg);
      for (const auto& p : write_stage_dumps(data.bank, out_dir)) std::printf("%s\n", p.c_str());
      return 0;
    }
    if (check->parsed()) {
      for (const auto& f : files) {
        const DumpSummary s = check_dump(f);
        std::printf("%s: version %u, d %u, %llu records, %zu classes\n", f.c_str(), s.header.version,
                    s.header.dimension, static_cast<unsigned long long>(s.header.count), s.classes);
        for (const auto& [t, n] : s.train_per_task) {
          const auto it = s.test_per_task.find(t);
          std::printf("  task %u: %zu train, %zu test\n", t, n,
                      it == s.test_per_task.end() ? std::size_t{0} : it->second);
        }
      }
      return 0;
    }
    if (report->parsed()) {
      std::vector<std::filesystem::path> paths(files.begin(), files.end());
      const std::string text = aggregate_report(read_results(paths));
      if (report_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(report_out);
        if (!out) throw Error(ErrorCode::kIo, "cannot write " + report_out);
        out << text;
      }
      return 0;
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "semevo: %s\n", e.what());
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "semevo: %s\n", e.what());
    return 1;
  }
  return 0;
}
