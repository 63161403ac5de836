// SPDX-License-Identifier: Apache-2.0
#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "semevo/harness/feature_dump.hpp"
#include "semevo/harness/gd_oracle.hpp"
#include "semevo/harness/results.hpp"
#include "semevo/harness/sources.hpp"
#include "support/testing.hpp"

namespace semevo {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("semevo_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------- config

TEST(Config, ParsesKeysCommentsAndEnums) {
  const RunConfig c = parse_config(
      "# comment\n"
      "solver = gd_with_queue   # trailing comment\n"
      "drift_kind = rotation\n"
      "queue_capacity = 123\n"
      "scl_denominator = all\n"
      "kd_renormalize = false\n"
      "noise_scale = 0.2\n");
  EXPECT_EQ(c.solver, SolverKind::kGdWithQueue);
  EXPECT_EQ(c.drift.kind, DriftKind::kRotation);
  EXPECT_EQ(c.queue_capacity, 123u);
  EXPECT_EQ(c.loss_options.scl_denominator, toy::SclDenominator::kAll);
  EXPECT_FALSE(c.loss_options.kd_renormalize);
  EXPECT_DOUBLE_EQ(c.noise_scale, 0.2);
}

TEST(Config, DefaultsMatchDocumentedValues) {
  const RunConfig c;
  EXPECT_EQ(c.queue_capacity, 3000u);
  EXPECT_DOUBLE_EQ(c.noise_scale, 0.02);
  EXPECT_DOUBLE_EQ(c.loss_weights.lambda1, 10.0);
  EXPECT_DOUBLE_EQ(c.loss_weights.lambda2, 0.1);
  EXPECT_DOUBLE_EQ(c.loss_weights.tau, 0.1);
  EXPECT_DOUBLE_EQ(c.min_ridge, 1e-8);
  EXPECT_DOUBLE_EQ(c.cond_threshold, 1e12);
  EXPECT_EQ(c.solver, SolverKind::kAnalytic);
}

TEST(Config, RejectsUnknownDuplicateAndMalformed) {
  auto code_of = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kStructural;
  };
  EXPECT_EQ(code_of("queue_capacityy = 3\n"), ErrorCode::kConfig);
  EXPECT_EQ(code_of("seed = 1\nseed = 2\n"), ErrorCode::kConfig);
  EXPECT_EQ(code_of("seed\n"), ErrorCode::kConfig);
  EXPECT_EQ(code_of("seed = banana\n"), ErrorCode::kConfig);
  EXPECT_EQ(code_of("solver = gd_oracle\n"), ErrorCode::kConfig);
  EXPECT_EQ(code_of("queue_capacity = 0\n"), ErrorCode::kConfig);
  EXPECT_EQ(code_of("num_tasks = 7\n"), ErrorCode::kConfig);  // 100 classes do not split
  EXPECT_EQ(code_of("tau = 0\n"), ErrorCode::kConfig);
  EXPECT_EQ(code_of("unbalanced_fraction = 1\n"), ErrorCode::kConfig);
}

TEST(Config, CanonicalTextRoundTrips) {
  RunConfig c;
  c.solver = SolverKind::kGd;
  c.gd_optimizer = GdOptimizer::kAdam;
  c.drift.nonlinear_frequency = 0.25;
  c.seed = 42;
  const RunConfig back = parse_config(canonical_text(c));
  EXPECT_EQ(canonical_text(back), canonical_text(c));
  EXPECT_EQ(config_hash(back), config_hash(c));
}

TEST(Config, HashesIgnoreOutputAndSeedsAsDocumented) {
  RunConfig a, b;
  b.output_dir = "elsewhere";
  EXPECT_EQ(config_hash(a), config_hash(b));
  b.seed = 9;
  EXPECT_NE(config_hash(a), config_hash(b));
  EXPECT_EQ(group_hash(a), group_hash(b));
  b.queue_capacity = 10;
  EXPECT_NE(group_hash(a), group_hash(b));
}

TEST(Config, EveryKeyIsSettable) {
  const RunConfig defaults;
  const std::string text = canonical_text(defaults);
  std::istringstream in(text);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    const auto eq = line.find(" = ");
    ASSERT_NE(eq, std::string::npos) << line;
    RunConfig c;
    set_config_key(c, line.substr(0, eq), line.substr(eq + 3));
    ++n;
  }
  EXPECT_EQ(n, config_keys().size());
}

TEST(Config, CommittedConfigsLoad) {
  for (const char* name : {"reference_cold10", "warm_start", "toy_cold5", "unbalanced"}) {
    EXPECT_NO_THROW(load_config(fs::path(SEMEVO_SOURCE_DIR) / "configs" / (std::string(name) + ".cfg")))
        << name;
  }
}

// ---------------------------------------------------------------- dumps

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out += static_cast<char>((v >> (8 * i)) & 0xFF);
}
void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out += static_cast<char>((v >> (8 * i)) & 0xFF);
}
void put_f32(std::string& out, float f) { put_u32(out, std::bit_cast<std::uint32_t>(f)); }

struct RawRecord {
  std::uint32_t cls, task;
  std::uint8_t split;
  std::vector<float> values;
};

std::string encode_dump(std::uint32_t d, const std::vector<RawRecord>& records,
                        std::uint32_t version = 1) {
  std::string out = "RSEFDMP1";
  put_u32(out, version);
  put_u32(out, d);
  put_u64(out, records.size());
  for (const auto& r : records) {
    put_u32(out, r.cls);
    put_u32(out, r.task);
    out += static_cast<char>(r.split);
    for (float f : r.values) put_f32(out, f);
  }
  return out;
}

std::vector<RawRecord> sample_records() {
  return {{0, 1, 0, {1.5f, -2.0f, 0.25f}},
          {1, 1, 1, {3.0f, 4.0f, -0.5f}},
          {2, 2, 0, {0.0f, 1e-3f, 7.0f}}};
}

void write_bytes(const fs::path& p, const std::string& bytes) {
  std::ofstream(p, std::ios::binary) << bytes;
}

ErrorCode read_error(const fs::path& p, std::string* message = nullptr) {
  try {
    DumpReader reader(p);
    SampleInfo info;
    RowVector row;
    while (reader.next(info, row)) {
    }
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.code();
  }
  return ErrorCode::kStructural;
}

TEST(Dump, ReaderDecodesHandEncodedBytes) {
  const fs::path dir = scratch("dump_read");
  write_bytes(dir / "a.fdump", encode_dump(3, sample_records()));
  DumpReader reader(dir / "a.fdump");
  EXPECT_EQ(reader.header().dimension, 3u);
  EXPECT_EQ(reader.header().count, 3u);
  SampleInfo info;
  RowVector row;
  const auto records = sample_records();
  std::size_t i = 0;
  while (reader.next(info, row)) {
    const auto& r = records[i++];
    EXPECT_EQ(info.class_id, r.cls);
    EXPECT_EQ(info.task_id, r.task);
    EXPECT_EQ(static_cast<int>(info.split), r.split);
    for (Eigen::Index j = 0; j < 3; ++j) EXPECT_EQ(row(j), static_cast<double>(r.values[static_cast<std::size_t>(j)]));
  }
  EXPECT_EQ(i, 3u);
}

TEST(Dump, WriterProducesExpectedBytes) {
  const fs::path dir = scratch("dump_write");
  DumpWriter w(dir / "b.fdump", 3, 3);
  for (const auto& r : sample_records()) {
    RowVector row(3);
    for (int j = 0; j < 3; ++j) row(j) = r.values[static_cast<std::size_t>(j)];
    w.write({r.cls, r.task, static_cast<Split>(r.split)}, row);
  }
  w.close();
  EXPECT_EQ(slurp(dir / "b.fdump"), encode_dump(3, sample_records()));
}

TEST(Dump, WriterRejectsShortCount) {
  const fs::path dir = scratch("dump_short");
  DumpWriter w(dir / "c.fdump", 2, 2);
  w.write({0, 1, Split::kTrain}, RowVector::Ones(2));
  EXPECT_THROW(w.close(), Error);
}

TEST(Dump, MalformedInputsNameTheProblem) {
  const fs::path dir = scratch("dump_bad");
  const std::string good = encode_dump(3, sample_records());

  std::string bad_magic = good;
  bad_magic[0] = 'X';
  write_bytes(dir / "magic.fdump", bad_magic);
  EXPECT_EQ(read_error(dir / "magic.fdump"), ErrorCode::kBadMagic);

  write_bytes(dir / "version.fdump", encode_dump(3, sample_records(), 2));
  EXPECT_EQ(read_error(dir / "version.fdump"), ErrorCode::kBadVersion);

  write_bytes(dir / "dim.fdump", encode_dump(0, {}));
  EXPECT_EQ(read_error(dir / "dim.fdump"), ErrorCode::kDimensionMismatch);

  // Cut inside the second record.
  const std::size_t cut = kDumpHeaderBytes + (9 + 12) + 5;
  write_bytes(dir / "trunc.fdump", good.substr(0, cut));
  std::string message;
  EXPECT_EQ(read_error(dir / "trunc.fdump", &message), ErrorCode::kTruncated);
  EXPECT_NE(message.find("offset " + std::to_string(kDumpHeaderBytes + 21)), std::string::npos)
      << message;

  write_bytes(dir / "trail.fdump", good + "zz");
  EXPECT_EQ(read_error(dir / "trail.fdump"), ErrorCode::kInconsistent);

  auto recs = sample_records();
  recs[1].values[0] = std::numeric_limits<float>::quiet_NaN();
  write_bytes(dir / "nan.fdump", encode_dump(3, recs));
  EXPECT_EQ(read_error(dir / "nan.fdump"), ErrorCode::kNonFinite);

  recs = sample_records();
  recs[0].split = 7;
  write_bytes(dir / "split.fdump", encode_dump(3, recs));
  EXPECT_EQ(read_error(dir / "split.fdump"), ErrorCode::kInconsistent);

  EXPECT_THROW(DumpReader(dir / "missing.fdump"), Error);
}

TEST(Dump, CheckReportsClassesAndTasks) {
  const fs::path dir = scratch("dump_check");
  write_bytes(dir / "a.fdump", encode_dump(3, sample_records()));
  const DumpSummary s = check_dump(dir / "a.fdump");
  EXPECT_EQ(s.classes, 3u);
  EXPECT_EQ(s.train_per_task.at(1), 1u);
  EXPECT_EQ(s.test_per_task.at(1), 1u);
  EXPECT_EQ(s.train_per_task.at(2), 1u);

  auto recs = sample_records();
  recs[2].cls = 0;  // class 0 claimed by two tasks
  write_bytes(dir / "b.fdump", encode_dump(3, recs));
  EXPECT_THROW(check_dump(dir / "b.fdump"), Error);
}

RunConfig tiny_config() {
  RunConfig c;
  c.num_tasks = 3;
  c.total_classes = 9;
  c.dimension = 6;
  c.train_per_class = 12;
  c.test_per_class = 8;
  c.queue_capacity = 60;
  c.drift.magnitude = 0.5;
  c.seed = 3;
  c.stream_seed = 4;
  return c;
}

TEST(Dump, StageRoundTripReproducesQuantizedRun) {
  const fs::path dir = scratch("dump_stages");
  RunConfig c = tiny_config();
  const ScenarioData data = build_source(c);
  const auto paths = write_stage_dumps(data.bank, dir);
  ASSERT_EQ(paths.size(), 3u);
  EXPECT_EQ(paths[0].filename(), "stage_001.fdump");
  const FeatureBank back = read_stage_dumps(paths);
  const FeatureBank q = data.bank.quantized();
  for (TaskId t = 1; t <= 3; ++t) EXPECT_EQ(back.stage(t), q.stage(t));
  EXPECT_EQ(back.samples(), q.samples());

  RunConfig from_dump = c;
  from_dump.source = SourceKind::kDump;
  for (const auto& p : paths) from_dump.dump_paths.push_back(p.string());
  const RunResult a = run_engine(build_source(from_dump).bank, from_dump);
  const RunResult b = run_engine(q, c);
  EXPECT_EQ(a.last_accuracy, b.last_accuracy);
  EXPECT_EQ(a.class_accuracy, b.class_accuracy);
}

TEST(Dump, UnpairedStagesRejected) {
  const fs::path dir = scratch("dump_unpaired");
  write_bytes(dir / "a.fdump", encode_dump(3, sample_records()));
  auto recs = sample_records();
  std::swap(recs[0], recs[1]);
  write_bytes(dir / "b.fdump", encode_dump(3, recs));
  EXPECT_THROW(read_stage_dumps({dir / "a.fdump", dir / "b.fdump"}), Error);
  write_bytes(dir / "c.fdump", encode_dump(2, {{0, 1, 0, {1, 2}}, {1, 1, 1, {1, 2}}, {2, 2, 0, {1, 2}}}));
  EXPECT_THROW(read_stage_dumps({dir / "a.fdump", dir / "c.fdump"}), Error);
}

// ---------------------------------------------------------------- engine

TEST(Engine, NoneSolverKeepsStalePrototypes) {
  RunConfig c = tiny_config();
  c.solver = SolverKind::kNone;
  const ScenarioData data = build_source(c);
  const RunResult r = run_engine(data.bank, c);
  ASSERT_EQ(r.tasks.size(), 3u);
  for (const auto& t : r.tasks) {
    EXPECT_EQ(t.solves, 0u);
    for (const auto& [id, s] : t.drift) EXPECT_EQ(s.cosine, 0.0);
  }
  EXPECT_TRUE(r.replay_ok);
}

TEST(Engine, AnalyticRecoversLinearDriftExactly) {
  RunConfig c = tiny_config();
  const ScenarioData data = build_source(c);
  const RunResult r = run_engine(data.bank, c);
  for (const auto& t : r.tasks) {
    for (const auto& [id, s] : t.drift) EXPECT_GT(s.cosine, 0.999999) << "task " << t.task;
    if (t.task > 1) {
      EXPECT_EQ(t.solves, t.streamed + 1);  // one solve at task start, then per arrival
      EXPECT_FALSE(t.ridge_applied);
    }
  }
  EXPECT_NEAR(r.mean_drift_similarity, 1.0, 1e-6);
  EXPECT_TRUE(r.replay_ok);
}

TEST(Engine, StreamTallies) {
  RunConfig c = tiny_config();
  const RunResult r = run_engine(build_source(c).bank, c);
  // Task t streams the test samples of 3 t classes.
  for (const auto& t : r.tasks) {
    EXPECT_EQ(t.streamed, 3 * t.task * c.test_per_class);
    EXPECT_EQ(t.evaluated, t.streamed);
    EXPECT_FALSE(t.curve.empty());
    EXPECT_EQ(t.curve.back().arrivals, t.streamed);
    EXPECT_NEAR(t.curve.back().accuracy, t.accuracy, 1e-12);
  }
  EXPECT_EQ(r.timing.samples, (2 + 3) * 3 * c.test_per_class);
  EXPECT_EQ(r.class_accuracy.size(), 9u);
}

TEST(Engine, TestLimitTruncatesEveryClass) {
  RunConfig c = tiny_config();
  c.test_limit_per_class = 3;
  const RunResult r = run_engine(build_source(c).bank, c);
  EXPECT_EQ(r.tasks.back().streamed, 9u * 3u);
}

TEST(Engine, StridesReduceSolves) {
  RunConfig c = tiny_config();
  c.update_stride = 4;
  c.resolve_stride = 4;
  const RunResult r = run_engine(build_source(c).bank, c);
  const auto& last = r.tasks.back();
  EXPECT_EQ(last.solves, 1 + last.streamed / 4);
  EXPECT_TRUE(r.replay_ok);
}

TEST(Engine, PredictBeforeUpdateStillReplays) {
  RunConfig c = tiny_config();
  c.predict_before_update = true;
  c.drift.observation_noise = 0.3;
  const RunResult r = run_engine(build_source(c).bank, c);
  EXPECT_TRUE(r.replay_ok);
}

TEST(Engine, GradientSolversRun) {
  for (SolverKind s : {SolverKind::kGd, SolverKind::kGdWithQueue}) {
    for (GdInit init : {GdInit::kIdentity, GdInit::kTrained, GdInit::kRandom}) {
      RunConfig c = tiny_config();
      c.solver = s;
      c.gd_init = init;
      c.gd_optimizer = GdOptimizer::kAdam;
      c.gd_queue_init = QueueInit::kEmpty;
      const RunResult r = run_engine(build_source(c).bank, c);
      EXPECT_TRUE(r.replay_ok);
      EXPECT_GE(r.last_accuracy, 0.0);
      EXPECT_EQ(r.tasks.back().solves, r.tasks.back().streamed);
    }
  }
}

TEST(Engine, UnbalancedKeepsExcludedClassesOutOfTheStream) {
  RunConfig c = tiny_config();
  c.test_balance = TestBalance::kUnbalanced;
  c.drift.observation_noise = 0.2;
  const RunResult r = run_engine(build_source(c).bank, c);
  EXPECT_EQ(r.selected_classes, select_classes(build_source(c).bank.all_classes(), 0.5, c.seed));
  const std::size_t selected_seen = r.selected_classes.size();
  const auto& last = r.tasks.back();
  EXPECT_EQ(last.streamed, selected_seen * c.test_per_class);
  EXPECT_EQ(last.evaluated, 9u * c.test_per_class);
  EXPECT_FALSE(std::isnan(r.excluded_accuracy));
  EXPECT_TRUE(r.replay_ok);
}

TEST(Engine, SelectionDependsOnlyOnSeed) {
  std::set<ClassId> all;
  for (ClassId c = 0; c < 100; ++c) all.insert(c);
  EXPECT_EQ(select_classes(all, 0.5, 7), select_classes(all, 0.5, 7));
  EXPECT_EQ(select_classes(all, 0.5, 7).size(), 50u);
  EXPECT_NE(select_classes(all, 0.5, 7), select_classes(all, 0.5, 8));
}

TEST(Engine, AffineProjectorRuns) {
  RunConfig c = tiny_config();
  c.affine_projector = true;
  const RunResult r = run_engine(build_source(c).bank, c);
  EXPECT_TRUE(r.replay_ok);
  EXPECT_GT(r.mean_drift_similarity, 0.999);
}

TEST(Engine, StrictPolicySurfacesSingularQueues) {
  RunConfig c = tiny_config();
  c.queue_capacity = 3;  // fewer rows than dimensions
  c.singular_policy = SingularPolicy::kStrict;
  EXPECT_THROW(run_engine(build_source(c).bank, c), Error);
  c.singular_policy = SingularPolicy::kFallback;
  const RunResult r = run_engine(build_source(c).bank, c);
  EXPECT_TRUE(r.tasks.back().ridge_applied);
}

TEST(Engine, WarmAndToySourcesRun) {
  RunConfig warm = tiny_config();
  warm.split = SplitKind::kWarm;
  warm.num_tasks = 2;
  warm.total_classes = 10;
  const RunResult w = run_engine(build_source(warm).bank, warm);
  EXPECT_EQ(w.tasks.size(), 3u);
  EXPECT_EQ(w.tasks.front().seen_classes, 4u);  // 4 + 3 + 3

  RunConfig toy = tiny_config();
  toy.source = SourceKind::kToy;
  toy.dimension = 4;
  toy.toy_in_dim = 5;
  toy.toy_hidden = 8;
  toy.toy_epochs = 3;
  const ScenarioData data = build_source(toy);
  EXPECT_EQ(data.models.size(), 3u);
  EXPECT_EQ(data.bank.dimension(), 4);
  EXPECT_TRUE(run_engine(data.bank, toy).replay_ok);
}

TEST(Engine, IdenticalSeedsGiveIdenticalResults) {
  RunConfig c = tiny_config();
  c.drift.observation_noise = 0.2;
  const RunResult a = run_engine(build_source(c).bank, c);
  const RunResult b = run_engine(build_source(c).bank, c);
  EXPECT_EQ(results_tsv({a}), results_tsv({b}));
  c.stream_seed = 99;
  const RunResult other = run_engine(build_source(c).bank, c);
  EXPECT_NE(a.run_id, other.run_id);
}

TEST(Oracle, ConvergedGdMatchesAnalyticOnLinearDrift) {
  RunConfig c = tiny_config();
  const OracleComparison cmp = compare_with_oracle(build_source(c).bank, c);
  EXPECT_EQ(cmp.oracle.config.solver, SolverKind::kOracle);
  EXPECT_NEAR(cmp.oracle.last_accuracy, cmp.analytic.last_accuracy, 0.005);
  EXPECT_GT(cmp.oracle.mean_drift_similarity, 0.999);
}

// ---------------------------------------------------------------- results

TEST(Results, HeaderOnlyForNoRuns) {
  const std::string text = results_tsv({});
  std::istringstream in(text);
  std::string first, second, third;
  std::getline(in, first);
  std::getline(in, second);
  EXPECT_EQ(first, kResultsVersionLine);
  EXPECT_EQ(second.substr(0, 6), "run_id");
  EXPECT_FALSE(std::getline(in, third));
  const ResultsTable t = parse_results(text);
  EXPECT_EQ(t.columns, results_columns());
  EXPECT_TRUE(t.rows.empty());
  // Report over an empty table is version line and header only.
  const std::string report = aggregate_report(t);
  EXPECT_EQ(std::count(report.begin(), report.end(), '\n'), 2);
}

TEST(Results, EmitWritesAllTablesAndParsesBack) {
  RunConfig c = tiny_config();
  const RunResult r = run_engine(build_source(c).bank, c);
  const fs::path dir = scratch("emit");
  emit_results({r}, dir);
  for (const char* f : {"results.tsv", "accuracy_curve.tsv", "drift_similarity.tsv", "old_new.tsv",
                        "timing.tsv"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  EXPECT_TRUE(fs::exists(dir / ("summary_" + r.run_id + ".json")));
  const ResultsTable t = read_results({dir / "results.tsv"});
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0][0], r.run_id);
  EXPECT_EQ(t.columns.size(), 27u);
}

TEST(Results, ReportMatchesHandComputedStatistics) {
  ResultsTable t;
  t.columns = results_columns();
  auto make_row = [&](const std::string& group, double last) {
    std::vector<std::string> row(t.columns.size(), "x");
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
      const auto& name = t.columns[i];
      if (name == "group_hash") row[i] = group;
      if (name == "last_accuracy") row[i] = std::to_string(last);
      if (std::find(metric_columns().begin(), metric_columns().end(), name) !=
              metric_columns().end() &&
          name != "last_accuracy") {
        row[i] = "nan";
      }
    }
    return row;
  };
  t.rows = {make_row("g1", 0.5), make_row("g2", 0.9), make_row("g1", 0.7), make_row("g1", 0.9)};
  const ResultsTable report = parse_results(aggregate_report(t));
  ASSERT_EQ(report.rows.size(), 2u);
  auto cell = [&](std::size_t r, const std::string& name) {
    const auto it = std::find(report.columns.begin(), report.columns.end(), name);
    return report.rows[r][static_cast<std::size_t>(it - report.columns.begin())];
  };
  EXPECT_EQ(cell(0, "group_hash"), "g1");
  EXPECT_EQ(cell(0, "n"), "3");
  EXPECT_EQ(cell(0, "last_accuracy_mean"), "0.700000");
  EXPECT_EQ(cell(0, "last_accuracy_std"), "0.200000");  // sample std of 0.5, 0.7, 0.9
  EXPECT_EQ(cell(1, "n"), "1");
  EXPECT_EQ(cell(1, "last_accuracy_std"), "0.000000");
  EXPECT_EQ(cell(1, "old_accuracy_mean"), "nan");
}

TEST(Results, RejectsRaggedRows) {
  std::string text = results_tsv({});
  text += "only\ttwo\n";
  EXPECT_THROW(parse_results(text), Error);
}

}  // namespace
}  // namespace semevo
