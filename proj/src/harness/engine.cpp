// SPDX-License-Identifier: Apache-2.0
#include "semevo/harness/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <optional>
#include <random>

namespace semevo {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a * 0x9E3779B97F4A7C15ULL + b;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

PrototypeTable prototypes_at_stage(const FeatureBank& bank, const std::set<ClassId>& classes,
                                   TaskId stage) {
  std::vector<FeatureRecord> records;
  const Matrix& z = bank.stage(stage);
  for (std::size_t i = 0; i < bank.num_samples(); ++i) {
    const SampleInfo& s = bank.samples()[i];
    if (s.split == Split::kTrain && classes.count(s.class_id)) {
      records.push_back({z.row(static_cast<Eigen::Index>(i)).transpose(), s.class_id, stage});
    }
  }
  return compute_prototypes(records);
}

Projector identity_like(Eigen::Index d, bool affine) {
  return affine ? Projector(Matrix::Identity(d, d), RowVector::Zero(d)) : Projector::identity(d);
}

Projector random_projector(Eigen::Index d, bool affine, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double bound = 1.0 / std::sqrt(static_cast<double>(d));
  std::uniform_real_distribution<double> u(-bound, bound);
  Matrix w(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) w(i, j) = u(rng);
  }
  return affine ? Projector(std::move(w), RowVector::Zero(d)) : Projector(std::move(w));
}

double mean_class_accuracy(const std::map<ClassId, std::pair<std::size_t, std::size_t>>& counts,
                           const std::set<ClassId>& subset) {
  double sum = 0;
  std::size_t n = 0;
  for (const auto& [c, hits] : counts) {
    if (!subset.count(c) || hits.second == 0) continue;
    sum += static_cast<double>(hits.first) / static_cast<double>(hits.second);
    ++n;
  }
  return n ? sum / static_cast<double>(n) : std::nan("");
}

struct LoggedPrediction {
  std::size_t sample;
  std::size_t snapshot;
  ClassId predicted;
};

/// State for the stream of one task t >= 2.
class TaskStream {
 public:
  TaskStream(const FeatureBank& bank, const RunConfig& cfg, TaskId t, const PrototypeTable& carried,
             const PrototypeTable& fresh)
      : bank_(bank), cfg_(cfg), t_(t), carried_(carried), fresh_(fresh),
        old_classes_(carried.class_ids()), d_(bank.dimension()) {}

  void start(PhaseTiming& timing) {
    const auto t0 = Clock::now();
    const bool affine = cfg_.affine_projector;
    Projector trained = identity_like(d_, affine);
    if (cfg_.train_projector) {
      const auto rows = bank_.indices(t_, Split::kTrain);
      const std::vector<Eigen::Index> idx(rows.begin(), rows.end());
      const Matrix old_rows = bank_.stage(t_ - 1)(idx, Eigen::all);
      const Matrix new_rows = bank_.stage(t_)(idx, Eigen::all);
      trained = solve_analytic(moments_from_rows(old_rows, new_rows, affine), analytic_options())
                    .projector;
    }
    switch (cfg_.solver) {
      case SolverKind::kAnalytic:
      case SolverKind::kGdWithQueue: {
        if (cfg_.solver == SolverKind::kGdWithQueue && cfg_.gd_queue_init == QueueInit::kEmpty) {
          queue_.emplace(d_, cfg_.queue_capacity);
        } else {
          queue_.emplace(init_with_pseudo_features(carried_, trained, cfg_.queue_capacity,
                                                   cfg_.noise_scale, mix(cfg_.seed, t_))
                             .queues);
        }
        break;
      }
      default:
        break;
    }
    Projector init = identity_like(d_, affine);
    if (cfg_.gd_init == GdInit::kTrained) init = trained;
    if (cfg_.gd_init == GdInit::kRandom) init = random_projector(d_, affine, mix(cfg_.seed + 7, t_));
    switch (cfg_.solver) {
      case SolverKind::kAnalytic:
        resolve();
        break;
      case SolverKind::kGd:
      case SolverKind::kGdWithQueue:
        gd_.emplace(init, GdOptions{cfg_.gd_lr, cfg_.gd_optimizer});
        set_projector(init);
        break;
      case SolverKind::kOracle: {
        const auto rows = stream_rows_;
        const std::vector<Eigen::Index> idx(rows.begin(), rows.end());
        const LeastSquaresMoments m = moments_from_rows(bank_.stage(t_ - 1)(idx, Eigen::all),
                                                        bank_.stage(t_)(idx, Eigen::all), affine);
        const SolveResult r = solve_gradient_descent_converged(
            m, init, ConvergenceOptions{cfg_.oracle_tol, cfg_.oracle_max_steps});
        residual_ = r.report.residual;
        condition_ = r.report.gram_condition;
        ++solves_;
        set_projector(r.projector);
        break;
      }
      case SolverKind::kNone:
        break;
    }
    timing.solve += seconds_since(t0);
  }

  void set_stream(std::vector<std::size_t> rows) { stream_rows_ = std::move(rows); }

  bool has_projector() const { return cfg_.solver != SolverKind::kNone; }

  // Records one paired arrival, pushing and re-solving per the strides.
  void observe(std::size_t sample, PhaseTiming& timing) {
    if (!has_projector() || cfg_.solver == SolverKind::kOracle) return;
    auto t0 = Clock::now();
    pending_.push_back(sample);
    ++arrivals_;
    if (pending_.size() >= cfg_.update_stride) {
      const std::vector<Eigen::Index> idx(pending_.begin(), pending_.end());
      const Matrix old_rows = bank_.stage(t_ - 1)(idx, Eigen::all);
      const Matrix new_rows = bank_.stage(t_)(idx, Eigen::all);
      if (queue_) {
        queue_->push(old_rows, new_rows);
      } else {
        latest_old_ = old_rows;
        latest_new_ = new_rows;
      }
      pending_.clear();
      dirty_ = true;
    }
    timing.queue_update += seconds_since(t0);
    if (dirty_ && arrivals_ % cfg_.resolve_stride == 0) {
      t0 = Clock::now();
      resolve();
      timing.solve += seconds_since(t0);
    }
  }

  ClassId predict(const Eigen::Ref<const Vector>& z) const { return index_->predict(z); }
  std::size_t snapshot_id() const { return snapshots_.size() - 1; }

  void finish_without_projector() {
    current_table_ = carried_.merged(fresh_);
    index_.emplace(current_table_);
  }

  const PrototypeTable& table() const { return current_table_; }
  const PrototypeTable& evolved_old() const { return evolved_old_; }
  const std::vector<Projector>& snapshots() const { return snapshots_; }
  std::size_t solves() const { return solves_; }
  double residual() const { return residual_; }
  double condition() const { return condition_; }
  bool ridge_applied() const { return ridge_applied_; }

  AnalyticOptions analytic_options() const {
    AnalyticOptions o;
    o.ridge = cfg_.ridge;
    o.min_ridge = cfg_.min_ridge;
    o.condition_threshold = cfg_.cond_threshold;
    o.singular_policy = cfg_.singular_policy;
    o.affine = cfg_.affine_projector;
    return o;
  }

 private:
  void resolve() {
    if (cfg_.solver == SolverKind::kAnalytic) {
      const SolveResult r = solve_analytic(*queue_, analytic_options());
      residual_ = r.report.residual;
      condition_ = r.report.gram_condition;
      ridge_applied_ = ridge_applied_ || r.report.ridge_applied;
      set_projector(r.projector);
    } else if (queue_) {
      const LeastSquaresMoments m = queue_->moments(cfg_.affine_projector);
      gd_->run(m, cfg_.gd_steps);
      residual_ = mean_squared_residual(m, gd_->projector());
      set_projector(gd_->projector());
    } else {
      gd_->run_rows(latest_old_, latest_new_, cfg_.gd_steps);
      residual_ = (gd_->projector().apply_rows(latest_old_) - latest_new_).squaredNorm() /
                  static_cast<double>(latest_old_.rows());
      set_projector(gd_->projector());
    }
    ++solves_;
    dirty_ = false;
  }

  void set_projector(const Projector& p) {
    evolved_old_ = evolve_prototypes(carried_, p, old_classes_);
    current_table_ = evolved_old_.merged(fresh_);
    index_.emplace(current_table_);
    snapshots_.push_back(p);
  }

  const FeatureBank& bank_;
  const RunConfig& cfg_;
  TaskId t_;
  const PrototypeTable& carried_;
  const PrototypeTable& fresh_;
  std::set<ClassId> old_classes_;
  Eigen::Index d_;

  std::optional<QueuePair> queue_;
  std::optional<GradientDescentSolver> gd_;
  Matrix latest_old_;
  Matrix latest_new_;
  std::vector<std::size_t> pending_;
  std::vector<std::size_t> stream_rows_;
  std::size_t arrivals_ = 0;
  bool dirty_ = false;

  PrototypeTable evolved_old_;
  PrototypeTable current_table_;
  std::optional<NcmIndex> index_;
  std::vector<Projector> snapshots_;
  std::size_t solves_ = 0;
  double residual_ = 0;
  double condition_ = 0;
  bool ridge_applied_ = false;
};

}  // namespace

PhaseTiming& PhaseTiming::operator+=(const PhaseTiming& o) {
  forward += o.forward;
  queue_update += o.queue_update;
  solve += o.solve;
  predict += o.predict;
  samples += o.samples;
  return *this;
}

std::string make_run_id(const RunConfig& config) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s-s%llu-r%llu-%08llx", to_string(config.solver),
                static_cast<unsigned long long>(config.seed),
                static_cast<unsigned long long>(config.stream_seed),
                static_cast<unsigned long long>(config_hash(config) & 0xFFFFFFFFULL));
  return buf;
}

std::set<ClassId> select_classes(const std::set<ClassId>& all, double fraction, std::uint64_t seed) {
  std::vector<ClassId> ids(all.begin(), all.end());
  std::mt19937_64 rng(mix(seed, 0x5E1EC7));
  std::shuffle(ids.begin(), ids.end(), rng);
  const auto keep = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(ids.size())));
  return {ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(std::min(keep, ids.size()))};
}

RunResult run_engine(const FeatureBank& bank, const RunConfig& config) {
  validate(config);
  RunResult result;
  result.config = config;
  result.run_id = make_run_id(config);
  result.config_hash = config_hash(config);
  result.group_hash = group_hash(config);
  result.selected_classes = select_classes(bank.all_classes(), config.unbalanced_fraction, config.seed);
  result.replay_checked = config.replay_audit;
  const bool unbalanced = config.test_balance == TestBalance::kUnbalanced;

  PrototypeTable carried;  // p^{t-1} for every class seen so far
  std::map<ClassId, std::pair<std::size_t, std::size_t>> class_hits;
  double drift_sum = 0;
  std::size_t drift_count = 0;

  for (TaskId t = 1; t <= bank.num_tasks(); ++t) {
    TaskMetrics m;
    m.task = t;
    const std::set<ClassId> seen = bank.classes_up_to(t);
    m.seen_classes = seen.size();
    const PrototypeTable fresh = prototypes_at_stage(bank, bank.task_classes(t), t);

    // Test samples of every seen class, optionally truncated per class.
    std::vector<std::size_t> streamed, held_out;
    std::map<ClassId, std::size_t> per_class;
    for (std::size_t i = 0; i < bank.num_samples(); ++i) {
      const SampleInfo& s = bank.samples()[i];
      if (s.split != Split::kTest || s.task_id > t) continue;
      if (config.test_limit_per_class && per_class[s.class_id] >= config.test_limit_per_class) {
        continue;
      }
      ++per_class[s.class_id];
      if (unbalanced && !result.selected_classes.count(s.class_id)) {
        held_out.push_back(i);
      } else {
        streamed.push_back(i);
      }
    }
    std::mt19937_64 shuffle_rng(mix(config.stream_seed, t));
    std::shuffle(streamed.begin(), streamed.end(), shuffle_rng);

    const bool first = t == 1;
    RunConfig task_cfg = config;
    if (first) task_cfg.solver = SolverKind::kNone;
    TaskStream stream(bank, task_cfg, t, carried, fresh);
    stream.set_stream(streamed);
    PhaseTiming timing;
    if (first || task_cfg.solver == SolverKind::kNone) {
      stream.finish_without_projector();
    } else {
      stream.start(timing);
    }
    timing = {};  // setup cost is not per-sample

    const Matrix& z_new_stage = bank.stage(t);
    std::vector<LoggedPrediction> log;
    log.reserve(streamed.size());
    std::map<ClassId, std::pair<std::size_t, std::size_t>> task_hits;
    const std::size_t stride =
        std::max<std::size_t>(1, streamed.size() / std::max<std::size_t>(1, config.curve_points));
    for (std::size_t k = 0; k < streamed.size(); ++k) {
      const std::size_t i = streamed[k];
      auto t0 = Clock::now();
      const Vector z = z_new_stage.row(static_cast<Eigen::Index>(i)).transpose();
      timing.forward += seconds_since(t0);
      if (!config.predict_before_update) stream.observe(i, timing);
      t0 = Clock::now();
      const ClassId pred = stream.predict(z);
      timing.predict += seconds_since(t0);
      log.push_back({i, stream.has_projector() ? stream.snapshot_id() : 0, pred});
      if (config.predict_before_update) stream.observe(i, timing);
      ++timing.samples;

      const ClassId truth = bank.samples()[i].class_id;
      auto& hits = task_hits[truth];
      ++hits.second;
      if (pred == truth) {
        ++hits.first;
        ++m.correct;
      }
      if ((k + 1) % stride == 0 || k + 1 == streamed.size()) {
        m.curve.push_back({k + 1, static_cast<double>(k + 1) / static_cast<double>(seen.size()),
                           static_cast<double>(m.correct) / static_cast<double>(k + 1)});
      }
    }
    m.streamed = streamed.size();
    for (std::size_t i : held_out) {
      const ClassId pred = stream.predict(z_new_stage.row(static_cast<Eigen::Index>(i)).transpose());
      const ClassId truth = bank.samples()[i].class_id;
      auto& hits = task_hits[truth];
      ++hits.second;
      if (pred == truth) {
        ++hits.first;
        ++m.correct;
      }
    }
    m.evaluated = streamed.size() + held_out.size();
    m.accuracy = m.evaluated ? static_cast<double>(m.correct) / static_cast<double>(m.evaluated) : 0;
    m.solves = stream.solves();
    m.residual = stream.residual();
    m.gram_condition = stream.condition();
    m.ridge_applied = stream.ridge_applied();

    if (config.replay_audit) {
      std::size_t replay_correct = 0;
      std::size_t active = static_cast<std::size_t>(-1);
      std::optional<NcmIndex> index;
      for (const LoggedPrediction& e : log) {
        if (e.snapshot != active) {
          const PrototypeTable table =
              stream.has_projector()
                  ? evolve_prototypes(carried, stream.snapshots()[e.snapshot], carried.class_ids())
                        .merged(fresh)
                  : carried.merged(fresh);
          index.emplace(table);
          active = e.snapshot;
        }
        const ClassId again =
            index->predict(z_new_stage.row(static_cast<Eigen::Index>(e.sample)).transpose());
        if (again != e.predicted) ++m.replay_mismatches;
        if (again == bank.samples()[e.sample].class_id) ++replay_correct;
      }
      std::size_t logged_correct = 0;
      for (const LoggedPrediction& e : log) {
        if (e.predicted == bank.samples()[e.sample].class_id) ++logged_correct;
      }
      if (m.replay_mismatches != 0 || replay_correct != logged_correct) result.replay_ok = false;
    }

    if (!first) {
      const std::set<ClassId> old = bank.classes_up_to(t - 1);
      const PrototypeTable estimated = stream.has_projector() ? stream.evolved_old() : carried;
      m.drift = true_drift_similarity(carried, estimated, prototypes_at_stage(bank, old, t));
      for (const auto& [c, s] : m.drift) {
        drift_sum += s.cosine;
        ++drift_count;
      }
      result.timing += timing;
    }
    carried = stream.table();
    if (t == bank.num_tasks()) class_hits = task_hits;
    result.tasks.push_back(std::move(m));
  }

  for (const auto& [c, hits] : class_hits) {
    result.class_accuracy[c] =
        hits.second ? static_cast<double>(hits.first) / static_cast<double>(hits.second) : 0.0;
  }
  const std::set<ClassId> all = bank.all_classes();
  const std::set<ClassId>& first_task = bank.task_classes(1);
  const std::set<ClassId>& last_task = bank.task_classes(bank.num_tasks());
  std::set<ClassId> old_group, new_group, excluded;
  for (ClassId c : all) {
    const bool is_new = config.split == SplitKind::kCold ? last_task.count(c) != 0
                                                         : first_task.count(c) == 0;
    (is_new ? new_group : old_group).insert(c);
    if (!result.selected_classes.count(c)) excluded.insert(c);
  }
  result.last_accuracy = mean_class_accuracy(class_hits, all);
  result.old_accuracy = mean_class_accuracy(class_hits, old_group);
  result.new_accuracy = mean_class_accuracy(class_hits, new_group);
  result.select_accuracy = mean_class_accuracy(class_hits, result.selected_classes);
  result.excluded_accuracy = mean_class_accuracy(class_hits, excluded);
  result.mean_drift_similarity =
      drift_count ? drift_sum / static_cast<double>(drift_count) : std::nan("");
  return result;
}

}  // namespace semevo
