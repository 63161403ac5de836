// SPDX-License-Identifier: Apache-2.0
#include "semevo/toy/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <string>

namespace semevo::toy {

ToyModel train_task(ToyModel model, const ToyModel* old_model, const ToyTask& task,
                    const TrainOptions& options, TrainReport* report) {
  if (task.classes.empty()) throw Error(ErrorCode::kConfig, "task without classes");
  if (task.inputs.rows() == 0 || static_cast<std::size_t>(task.inputs.rows()) != task.labels.size()) {
    throw Error(ErrorCode::kStructural, "task inputs and labels disagree");
  }
  if (options.batch_size == 0 || !(options.base_lr > 0)) {
    throw Error(ErrorCode::kConfig, "batch size and learning rate must be positive");
  }
  std::mt19937_64 rng(options.seed);
  model.add_classes(task.classes, rng);

  std::vector<Eigen::Index> columns(task.labels.size());
  for (std::size_t i = 0; i < task.labels.size(); ++i) {
    if (std::find(task.classes.begin(), task.classes.end(), task.labels[i]) == task.classes.end()) {
      throw Error(ErrorCode::kInconsistent, "label " + std::to_string(task.labels[i]) +
                                                " is not a class of the task");
    }
    columns[i] = model.column_of(task.labels[i]);
  }

  const std::size_t old_count = old_model ? old_model->num_classes() : 0;
  double lr = options.base_lr;
  if (options.adaptive_lr && old_count > 0) {
    lr *= static_cast<double>(task.classes.size()) / static_cast<double>(old_count);
  }

  const auto n = static_cast<std::size_t>(task.inputs.rows());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Matrix batch;
  std::vector<Eigen::Index> batch_labels;
  std::size_t step = 0;
  double last = 0.0;
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < n; start += options.batch_size) {
      const std::size_t len = std::min(options.batch_size, n - start);
      batch.resize(static_cast<Eigen::Index>(len), task.inputs.cols());
      batch_labels.resize(len);
      for (std::size_t k = 0; k < len; ++k) {
        batch.row(static_cast<Eigen::Index>(k)) = task.inputs.row(static_cast<Eigen::Index>(order[start + k]));
        batch_labels[k] = columns[order[start + k]];
      }
      const LossResult loss =
          base_loss(model, old_model, batch, batch_labels, options.weights, options.loss);
      if (!std::isfinite(loss.value)) {
        throw Error(ErrorCode::kDivergence, "training loss is not finite at step " +
                                                std::to_string(step));
      }
      model.axpy(-lr, loss.gradient);
      if (!model.all_finite()) {
        throw Error(ErrorCode::kDivergence, "parameters are not finite after step " +
                                                std::to_string(step));
      }
      last = loss.value;
      ++step;
    }
  }

  if (report) {
    const Matrix logits = model.logits(task.inputs);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < n; ++i) {
      Eigen::Index best = 0;
      logits.row(static_cast<Eigen::Index>(i)).maxCoeff(&best);
      if (best == columns[i]) ++correct;
    }
    *report = {lr, step, last, static_cast<double>(correct) / static_cast<double>(n)};
  }
  return model;
}

ToyRun run_toy_scenario(const ToyScenario& spec) {
  const std::size_t num_tasks = spec.classes_per_task.size();
  if (num_tasks == 0) throw Error(ErrorCode::kConfig, "toy scenario without tasks");
  if (spec.train_per_class == 0 || spec.test_per_class == 0) {
    throw Error(ErrorCode::kConfig, "need at least one train and one test sample per class");
  }
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t total =
      std::accumulate(spec.classes_per_task.begin(), spec.classes_per_task.end(), std::size_t{0});

  Matrix means(static_cast<Eigen::Index>(total), spec.in_dim);
  for (Eigen::Index c = 0; c < means.rows(); ++c) {
    for (Eigen::Index j = 0; j < spec.in_dim; ++j) means(c, j) = normal(rng);
    means.row(c) *= spec.cluster_separation / means.row(c).norm();
  }

  std::vector<SampleInfo> samples;
  const std::size_t per_class = spec.train_per_class + spec.test_per_class;
  ClassId next = 0;
  for (std::size_t t = 0; t < num_tasks; ++t) {
    for (std::size_t k = 0; k < spec.classes_per_task[t]; ++k, ++next) {
      for (std::size_t i = 0; i < per_class; ++i) {
        samples.push_back({next, static_cast<TaskId>(t + 1),
                           i < spec.train_per_class ? Split::kTrain : Split::kTest});
      }
    }
  }
  Matrix inputs(static_cast<Eigen::Index>(samples.size()), spec.in_dim);
  for (Eigen::Index i = 0; i < inputs.rows(); ++i) {
    const auto c = static_cast<Eigen::Index>(samples[static_cast<std::size_t>(i)].class_id);
    for (Eigen::Index j = 0; j < spec.in_dim; ++j) {
      inputs(i, j) = means(c, j) + spec.cluster_spread * normal(rng);
    }
  }

  ToyRun run;
  ToyModel model = ToyModel::random(spec.in_dim, spec.hidden, spec.feature_dim, rng);
  std::vector<Matrix> stages;
  for (std::size_t t = 0; t < num_tasks; ++t) {
    ToyTask task;
    std::set<ClassId> classes;
    std::vector<Eigen::Index> rows;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (samples[i].task_id == t + 1 && samples[i].split == Split::kTrain) {
        rows.push_back(static_cast<Eigen::Index>(i));
        task.labels.push_back(samples[i].class_id);
        classes.insert(samples[i].class_id);
      }
    }
    task.classes.assign(classes.begin(), classes.end());
    task.inputs = inputs(rows, Eigen::all);
    TrainOptions opts = spec.train;
    opts.seed = spec.train.seed + 1000003ULL * (t + 1) + spec.seed;
    TrainReport report;
    const ToyModel* old = run.models.empty() ? nullptr : &run.models.back();
    model = train_task(model, old, task, opts, &report);
    run.models.push_back(model);
    run.reports.push_back(report);
    stages.push_back(model.features(inputs));
  }
  run.bank = FeatureBank(std::move(samples), std::move(stages));
  return run;
}

}  // namespace semevo::toy
