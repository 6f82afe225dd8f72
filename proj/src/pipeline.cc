/*
 * Copyright 2026 The cohortxai Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cohortxai/pipeline.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>

#include "cohortxai/error.h"
#include "cohortxai/explain.h"
#include "cohortxai/random.h"

namespace cohortxai {
namespace {

std::string_view feature_set_title(FeatureSet set) {
  switch (set) {
    case FeatureSet::kPhiChar:
      return "Phi CHAR";
    case FeatureSet::kNutritional:
      return "Nutritional";
    case FeatureSet::kBoth:
      return "Nutritional + Phi CHAR";
  }
  return "";
}

MetricStat stat_percent(const std::vector<double>& values) {
  MetricStat s;
  const auto n = static_cast<double>(values.size());
  for (double v : values) s.mean += v;
  s.mean /= n;
  double var = 0.0;
  for (double v : values) var += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(var / n) * 100.0;
  s.mean *= 100.0;
  return s;
}

}  // namespace

// ------------------------------------------------------------ subgroups --

std::vector<std::size_t> SubgroupPlan::subgroup_rows(std::size_t g) const {
  std::vector<std::size_t> rows =
      minority_resamples.empty() ? minority : minority_resamples.at(g);
  const auto& part = partitions.at(g);
  rows.insert(rows.end(), part.begin(), part.end());
  return rows;
}

SubgroupPlan make_balanced_subgroups(std::span<const int> labels,
                                     std::uint64_t seed,
                                     bool bootstrap_minority) {
  SubgroupPlan plan;
  plan.seed = seed;
  std::vector<std::size_t> controls;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    (labels[i] == 1 ? plan.minority : controls).push_back(i);
  }
  if (plan.minority.empty() || controls.empty()) {
    throw InvalidArgument("balanced subgrouping needs both cases and controls");
  }
  if (controls.size() < plan.minority.size()) {
    throw InvalidArgument("balanced subgrouping needs at least as many controls (" +
                          std::to_string(controls.size()) + ") as cases (" +
                          std::to_string(plan.minority.size()) + ")");
  }
  Rng rng(seed);
  std::shuffle(controls.begin(), controls.end(), rng);
  const std::size_t m = plan.minority.size();
  const std::size_t n_groups = controls.size() / m;
  plan.discarded = controls.size() - n_groups * m;
  for (std::size_t g = 0; g < n_groups; ++g) {
    std::vector<std::size_t> part(controls.begin() + g * m,
                                  controls.begin() + (g + 1) * m);
    std::ranges::sort(part);
    plan.partitions.push_back(std::move(part));
  }
  if (bootstrap_minority) {
    for (std::size_t g = 0; g < n_groups; ++g) {
      Rng draw_rng = make_rng(seed, {stream_tag("minority"), g});
      std::uniform_int_distribution<std::size_t> pick(0, m - 1);
      std::vector<std::size_t> resample(m);
      for (auto& r : resample) r = plan.minority[pick(draw_rng)];
      std::ranges::sort(resample);
      plan.minority_resamples.push_back(std::move(resample));
    }
  }
  return plan;
}

std::vector<std::vector<std::size_t>> kfold_split(
    std::span<const std::size_t> indices, std::span<const int> labels,
    std::size_t k, std::uint64_t seed) {
  if (k < 2) throw InvalidArgument("kfold_split: k must be at least 2");
  std::vector<std::size_t> by_class[2];
  for (std::size_t idx : indices) {
    if (idx >= labels.size()) {
      throw InvalidArgument("kfold_split: index out of range");
    }
    by_class[labels[idx] == 1 ? 1 : 0].push_back(idx);
  }
  for (const auto& members : by_class) {
    if (members.size() < k) {
      throw InvalidArgument("kfold_split: a class has " +
                            std::to_string(members.size()) +
                            " samples, fewer than k = " + std::to_string(k));
    }
  }
  Rng rng(seed);
  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t next = 0;
  for (auto& members : by_class) {
    std::shuffle(members.begin(), members.end(), rng);
    for (std::size_t idx : members) {
      folds[next].push_back(idx);
      next = (next + 1) % k;
    }
  }
  for (auto& fold : folds) std::ranges::sort(fold);
  return folds;
}

// -------------------------------------------------------------- metrics --

FoldMetrics evaluate_fold(std::span<const int> predictions,
                          std::span<const int> truth) {
  if (predictions.size() != truth.size()) {
    throw InvalidArgument("evaluate_fold: prediction and truth lengths differ");
  }
  if (truth.empty()) throw InvalidArgument("evaluate_fold: empty fold");
  double tp = 0, tn = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool pred = predictions[i] == 1;
    const bool actual = truth[i] == 1;
    tp += pred && actual;
    tn += !pred && !actual;
    fp += pred && !actual;
    fn += !pred && actual;
  }
  FoldMetrics m;
  m.accuracy = (tp + tn) / static_cast<double>(truth.size());
  m.precision_degenerate = tp + fp == 0;
  m.recall_degenerate = tp + fn == 0;
  m.precision = m.precision_degenerate ? 0.0 : tp / (tp + fp);
  m.recall = m.recall_degenerate ? 0.0 : tp / (tp + fn);
  return m;
}

MetricSummary summarize(std::span<const FoldMetrics> metrics) {
  MetricSummary s;
  s.count = metrics.size();
  if (metrics.empty()) return s;
  std::vector<double> acc, prec, rec;
  for (const auto& m : metrics) {
    acc.push_back(m.accuracy);
    prec.push_back(m.precision);
    rec.push_back(m.recall);
  }
  s.accuracy = stat_percent(acc);
  s.precision = stat_percent(prec);
  s.recall = stat_percent(rec);
  return s;
}

// ----------------------------------------------------------- experiment --

void ExperimentConfig::validate() const {
  if (k < 2) throw InvalidArgument("experiment: k must be at least 2");
  if (n_random_states < 1) {
    throw InvalidArgument("experiment: need at least one random state");
  }
  if (shap_permutations < 1) {
    throw InvalidArgument("experiment: need at least one SHAP permutation");
  }
}

ExperimentResult run_experiment(const Dataset& dataset,
                                const ExperimentConfig& config) {
  config.validate();
  const Dataset ds = select_feature_set(dataset, config.feature_set);
  const auto labels = ds.labels();
  const Matrix& values = ds.values();

  const SubgroupPlan plan =
      make_balanced_subgroups(labels, derive_seed(config.seed, {stream_tag("subgroups")}),
                              config.bootstrap_minority);
  std::vector<std::vector<std::vector<std::size_t>>> folds;
  for (std::size_t g = 0; g < plan.size(); ++g) {
    folds.push_back(kfold_split(plan.subgroup_rows(g), labels, config.k,
                                derive_seed(config.seed, {stream_tag("folds"), g})));
  }

  const std::size_t k = config.k;
  const std::size_t states = config.n_random_states;
  const std::size_t n_cells = plan.size() * k * states;
  std::vector<CellResult> cells(n_cells);
  std::vector<std::optional<std::string>> failures(n_cells);

#pragma omp parallel for schedule(dynamic) if (config.exec == Execution::kParallel)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(n_cells); ++c) {
    CellResult& cell = cells[c];
    cell.subgroup = static_cast<std::size_t>(c) / (k * states);
    cell.fold = (static_cast<std::size_t>(c) / states) % k;
    cell.state = static_cast<std::size_t>(c) % states;
    try {
      const auto& subgroup_folds = folds[cell.subgroup];
      const auto& test = subgroup_folds[cell.fold];
      std::vector<std::size_t> train;
      for (std::size_t f = 0; f < k; ++f) {
        if (f == cell.fold) continue;
        train.insert(train.end(), subgroup_folds[f].begin(),
                     subgroup_folds[f].end());
      }
      std::ranges::sort(train);
      const Matrix x_train = select_rows(values, train);
      const Matrix x_test = select_rows(values, test);
      std::vector<int> y_train, y_test;
      for (std::size_t r : train) y_train.push_back(labels[r]);
      for (std::size_t r : test) y_test.push_back(labels[r]);

      const std::uint64_t g = cell.subgroup, f = cell.fold, s = cell.state;
      const TrainedModel model =
          train_model(config.model, x_train, y_train, config.hyper,
                      derive_seed(config.seed, {stream_tag("model"), g, f, s}),
                      Execution::kSerial);
      std::vector<int> predictions;
      for (std::size_t i = 0; i < x_test.rows(); ++i) {
        predictions.push_back(predict_label(model, x_test.row(i)));
      }
      cell.metrics = evaluate_fold(predictions, y_test);
      const SamplingOptions sampling{
          config.shap_permutations,
          derive_seed(config.seed, {stream_tag("shap"), g, f, s}),
          Execution::kSerial};
      cell.importance = mean_abs_shap(model, x_test, x_train, sampling);
    } catch (const std::exception& e) {
      failures[c] = e.what();
    }
  }

  for (std::size_t c = 0; c < n_cells; ++c) {
    if (failures[c]) {
      throw Error("cell (subgroup " + std::to_string(cells[c].subgroup) +
                  ", fold " + std::to_string(cells[c].fold) + ", state " +
                  std::to_string(cells[c].state) + "): " + *failures[c]);
    }
  }

  ExperimentResult result;
  result.feature_names = ds.feature_names();
  result.n_subgroups = plan.size();
  result.discarded = plan.discarded;
  std::vector<FoldMetrics> metrics;
  metrics.reserve(n_cells);
  for (const auto& cell : cells) metrics.push_back(cell.metrics);
  result.summary = summarize(metrics);
  result.cells = std::move(cells);
  return result;
}

// ----------------------------------------------------------- importance --

double RankedImportanceReport::total_percent() const {
  double total = 0.0;
  for (const auto& e : entries) total += e.weight_percent;
  return total;
}

RankedImportanceReport aggregate_importance(
    const std::vector<std::vector<double>>& vectors,
    const std::vector<std::string>& feature_names) {
  if (vectors.empty()) {
    throw InvalidArgument("aggregate_importance: no importance vectors");
  }
  const std::size_t p = feature_names.size();
  std::vector<double> mean(p, 0.0);
  std::vector<double> weights(p);
  for (const auto& v : vectors) {
    if (v.size() != p) {
      throw InvalidArgument("aggregate_importance: vector length " +
                            std::to_string(v.size()) + " does not match " +
                            std::to_string(p) + " features");
    }
    double max = -std::numeric_limits<double>::infinity();
    for (double x : v) {
      if (!std::isfinite(x)) {
        throw InvalidArgument("aggregate_importance: non-finite entry");
      }
      max = std::max(max, x);
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      weights[j] = std::exp(v[j] - max);
      sum += weights[j];
    }
    for (std::size_t j = 0; j < p; ++j) mean[j] += weights[j] / sum;
  }
  RankedImportanceReport report;
  for (std::size_t j = 0; j < p; ++j) {
    report.entries.push_back(
        {feature_names[j],
         100.0 * mean[j] / static_cast<double>(vectors.size())});
  }
  std::ranges::sort(report.entries, [](const RankedFeature& a,
                                       const RankedFeature& b) {
    if (a.weight_percent != b.weight_percent) {
      return a.weight_percent > b.weight_percent;
    }
    return a.name < b.name;
  });
  return report;
}

// ------------------------------------------------------------ rendering --

std::string format_fixed(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  double rounded = std::round(value * scale);
  if (rounded == 0.0) rounded = 0.0;  // no "-0.0"
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, rounded / scale);
  return buf;
}

std::string format_mean_std(const MetricStat& stat) {
  return format_fixed(stat.mean, 1) + "(" + format_fixed(stat.std, 1) + ")";
}

std::string format_weight(double percent) { return format_fixed(percent, 2); }

std::string format_metrics_table(const std::vector<SummaryRow>& rows) {
  std::ostringstream out;
  out << "| ML method | Feature type | Accuracy | Precision | Recall |\n"
      << "|---|---|---|---|---|\n";
  for (const auto& row : rows) {
    out << "| " << display_name(row.model) << " | "
        << feature_set_title(row.feature_set) << " | "
        << format_mean_std(row.summary.accuracy) << " | "
        << format_mean_std(row.summary.precision) << " | "
        << format_mean_std(row.summary.recall) << " |\n";
  }
  return out.str();
}

std::string format_importance_table(const RankedImportanceReport& report,
                                    std::size_t top_k) {
  std::ostringstream out;
  out << "| Rank | Feature | Weight |\n|---|---|---|\n";
  const std::size_t n = std::min(top_k, report.entries.size());
  for (std::size_t i = 0; i < n; ++i) {
    out << "| " << i + 1 << " | " << report.entries[i].name << " | "
        << format_weight(report.entries[i].weight_percent) << " |\n";
  }
  return out.str();
}

std::string format_report(const std::string& pairing,
                          const std::vector<SummaryRow>& rows,
                          const std::vector<ImportanceTable>& tables,
                          std::size_t top_k) {
  std::ostringstream out;
  out << "# Classification report: " << pairing << "\n\n"
      << "## Performance (mean (standard deviation) %)\n\n"
      << format_metrics_table(rows);
  if (!rows.empty()) {
    out << "\nEvaluations per row: " << rows.front().summary.count << "\n";
  }
  if (!tables.empty()) {
    out << "\n## Top " << top_k << " features and their average weights (%)\n";
    for (const auto& table : tables) {
      out << "\n### " << display_name(table.model) << ", "
          << feature_set_title(table.feature_set) << "\n\n"
          << format_importance_table(table.report, top_k);
    }
  }
  return out.str();
}

}  // namespace cohortxai
