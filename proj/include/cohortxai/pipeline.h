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

#ifndef COHORTXAI_PIPELINE_H_
#define COHORTXAI_PIPELINE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cohortxai/classifier.h"
#include "cohortxai/dataset.h"
#include "cohortxai/parallel.h"

namespace cohortxai {

// The case class (label 1) is the minority; controls are cut into
// |minority|-sized blocks and each block is paired with the minority set.
struct SubgroupPlan {
  std::vector<std::size_t> minority;
  std::vector<std::vector<std::size_t>> partitions;
  // Bootstrap-minority mode only: one resample of `minority` per partition.
  std::vector<std::vector<std::size_t>> minority_resamples;
  std::size_t discarded = 0;
  std::uint64_t seed = 0;

  std::size_t size() const { return partitions.size(); }
  // Minority rows followed by partition g's control rows.
  std::vector<std::size_t> subgroup_rows(std::size_t g) const;
};

// N = floor(|controls| / |cases|) partitions of shuffled controls; the
// remainder is discarded. Throws InvalidArgument when a class is empty or
// controls are fewer than cases.
SubgroupPlan make_balanced_subgroups(std::span<const int> labels,
                                     std::uint64_t seed,
                                     bool bootstrap_minority = false);

// Stratified k-fold split of `indices` (labels indexed by the values in
// `indices`). Each class is shuffled and dealt round-robin, so per-fold class
// counts differ by at most one. Folds are returned sorted.
std::vector<std::vector<std::size_t>> kfold_split(
    std::span<const std::size_t> indices, std::span<const int> labels,
    std::size_t k, std::uint64_t seed);

struct FoldMetrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  bool precision_degenerate = false;
  bool recall_degenerate = false;
  friend bool operator==(const FoldMetrics&, const FoldMetrics&) = default;
};

// Positive class is 1. A zero denominator yields 0 and sets the flag.
FoldMetrics evaluate_fold(std::span<const int> predictions,
                          std::span<const int> truth);

struct MetricStat {
  double mean = 0.0;  // percent
  double std = 0.0;   // percent, population
  friend bool operator==(const MetricStat&, const MetricStat&) = default;
};

struct MetricSummary {
  MetricStat accuracy;
  MetricStat precision;
  MetricStat recall;
  std::size_t count = 0;
  friend bool operator==(const MetricSummary&, const MetricSummary&) = default;
};

MetricSummary summarize(std::span<const FoldMetrics> metrics);

struct ExperimentConfig {
  std::string pairing = "case vs. control";
  ModelKind model = ModelKind::kForest;
  FeatureSet feature_set = FeatureSet::kBoth;
  std::size_t k = 10;
  std::size_t n_random_states = 1;
  std::uint64_t seed = 0;
  ModelHyper hyper;
  // Permutation budget per explained row for the sampling explainer.
  std::size_t shap_permutations = 32;
  bool bootstrap_minority = false;
  Execution exec = Execution::kParallel;

  void validate() const;
};

struct CellResult {
  std::size_t subgroup = 0;
  std::size_t fold = 0;
  std::size_t state = 0;
  FoldMetrics metrics;
  std::vector<double> importance;  // test-fold mean |SHAP|
  friend bool operator==(const CellResult&, const CellResult&) = default;
};

struct ExperimentResult {
  std::vector<std::string> feature_names;
  std::vector<CellResult> cells;  // sorted by (subgroup, fold, state)
  MetricSummary summary;
  std::size_t n_subgroups = 0;
  std::size_t discarded = 0;
};

// Seed substreams, all derived from config.seed:
//   subgroup plan  {tag("subgroups")}
//   folds          {tag("folds"), g}
//   model          {tag("model"), g, f, s}
//   sampling SHAP  {tag("shap"), g, f, s}
// Cells run concurrently under Execution::kParallel; results are identical to
// the serial path. A failing cell raises Error annotated with its coordinates.
ExperimentResult run_experiment(const Dataset& dataset,
                                const ExperimentConfig& config);

struct RankedFeature {
  std::string name;
  double weight_percent = 0.0;
  friend bool operator==(const RankedFeature&, const RankedFeature&) = default;
};

struct RankedImportanceReport {
  std::vector<RankedFeature> entries;  // descending weight
  double total_percent() const;
};

// Softmax-normalizes each vector (max-subtracted), averages the normalized
// vectors, converts to percent and sorts descending, ties by name.
RankedImportanceReport aggregate_importance(
    const std::vector<std::vector<double>>& vectors,
    const std::vector<std::string>& feature_names);

// Rounds half away from zero to `decimals` places and prints fixed-point.
std::string format_fixed(double value, int decimals);
// "mean(std)" with one decimal, e.g. "70.7(7.2)".
std::string format_mean_std(const MetricStat& stat);
// Percent weight with two decimals, e.g. 1.3421 -> "1.34".
std::string format_weight(double percent);

struct SummaryRow {
  ModelKind model = ModelKind::kForest;
  FeatureSet feature_set = FeatureSet::kBoth;
  MetricSummary summary;
};

struct ImportanceTable {
  ModelKind model = ModelKind::kForest;
  FeatureSet feature_set = FeatureSet::kBoth;
  RankedImportanceReport report;
};

// Markdown tables: one "ML method | Feature type | Accuracy | Precision |
// Recall" grid and one top-k weight table per importance report.
std::string format_metrics_table(const std::vector<SummaryRow>& rows);
std::string format_importance_table(const RankedImportanceReport& report,
                                    std::size_t top_k = 10);
std::string format_report(const std::string& pairing,
                          const std::vector<SummaryRow>& rows,
                          const std::vector<ImportanceTable>& tables,
                          std::size_t top_k = 10);

}  // namespace cohortxai

#endif  // COHORTXAI_PIPELINE_H_
