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

#ifndef COHORTXAI_CLI_H_
#define COHORTXAI_CLI_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "cohortxai/classifier.h"
#include "cohortxai/dataset.h"
#include "cohortxai/pipeline.h"

namespace cohortxai::cli {

// Environment variable that overrides the configured output directory.
inline constexpr const char* kOutputDirEnv = "COHORTXAI_OUTPUT_DIR";

// "data.csv" -> "data.kinds.json" (suffix replaces the extension).
std::filesystem::path sidecar_path(const std::filesystem::path& data,
                                   std::string_view suffix);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

// Reads a canonical dataset CSV. The kind map comes from `kinds` when given,
// else from the "<stem>.kinds.json" sidecar when present. The missing-value
// policy is applied.
Dataset load_dataset_csv(const std::filesystem::path& path,
                         const std::optional<std::filesystem::path>& kinds);

// ----------------------------------------------------------------- ingest --

struct IngestOptions {
  std::optional<std::filesystem::path> fixed_width;
  std::optional<std::filesystem::path> layout;
  std::optional<std::filesystem::path> delimited;
  std::optional<std::filesystem::path> kinds;
  std::filesystem::path out;
};

struct MissingAudit {
  std::vector<std::string> features;
  std::vector<std::size_t> missing;
  std::size_t rows = 0;
  std::size_t total_missing() const;
};

// Writes the canonical CSV, its kind sidecar and "<stem>.audit.csv".
MissingAudit cmd_ingest(const IngestOptions& options, std::ostream& log);

// ------------------------------------------------------------------ synth --

struct SynthOptions {
  SyntheticSpec spec;
  // Number of planted nutritional features to choose from the seed when
  // spec.informative is empty.
  std::size_t informative = 0;
  double effect = 1.0;
  std::filesystem::path out;
};

// Writes the CSV, "<stem>.kinds.json" and "<stem>.manifest.json" (generator
// settings and planted features). Returns the resolved spec.
SyntheticSpec cmd_synth(const SynthOptions& options, std::ostream& log);

// Planted nutritional indices drawn deterministically from `seed`.
std::vector<std::size_t> choose_planted(std::size_t count,
                                        std::size_t p_nutritional,
                                        std::uint64_t seed);

// -------------------------------------------------------------------- run --

struct InputSource {
  enum class Type { kDelimited, kFixedWidth, kSynthetic };
  Type type = Type::kDelimited;
  std::string path;
  std::string kinds;   // delimited only, optional
  std::string layout;  // fixed-width only
  SyntheticSpec synthetic;
};

struct Pairing {
  std::string name = "case vs. control";
  // Fixed-width input only: overrides the label field's codes when set.
  std::vector<std::string> case_codes;
  std::vector<std::string> control_codes;
};

struct RunConfig {
  std::optional<InputSource> input;
  Pairing pairing;
  std::vector<ModelKind> models{ModelKind::kForest};
  std::vector<FeatureSet> feature_sets{FeatureSet::kNutritional};
  std::size_t k = 10;
  std::size_t random_states = 1;
  std::optional<std::uint64_t> seed;
  std::string output_dir;
  ModelHyper hyper;
  std::size_t shap_permutations = 32;
  bool bootstrap_minority = false;
  std::size_t top_k = 10;

  // Throws InvalidArgument unless there is exactly one input, a seed and an
  // output directory.
  void validate() const;
};

nlohmann::json to_json(const RunConfig& config);
RunConfig run_config_from_json(const nlohmann::json& json);

// Applies the output-directory environment override.
void apply_environment(RunConfig& config);

struct RunOutputs {
  std::string metrics_csv;
  std::string importance_csv;
  std::string report_md;
  std::string manifest_json;
};

// Runs every (model, feature set) combination and renders all outputs in
// memory. Throws on any cell failure or failed gate.
RunOutputs execute_run(const RunConfig& config, std::ostream& log);

// execute_run, then writes metrics.csv, importance.csv, report.md and
// manifest.json into config.output_dir. Nothing is left behind on failure.
void cmd_run(const RunConfig& config, std::ostream& log);

// ------------------------------------------------------------------ train --

struct TrainOptions {
  std::filesystem::path data;
  std::optional<std::filesystem::path> kinds;
  ModelKind model = ModelKind::kForest;
  FeatureSet feature_set = FeatureSet::kNutritional;
  std::uint64_t seed = 0;
  ModelHyper hyper;
  std::filesystem::path out;
};

void cmd_train(const TrainOptions& options, std::ostream& log);

// ---------------------------------------------------------------- explain --

struct ExplainOptions {
  std::filesystem::path model;
  std::filesystem::path data;
  std::optional<std::filesystem::path> kinds;
  std::vector<std::size_t> rows;
  bool oracle = false;
  std::size_t permutations = 256;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> out;  // stdout when unset
};

struct ExplainSummary {
  std::size_t explained = 0;
  double max_local_accuracy_error = 0.0;
  std::optional<double> max_oracle_deviation;
  bool gates_passed = true;
};

// Dump: "row,feature,contribution,base_value,model_output", one line per
// (row, feature).
ExplainSummary cmd_explain(const ExplainOptions& options, std::ostream& dump,
                           std::ostream& log);

// ----------------------------------------------------------------- report --

// Re-renders report.md from metrics.csv, importance.csv and manifest.json in
// `run_dir`.
std::string render_saved_report(const std::filesystem::path& run_dir);

}  // namespace cohortxai::cli

#endif  // COHORTXAI_CLI_H_
