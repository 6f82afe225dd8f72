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

#include "cohortxai/cli.h"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "cohortxai/error.h"
#include "cohortxai/explain.h"
#include "cohortxai/model_io.h"
#include "cohortxai/random.h"

namespace cohortxai::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string number(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

double parse_double(std::string_view s, std::string_view what) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("bad number '" + std::string(s) + "' in " + std::string(what));
  }
  return value;
}

std::vector<std::string> split(std::string_view line, char delim) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t end = line.find(delim, pos);
    out.emplace_back(line.substr(pos, end == std::string_view::npos ? end : end - pos));
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
  return out;
}

std::vector<std::vector<std::string>> read_csv_rows(const fs::path& path) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(read_file(path));
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    rows.push_back(split(line, ','));
  }
  return rows;
}

KindMap kinds_for(const Dataset& ds) {
  KindMap kinds;
  for (const auto& spec : ds.specs()) kinds.emplace(spec.name, spec.kind);
  return kinds;
}

void write_dataset(const Dataset& ds, const fs::path& out) {
  write_file(out, write_delimited(ds));
  write_file(sidecar_path(out, ".kinds.json"), kind_map_to_json(kinds_for(ds)));
}

std::string_view input_type_name(InputSource::Type type) {
  switch (type) {
    case InputSource::Type::kDelimited:
      return "delimited";
    case InputSource::Type::kFixedWidth:
      return "fixed_width";
    case InputSource::Type::kSynthetic:
      return "synthetic";
  }
  return "delimited";
}

json synthetic_json(const SyntheticSpec& spec) {
  json planted = json::array();
  for (const auto& p : spec.informative) {
    planted.push_back({{"feature", p.feature}, {"effect", p.effect}});
  }
  return {{"n_cases", spec.n_cases},
          {"n_controls", spec.n_controls},
          {"p_nutritional", spec.p_nutritional},
          {"p_phichar", spec.p_phichar},
          {"informative", std::move(planted)},
          {"missing_probability", spec.missing_probability},
          {"seed", spec.seed}};
}

SyntheticSpec synthetic_from(const json& j) {
  SyntheticSpec spec;
  spec.n_cases = j.value("n_cases", spec.n_cases);
  spec.n_controls = j.value("n_controls", spec.n_controls);
  spec.p_nutritional = j.value("p_nutritional", spec.p_nutritional);
  spec.p_phichar = j.value("p_phichar", spec.p_phichar);
  spec.missing_probability = j.value("missing_probability", spec.missing_probability);
  spec.seed = j.value("seed", spec.seed);
  if (j.contains("informative")) {
    for (const json& p : j["informative"]) {
      spec.informative.push_back({p.at("feature").get<std::size_t>(),
                                  p.at("effect").get<double>()});
    }
  }
  return spec;
}

Dataset load_input(const RunConfig& config) {
  const InputSource& input = *config.input;
  switch (input.type) {
    case InputSource::Type::kDelimited:
      return load_dataset_csv(input.path,
                              input.kinds.empty()
                                  ? std::nullopt
                                  : std::optional<fs::path>(input.kinds));
    case InputSource::Type::kFixedWidth: {
      LayoutSpec layout = parse_layout_json(read_file(input.layout));
      for (auto& field : layout.fields) {
        if (field.type != FieldType::kLabel) continue;
        if (!config.pairing.case_codes.empty()) {
          field.case_codes = config.pairing.case_codes;
        }
        if (!config.pairing.control_codes.empty()) {
          field.control_codes = config.pairing.control_codes;
        }
      }
      return apply_missing_policy(parse_fixed_width(read_file(input.path), layout));
    }
    case InputSource::Type::kSynthetic:
      return generate_synthetic(input.synthetic);
  }
  throw InvalidArgument("unknown input type");
}

std::string settings_section(const json& manifest) {
  std::ostringstream out;
  const json& h = manifest.at("hyper");
  out << "\n## Settings\n\n"
      << "- Cross-validation folds: " << manifest.at("k").get<std::size_t>() << "\n"
      << "- Random states: " << manifest.at("random_states").get<std::size_t>() << "\n"
      << "- Master seed: " << manifest.at("seed").get<std::uint64_t>() << "\n"
      << "- Random forest: " << h["forest"]["n_trees"].get<std::size_t>()
      << " trees, min leaf size " << h["forest"]["min_leaf_size"].get<std::size_t>()
      << ", features per split "
      << (h["forest"]["features_per_split"].get<std::size_t>() == 0
              ? std::string("ceil(sqrt(p))")
              : std::to_string(h["forest"]["features_per_split"].get<std::size_t>()))
      << ", bootstrap " << (h["forest"]["bootstrap"].get<bool>() ? "on" : "off") << "\n"
      << "- SVM (RBF): C " << number(h["svm"]["c"].get<double>()) << ", gamma "
      << (h["svm"]["gamma"].is_null() ? std::string("1/(p * mean feature variance)")
                                      : number(h["svm"]["gamma"].get<double>()))
      << ", tol " << number(h["svm"]["tol"].get<double>()) << ", max passes "
      << h["svm"]["max_passes"].get<int>() << "\n"
      << "- Neural network: " << h["mlp"]["hidden_layers"].get<std::size_t>()
      << " hidden layer(s) of " << h["mlp"]["hidden_width"].get<std::size_t>()
      << " ReLU units, lr " << number(h["mlp"]["learning_rate"].get<double>())
      << ", epochs " << h["mlp"]["epochs"].get<std::size_t>() << ", batch "
      << h["mlp"]["batch"].get<std::size_t>() << "\n"
      << "- Sampling SHAP permutations per row: "
      << manifest.at("shap_permutations").get<std::size_t>() << "\n";
  return out.str();
}

std::string render_report(const json& manifest,
                          const std::vector<SummaryRow>& rows,
                          const std::vector<ImportanceTable>& tables) {
  return format_report(manifest.at("pairing").at("name").get<std::string>(), rows,
                       tables, manifest.at("top_k").get<std::size_t>()) +
         settings_section(manifest);
}

constexpr std::string_view kMetricsHeader =
    "model,feature_set,row,subgroup,fold,state,accuracy_pct,precision_pct,"
    "recall_pct,precision_degenerate,recall_degenerate,evaluations\n";
constexpr std::string_view kImportanceHeader =
    "model,feature_set,rank,feature,weight_pct\n";

}  // namespace

// ---------------------------------------------------------------- files --

fs::path sidecar_path(const fs::path& data, std::string_view suffix) {
  fs::path out = data;
  out.replace_extension();
  out += suffix;
  return out;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, std::string_view contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

Dataset load_dataset_csv(const fs::path& path,
                         const std::optional<fs::path>& kinds) {
  DelimitedOptions options;
  if (kinds) {
    options.kinds = parse_kind_map_json(read_file(*kinds));
  } else if (const fs::path side = sidecar_path(path, ".kinds.json");
             fs::exists(side)) {
    options.kinds = parse_kind_map_json(read_file(side));
  }
  const std::string text = read_file(path);
  if (text.empty()) throw ParseError("'" + path.string() + "' is empty");
  try {
    return apply_missing_policy(parse_delimited(text, options));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

// --------------------------------------------------------------- ingest --

std::size_t MissingAudit::total_missing() const {
  return std::accumulate(missing.begin(), missing.end(), std::size_t{0});
}

MissingAudit cmd_ingest(const IngestOptions& options, std::ostream& log) {
  if (options.fixed_width.has_value() == options.delimited.has_value()) {
    throw InvalidArgument("ingest needs exactly one of a fixed-width or a delimited input");
  }
  Dataset ds;
  if (options.fixed_width) {
    if (!options.layout) throw InvalidArgument("fixed-width input needs a layout file");
    const LayoutSpec layout = parse_layout_json(read_file(*options.layout));
    const std::string bytes = read_file(*options.fixed_width);
    if (bytes.empty()) {
      throw ParseError("'" + options.fixed_width->string() + "' is empty");
    }
    try {
      ds = parse_fixed_width(bytes, layout);
    } catch (const ParseError& e) {
      throw ParseError(options.fixed_width->string() + ": " + e.what());
    }
  } else {
    ds = load_dataset_csv(*options.delimited, options.kinds);
  }
  ds = apply_missing_policy(std::move(ds));
  write_dataset(ds, options.out);

  MissingAudit audit;
  audit.features = ds.feature_names();
  audit.missing = ds.missing_counts();
  audit.rows = ds.rows();
  std::string csv = "feature,missing\n";
  for (std::size_t j = 0; j < audit.features.size(); ++j) {
    csv += audit.features[j] + "," + std::to_string(audit.missing[j]) + "\n";
  }
  write_file(sidecar_path(options.out, ".audit.csv"), csv);
  log << "ingested " << ds.rows() << " rows x " << ds.features()
      << " features (" << ds.count_label(1) << " cases, " << ds.count_label(0)
      << " controls); missing cells: " << audit.total_missing() << " of "
      << ds.rows() * ds.features() << "\n";
  return audit;
}

// ---------------------------------------------------------------- synth --

std::vector<std::size_t> choose_planted(std::size_t count,
                                        std::size_t p_nutritional,
                                        std::uint64_t seed) {
  if (count > p_nutritional) {
    throw InvalidArgument("cannot plant " + std::to_string(count) +
                          " features among " + std::to_string(p_nutritional));
  }
  std::vector<std::size_t> pool(p_nutritional);
  std::iota(pool.begin(), pool.end(), 0);
  Rng rng = make_rng(seed, {stream_tag("planted")});
  for (std::size_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, p_nutritional - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(count);
  std::ranges::sort(pool);
  return pool;
}

SyntheticSpec cmd_synth(const SynthOptions& options, std::ostream& log) {
  SyntheticSpec spec = options.spec;
  if (spec.informative.empty() && options.informative > 0) {
    for (std::size_t j : choose_planted(options.informative, spec.p_nutritional, spec.seed)) {
      spec.informative.push_back({j, options.effect});
    }
  }
  const Dataset ds = generate_synthetic(spec);
  write_dataset(ds, options.out);

  const auto names = ds.feature_names();
  json planted = json::array();
  for (const auto& p : spec.informative) {
    planted.push_back({{"index", p.feature}, {"name", names[p.feature]}, {"effect", p.effect}});
  }
  const json manifest = {{"generator", synthetic_json(spec)},
                         {"planted", std::move(planted)},
                         {"feature_names", names}};
  write_file(sidecar_path(options.out, ".manifest.json"), manifest.dump(2) + "\n");
  log << "synthesized " << ds.rows() << " rows x " << ds.features()
      << " features, " << spec.informative.size() << " planted\n";
  return spec;
}

// ------------------------------------------------------------------ run --

void RunConfig::validate() const {
  if (!input) throw InvalidArgument("run config needs an input source");
  if (input->type != InputSource::Type::kSynthetic && input->path.empty()) {
    throw InvalidArgument("run config input needs a path");
  }
  if (input->type == InputSource::Type::kFixedWidth && input->layout.empty()) {
    throw InvalidArgument("fixed-width input needs a layout");
  }
  if (!seed) throw InvalidArgument("run config needs a master seed");
  if (output_dir.empty()) throw InvalidArgument("run config needs an output directory");
  if (models.empty() || feature_sets.empty()) {
    throw InvalidArgument("run config needs at least one model and feature set");
  }
  if (k < 2) throw InvalidArgument("k must be at least 2");
  if (random_states < 1) throw InvalidArgument("random_states must be at least 1");
}

json to_json(const RunConfig& config) {
  json j;
  if (config.input) {
    const InputSource& in = *config.input;
    json input = {{"type", std::string(input_type_name(in.type))}};
    switch (in.type) {
      case InputSource::Type::kDelimited:
        input["path"] = in.path;
        input["kinds"] = in.kinds;
        break;
      case InputSource::Type::kFixedWidth:
        input["path"] = in.path;
        input["layout"] = in.layout;
        break;
      case InputSource::Type::kSynthetic:
        input["spec"] = synthetic_json(in.synthetic);
        break;
    }
    j["input"] = std::move(input);
  }
  j["pairing"] = {{"name", config.pairing.name},
                  {"case_codes", config.pairing.case_codes},
                  {"control_codes", config.pairing.control_codes}};
  j["models"] = json::array();
  for (ModelKind m : config.models) j["models"].push_back(std::string(to_string(m)));
  j["feature_sets"] = json::array();
  for (FeatureSet f : config.feature_sets) {
    j["feature_sets"].push_back(std::string(to_string(f)));
  }
  j["k"] = config.k;
  j["random_states"] = config.random_states;
  j["seed"] = config.seed ? json(*config.seed) : json(nullptr);
  j["output_dir"] = config.output_dir;
  j["hyper"] = to_json(config.hyper);
  j["shap_permutations"] = config.shap_permutations;
  j["bootstrap_minority"] = config.bootstrap_minority;
  j["top_k"] = config.top_k;
  return j;
}

RunConfig run_config_from_json(const json& j) {
  RunConfig c;
  try {
    if (j.contains("input") && !j["input"].is_null()) {
      const json& in = j["input"];
      InputSource src;
      const std::string type = in.at("type").get<std::string>();
      if (type == "delimited") {
        src.type = InputSource::Type::kDelimited;
        src.path = in.at("path").get<std::string>();
        src.kinds = in.value("kinds", std::string());
      } else if (type == "fixed_width") {
        src.type = InputSource::Type::kFixedWidth;
        src.path = in.at("path").get<std::string>();
        src.layout = in.at("layout").get<std::string>();
      } else if (type == "synthetic") {
        src.type = InputSource::Type::kSynthetic;
        src.synthetic = synthetic_from(in.at("spec"));
      } else {
        throw ParseError("unknown input type '" + type + "'");
      }
      c.input = std::move(src);
    }
    if (j.contains("pairing")) {
      const json& p = j["pairing"];
      c.pairing.name = p.value("name", c.pairing.name);
      c.pairing.case_codes = p.value("case_codes", std::vector<std::string>{});
      c.pairing.control_codes = p.value("control_codes", std::vector<std::string>{});
    }
    if (j.contains("models")) {
      c.models.clear();
      for (const json& m : j["models"]) c.models.push_back(parse_model_kind(m.get<std::string>()));
    }
    if (j.contains("feature_sets")) {
      c.feature_sets.clear();
      for (const json& f : j["feature_sets"]) {
        c.feature_sets.push_back(parse_feature_set(f.get<std::string>()));
      }
    }
    c.k = j.value("k", c.k);
    c.random_states = j.value("random_states", c.random_states);
    if (j.contains("seed") && !j["seed"].is_null()) c.seed = j["seed"].get<std::uint64_t>();
    c.output_dir = j.value("output_dir", c.output_dir);
    if (j.contains("hyper")) c.hyper = hyper_from_json(j["hyper"]);
    c.shap_permutations = j.value("shap_permutations", c.shap_permutations);
    c.bootstrap_minority = j.value("bootstrap_minority", c.bootstrap_minority);
    c.top_k = j.value("top_k", c.top_k);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid run config: ") + e.what());
  }
  return c;
}

void apply_environment(RunConfig& config) {
  if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) {
    config.output_dir = dir;
  }
}

RunOutputs execute_run(const RunConfig& config, std::ostream& log) {
  config.validate();
  const Dataset dataset = load_input(config);
  log << "dataset: " << dataset.rows() << " rows (" << dataset.count_label(1)
      << " cases, " << dataset.count_label(0) << " controls), "
      << dataset.features() << " features\n";

  const json manifest = to_json(config);
  std::string metrics = std::string(kMetricsHeader);
  std::string importance = std::string(kImportanceHeader);
  std::vector<SummaryRow> rows;
  std::vector<ImportanceTable> tables;

  for (ModelKind model : config.models) {
    for (FeatureSet set : config.feature_sets) {
      ExperimentConfig ec;
      ec.pairing = config.pairing.name;
      ec.model = model;
      ec.feature_set = set;
      ec.k = config.k;
      ec.n_random_states = config.random_states;
      ec.seed = *config.seed;
      ec.hyper = config.hyper;
      ec.shap_permutations = config.shap_permutations;
      ec.bootstrap_minority = config.bootstrap_minority;

      const LocalAccuracyStats before = local_accuracy_stats();
      const ExperimentResult result = run_experiment(dataset, ec);
      const LocalAccuracyStats after = local_accuracy_stats();
      if (after.violations != before.violations) {
        throw Error("local accuracy gate failed for " + std::string(to_string(model)) +
                    "/" + std::string(to_string(set)));
      }

      std::vector<std::vector<double>> vectors;
      for (const auto& cell : result.cells) vectors.push_back(cell.importance);
      const RankedImportanceReport report =
          aggregate_importance(vectors, result.feature_names);
      if (std::abs(report.total_percent() - 100.0) > 1e-6) {
        throw Error("weight conservation gate failed: weights sum to " +
                    number(report.total_percent()));
      }

      const std::string prefix = std::string(to_string(model)) + "," +
                                 std::string(to_string(set)) + ",";
      for (const auto& cell : result.cells) {
        metrics += prefix + "cell," + std::to_string(cell.subgroup) + "," +
                   std::to_string(cell.fold) + "," + std::to_string(cell.state) +
                   "," + number(cell.metrics.accuracy * 100.0) + "," +
                   number(cell.metrics.precision * 100.0) + "," +
                   number(cell.metrics.recall * 100.0) + "," +
                   (cell.metrics.precision_degenerate ? "1," : "0,") +
                   (cell.metrics.recall_degenerate ? "1," : "0,") + "\n";
      }
      const MetricSummary& s = result.summary;
      const std::string count = std::to_string(s.count);
      metrics += prefix + "mean,,,," + number(s.accuracy.mean) + "," +
                 number(s.precision.mean) + "," + number(s.recall.mean) + ",,," +
                 count + "\n";
      metrics += prefix + "std,,,," + number(s.accuracy.std) + "," +
                 number(s.precision.std) + "," + number(s.recall.std) + ",,," +
                 count + "\n";
      for (std::size_t i = 0; i < report.entries.size(); ++i) {
        importance += prefix + std::to_string(i + 1) + "," +
                      report.entries[i].name + "," +
                      number(report.entries[i].weight_percent) + "\n";
      }
      rows.push_back({model, set, s});
      tables.push_back({model, set, report});
      log << display_name(model) << " / " << to_string(set) << ": "
          << result.n_subgroups << " subgroup(s) (" << result.discarded
          << " controls discarded), " << s.count << " evaluations, accuracy "
          << format_mean_std(s.accuracy) << "\n";
    }
  }

  return {std::move(metrics), std::move(importance),
          render_report(manifest, rows, tables), manifest.dump(2) + "\n"};
}

void cmd_run(const RunConfig& config, std::ostream& log) {
  const RunOutputs outputs = execute_run(config, log);
  const fs::path dir = config.output_dir;
  const std::pair<const char*, const std::string*> files[] = {
      {"metrics.csv", &outputs.metrics_csv},
      {"importance.csv", &outputs.importance_csv},
      {"report.md", &outputs.report_md},
      {"manifest.json", &outputs.manifest_json}};
  std::vector<fs::path> written;
  try {
    for (const auto& [name, contents] : files) {
      write_file(dir / name, *contents);
      written.push_back(dir / name);
    }
  } catch (...) {
    for (const auto& path : written) {
      std::error_code ec;
      fs::remove(path, ec);
    }
    throw;
  }
  log << "wrote " << dir.string() << "/{metrics.csv,importance.csv,report.md,manifest.json}\n";
}

// ---------------------------------------------------------------- train --

void cmd_train(const TrainOptions& options, std::ostream& log) {
  const Dataset ds =
      select_feature_set(load_dataset_csv(options.data, options.kinds), options.feature_set);
  std::vector<int> labels(ds.labels().begin(), ds.labels().end());
  SavedModel saved{train_model(options.model, ds.values(), labels, options.hyper,
                               derive_seed(options.seed, {stream_tag("train")})),
                   ds.feature_names()};
  write_file(options.out, model_to_json(saved).dump() + "\n");
  log << "trained " << display_name(options.model) << " on " << ds.rows() << " rows x "
      << ds.features() << " features -> " << options.out.string() << "\n";
}

// -------------------------------------------------------------- explain --

ExplainSummary cmd_explain(const ExplainOptions& options, std::ostream& dump,
                           std::ostream& log) {
  const SavedModel saved = model_from_json(json::parse(read_file(options.model)));
  const Dataset ds = load_dataset_csv(options.data, options.kinds);
  const std::size_t p = feature_count(saved.model);

  // Align dataset columns with the model's features.
  std::vector<std::size_t> columns;
  std::vector<std::string> names = saved.feature_names;
  if (names.empty()) {
    if (ds.features() != p) {
      throw InvalidArgument("model expects " + std::to_string(p) +
                            " features, dataset has " + std::to_string(ds.features()));
    }
    columns.resize(p);
    std::iota(columns.begin(), columns.end(), 0);
    names = ds.feature_names();
  } else {
    for (const auto& name : names) {
      const auto j = ds.find_feature(name);
      if (!j) throw InvalidArgument("dataset lacks model feature '" + name + "'");
      columns.push_back(*j);
    }
  }
  const Matrix x = select_columns(ds.values(), columns);
  if (options.rows.empty()) throw InvalidArgument("explain needs at least one row");
  for (std::size_t r : options.rows) {
    if (r >= x.rows()) {
      throw InvalidArgument("row " + std::to_string(r) + " out of range (dataset has " +
                            std::to_string(x.rows()) + " rows)");
    }
  }
  const auto* forest = std::get_if<ForestModel>(&saved.model);
  if (options.oracle && !forest) {
    throw InvalidArgument("--oracle applies to forest models only");
  }
  if (options.oracle && p > kOracleMaxFeatures) {
    throw InvalidArgument("--oracle needs p <= " + std::to_string(kOracleMaxFeatures) +
                          ", model has " + std::to_string(p));
  }

  ExplainSummary summary;
  dump << "row,feature,contribution,base_value,model_output\n";
  for (std::size_t r : options.rows) {
    const SamplingOptions sampling{options.permutations,
                                   derive_seed(options.seed, {stream_tag("explain"), r}),
                                   Execution::kParallel};
    const ShapExplanation e = explain_row(saved.model, x.row(r), x, sampling);
    const double err = e.local_accuracy_error();
    summary.max_local_accuracy_error = std::max(summary.max_local_accuracy_error, err);
    if (!(err < kLocalAccuracyTolerance)) summary.gates_passed = false;
    for (std::size_t j = 0; j < p; ++j) {
      dump << r << "," << names[j] << "," << number(e.contributions[j]) << ","
           << number(e.base_value) << "," << number(e.model_output) << "\n";
    }
    if (options.oracle) {
      const ShapExplanation o = exact_shap_oracle(*forest, x.row(r));
      double dev = 0.0;
      for (std::size_t j = 0; j < p; ++j) {
        dev = std::max(dev, std::abs(o.contributions[j] - e.contributions[j]));
      }
      summary.max_oracle_deviation = std::max(summary.max_oracle_deviation.value_or(0.0), dev);
    }
    ++summary.explained;
  }
  log << "explained " << summary.explained << " row(s); max local accuracy error "
      << summary.max_local_accuracy_error << "\n";
  if (summary.max_oracle_deviation) {
    log << "max |tree_shap - exact oracle| = " << *summary.max_oracle_deviation << "\n";
  }
  return summary;
}

// --------------------------------------------------------------- report --

std::string render_saved_report(const fs::path& run_dir) {
  const json manifest = json::parse(read_file(run_dir / "manifest.json"));
  std::vector<SummaryRow> rows;
  std::map<std::pair<std::string, std::string>, std::size_t> row_index;
  const auto metrics = read_csv_rows(run_dir / "metrics.csv");
  for (std::size_t i = 1; i < metrics.size(); ++i) {
    const auto& f = metrics[i];
    if (f.size() != 12) throw ParseError("metrics.csv line " + std::to_string(i + 1) + ": expected 12 fields");
    const std::string& kind = f[2];
    if (kind != "mean" && kind != "std") continue;
    const auto key = std::make_pair(f[0], f[1]);
    auto [it, inserted] = row_index.emplace(key, rows.size());
    if (inserted) {
      rows.push_back({parse_model_kind(f[0]), parse_feature_set(f[1]), {}});
    }
    MetricSummary& s = rows[it->second].summary;
    s.count = static_cast<std::size_t>(parse_double(f[11], "metrics.csv"));
    const double acc = parse_double(f[6], "metrics.csv");
    const double prec = parse_double(f[7], "metrics.csv");
    const double rec = parse_double(f[8], "metrics.csv");
    if (kind == "mean") {
      s.accuracy.mean = acc;
      s.precision.mean = prec;
      s.recall.mean = rec;
    } else {
      s.accuracy.std = acc;
      s.precision.std = prec;
      s.recall.std = rec;
    }
  }
  std::vector<ImportanceTable> tables;
  std::map<std::pair<std::string, std::string>, std::size_t> table_index;
  const auto importance = read_csv_rows(run_dir / "importance.csv");
  for (std::size_t i = 1; i < importance.size(); ++i) {
    const auto& f = importance[i];
    if (f.size() != 5) throw ParseError("importance.csv line " + std::to_string(i + 1) + ": expected 5 fields");
    const auto key = std::make_pair(f[0], f[1]);
    auto [it, inserted] = table_index.emplace(key, tables.size());
    if (inserted) {
      tables.push_back({parse_model_kind(f[0]), parse_feature_set(f[1]), {}});
    }
    tables[it->second].report.entries.push_back({f[3], parse_double(f[4], "importance.csv")});
  }
  return render_report(manifest, rows, tables);
}

}  // namespace cohortxai::cli
