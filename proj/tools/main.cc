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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cohortxai/cli.h"
#include "cohortxai/error.h"
#include "cohortxai/parallel.h"

namespace {

using namespace cohortxai;
using namespace cohortxai::cli;
namespace fs = std::filesystem;

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct RunFlags {
  std::string config;
  std::string data;
  std::string kinds;
  std::string fixed_width;
  std::string layout;
  std::string pairing;
  std::string case_codes;
  std::string control_codes;
  std::string models;
  std::string feature_sets;
  std::optional<std::size_t> k;
  std::optional<std::size_t> random_states;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<std::size_t> trees;
  std::optional<std::size_t> permutations;
  std::optional<std::size_t> top_k;
  bool bootstrap_minority = false;
  bool print_config = false;
};

RunConfig resolve_run_config(const RunFlags& f) {
  RunConfig c;
  if (!f.config.empty()) {
    try {
      c = run_config_from_json(nlohmann::json::parse(read_file(f.config)));
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(f.config + ": " + e.what());
    }
  }
  apply_environment(c);

  if (!f.data.empty() && !f.fixed_width.empty()) {
    throw InvalidArgument("--data and --fixed-width are mutually exclusive");
  }
  if (!f.data.empty()) {
    InputSource in;
    in.type = InputSource::Type::kDelimited;
    in.path = f.data;
    in.kinds = f.kinds;
    c.input = in;
  } else if (!f.fixed_width.empty()) {
    InputSource in;
    in.type = InputSource::Type::kFixedWidth;
    in.path = f.fixed_width;
    in.layout = f.layout;
    c.input = in;
  }
  if (!f.pairing.empty()) c.pairing.name = f.pairing;
  if (!f.case_codes.empty()) c.pairing.case_codes = split_list(f.case_codes);
  if (!f.control_codes.empty()) c.pairing.control_codes = split_list(f.control_codes);
  if (!f.models.empty()) {
    c.models.clear();
    for (const auto& m : split_list(f.models)) c.models.push_back(parse_model_kind(m));
  }
  if (!f.feature_sets.empty()) {
    c.feature_sets.clear();
    for (const auto& s : split_list(f.feature_sets)) {
      c.feature_sets.push_back(parse_feature_set(s));
    }
  }
  if (f.k) c.k = *f.k;
  if (f.random_states) c.random_states = *f.random_states;
  if (f.seed) c.seed = *f.seed;
  if (!f.out.empty()) c.output_dir = f.out;
  if (f.trees) c.hyper.forest.n_trees = *f.trees;
  if (f.permutations) c.shap_permutations = *f.permutations;
  if (f.top_k) c.top_k = *f.top_k;
  if (f.bootstrap_minority) c.bootstrap_minority = true;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cohortxai: explainable classification for imbalanced cohorts"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (default: machine parallelism)")
      ->check(CLI::NonNegativeNumber);

  // ingest
  auto* ingest = app.add_subcommand("ingest", "parse a fixed-width or delimited file");
  IngestOptions ingest_opts;
  std::string ingest_fixed, ingest_layout, ingest_csv, ingest_kinds, ingest_out;
  auto* fixed_opt = ingest->add_option("--fixed-width", ingest_fixed, "fixed-width record file");
  ingest->add_option("--layout", ingest_layout, "JSON layout for --fixed-width")->needs(fixed_opt);
  auto* csv_opt = ingest->add_option("--delimited", ingest_csv, "delimited file with header");
  ingest->add_option("--kinds", ingest_kinds, "JSON feature-kind map for --delimited")->needs(csv_opt);
  fixed_opt->excludes(csv_opt);
  ingest->add_option("--out", ingest_out, "output dataset CSV")->required();

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic cohort");
  SynthOptions synth_opts;
  std::string synth_out;
  synth->add_option("--cases", synth_opts.spec.n_cases, "case rows")->capture_default_str();
  synth->add_option("--controls", synth_opts.spec.n_controls, "control rows")->capture_default_str();
  synth->add_option("--nutritional", synth_opts.spec.p_nutritional, "nutritional features")
      ->capture_default_str();
  synth->add_option("--phichar", synth_opts.spec.p_phichar, "physical-characteristic features")
      ->capture_default_str();
  synth->add_option("--informative", synth_opts.informative, "planted nutritional features")
      ->capture_default_str();
  synth->add_option("--effect", synth_opts.effect, "planted shift in sd units")->capture_default_str();
  synth->add_option("--missing-prob", synth_opts.spec.missing_probability,
                    "per-cell missing probability")
      ->check(CLI::Range(0.0, 1.0));
  synth->add_option("--seed", synth_opts.spec.seed, "generator seed")->required();
  synth->add_option("--out", synth_out, "output dataset CSV")->required();

  // run
  auto* run = app.add_subcommand("run", "run the resampling/explanation pipeline");
  RunFlags rf;
  run->add_option("--config", rf.config, "JSON run config (flags override it)");
  run->add_option("--data", rf.data, "delimited dataset");
  run->add_option("--kinds", rf.kinds, "feature-kind map for --data");
  run->add_option("--fixed-width", rf.fixed_width, "fixed-width dataset");
  run->add_option("--layout", rf.layout, "layout for --fixed-width");
  run->add_option("--pairing", rf.pairing, "pairing name shown in the report");
  run->add_option("--case-codes", rf.case_codes, "label codes for cases (fixed-width)");
  run->add_option("--control-codes", rf.control_codes, "label codes for controls (fixed-width)");
  run->add_option("--models", rf.models, "comma list of forest,svm,mlp");
  run->add_option("--feature-sets", rf.feature_sets, "comma list of nutritional,phichar,both");
  run->add_option("--k", rf.k, "cross-validation folds");
  run->add_option("--random-states", rf.random_states, "repetitions per subgroup");
  run->add_option("--seed", rf.seed, "master seed");
  run->add_option("--out", rf.out, "output directory");
  run->add_option("--trees", rf.trees, "trees per forest");
  run->add_option("--permutations", rf.permutations, "sampling SHAP permutations per row");
  run->add_option("--top-k", rf.top_k, "features shown per ranking table");
  run->add_flag("--bootstrap-minority", rf.bootstrap_minority,
                "resample the minority class per subgroup");
  run->add_flag("--print-config", rf.print_config, "print the resolved config and exit");

  // train
  auto* train = app.add_subcommand("train", "fit one model on a whole dataset");
  TrainOptions train_opts;
  std::string train_data, train_kinds, train_model_name = "forest", train_set = "nutritional",
                                       train_out;
  train->add_option("--data", train_data, "delimited dataset")->required();
  train->add_option("--kinds", train_kinds, "feature-kind map");
  train->add_option("--model", train_model_name, "forest, svm or mlp")->capture_default_str();
  train->add_option("--feature-set", train_set, "nutritional, phichar or both")
      ->capture_default_str();
  train->add_option("--trees", train_opts.hyper.forest.n_trees, "trees per forest")
      ->capture_default_str();
  train->add_option("--seed", train_opts.seed, "seed")->required();
  train->add_option("--out", train_out, "model JSON")->required();

  // explain
  auto* explain = app.add_subcommand("explain", "SHAP attributions for individual rows");
  ExplainOptions explain_opts;
  std::string explain_model, explain_data, explain_kinds, explain_out;
  explain->add_option("--model", explain_model, "model JSON from `train`")->required();
  explain->add_option("--data", explain_data, "delimited dataset")->required();
  explain->add_option("--kinds", explain_kinds, "feature-kind map");
  explain->add_option("--rows", explain_opts.rows, "0-based row indices")->required()->delimiter(',');
  explain->add_flag("--oracle", explain_opts.oracle, "compare against exact enumeration (forest)");
  explain->add_option("--permutations", explain_opts.permutations,
                      "permutations for non-tree models")
      ->capture_default_str();
  explain->add_option("--seed", explain_opts.seed, "sampling seed")->capture_default_str();
  explain->add_option("--out", explain_out, "explanation CSV (default stdout)");

  // report
  auto* report = app.add_subcommand("report", "re-render report.md from a run directory");
  std::string report_dir, report_out;
  report->add_option("dir", report_dir, "run output directory")->required();
  report->add_option("--out", report_out, "write here instead of stdout");

  CLI11_PARSE(app, argc, argv);
  set_workers(threads);

  try {
    if (*ingest) {
      if (!ingest_fixed.empty()) {
        if (ingest_layout.empty()) throw InvalidArgument("--fixed-width needs --layout");
        ingest_opts.fixed_width = ingest_fixed;
        ingest_opts.layout = ingest_layout;
      } else if (!ingest_csv.empty()) {
        ingest_opts.delimited = ingest_csv;
        if (!ingest_kinds.empty()) ingest_opts.kinds = ingest_kinds;
      }
      ingest_opts.out = ingest_out;
      cmd_ingest(ingest_opts, std::cerr);
    } else if (*synth) {
      synth_opts.out = synth_out;
      cmd_synth(synth_opts, std::cerr);
    } else if (*run) {
      const RunConfig config = resolve_run_config(rf);
      if (rf.print_config) {
        std::cout << to_json(config).dump(2) << "\n";
        return 0;
      }
      cmd_run(config, std::cerr);
    } else if (*train) {
      train_opts.data = train_data;
      if (!train_kinds.empty()) train_opts.kinds = train_kinds;
      train_opts.model = parse_model_kind(train_model_name);
      train_opts.feature_set = parse_feature_set(train_set);
      train_opts.out = train_out;
      cmd_train(train_opts, std::cerr);
    } else if (*explain) {
      explain_opts.model = explain_model;
      explain_opts.data = explain_data;
      if (!explain_kinds.empty()) explain_opts.kinds = explain_kinds;
      ExplainSummary summary;
      if (explain_out.empty()) {
        summary = cmd_explain(explain_opts, std::cout, std::cerr);
      } else {
        std::ostringstream dump;
        summary = cmd_explain(explain_opts, dump, std::cerr);
        write_file(explain_out, dump.str());
      }
      if (!summary.gates_passed) {
        std::cerr << "error: local accuracy gate failed\n";
        return 1;
      }
    } else if (*report) {
      const std::string md = render_saved_report(report_dir);
      if (report_out.empty()) {
        std::cout << md;
      } else {
        write_file(report_out, md);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
