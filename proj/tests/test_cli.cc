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

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include "cohortxai/cli.h"
#include "cohortxai/error.h"
#include "cohortxai/explain.h"
#include "cohortxai/parallel.h"

namespace cohortxai::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           ("cohortxai_" + std::string(info->name()) + "_" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path synth(const std::string& name, std::size_t cases, std::size_t controls,
                 std::size_t p_nut, std::size_t p_phi, std::size_t informative = 0) {
    SynthOptions o;
    o.spec.n_cases = cases;
    o.spec.n_controls = controls;
    o.spec.p_nutritional = p_nut;
    o.spec.p_phichar = p_phi;
    o.spec.seed = 7;
    o.informative = informative;
    o.out = dir_ / name;
    cmd_synth(o, log_);
    return o.out;
  }

  RunConfig small_run(const fs::path& data, const std::string& out) {
    RunConfig c;
    InputSource in;
    in.path = data.string();
    c.input = in;
    c.seed = 3;
    c.k = 3;
    c.output_dir = (dir_ / out).string();
    c.hyper.forest.n_trees = 5;
    c.hyper.mlp.epochs = 5;
    c.shap_permutations = 4;
    return c;
  }

  fs::path dir_;
  std::ostringstream log_;
};

const fs::path kSourceDir = COHORTXAI_SOURCE_DIR;

TEST_F(CliTest, IngestExampleLayout) {
  IngestOptions o;
  o.fixed_width = kSourceDir / "data" / "example_records.dat";
  o.layout = kSourceDir / "data" / "example_layout.json";
  o.out = dir_ / "cohort.csv";
  const MissingAudit audit = cmd_ingest(o, log_);
  EXPECT_EQ(audit.features.size(), 105u);
  const std::string csv = read_file(o.out);
  const std::string header = csv.substr(0, csv.find('\n'));
  EXPECT_EQ(std::count(header.begin(), header.end(), ','), 105);
  EXPECT_TRUE(header.ends_with(",label"));
  EXPECT_TRUE(fs::exists(dir_ / "cohort.audit.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "cohort.kinds.json"));
  // Kinds travel with the file.
  const Dataset back = load_dataset_csv(o.out, std::nullopt);
  EXPECT_EQ(select_feature_set(back, FeatureSet::kPhiChar).features(), 12u);
}

TEST_F(CliTest, IngestEmptyFileNamesIt) {
  write_file(dir_ / "empty.dat", "");
  IngestOptions o;
  o.fixed_width = dir_ / "empty.dat";
  o.layout = kSourceDir / "data" / "example_layout.json";
  o.out = dir_ / "x.csv";
  try {
    cmd_ingest(o, log_);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("empty.dat"), std::string::npos) << e.what();
  }
}

TEST_F(CliTest, IngestAuditFullyObserved) {
  write_file(dir_ / "in.csv", "a,b,label\n1,2,1\n3,4,0\n");
  IngestOptions o;
  o.delimited = dir_ / "in.csv";
  o.out = dir_ / "out.csv";
  const MissingAudit audit = cmd_ingest(o, log_);
  EXPECT_EQ(audit.total_missing(), 0u);
  EXPECT_EQ(read_file(dir_ / "out.audit.csv"), "feature,missing\na,0\nb,0\n");
}

TEST_F(CliTest, SynthIsByteIdentical) {
  synth("a.csv", 208, 8394, 3, 2);
  synth("b.csv", 208, 8394, 3, 2);
  EXPECT_EQ(read_file(dir_ / "a.csv"), read_file(dir_ / "b.csv"));
  EXPECT_EQ(read_file(dir_ / "a.manifest.json"), read_file(dir_ / "b.manifest.json"));
}

TEST_F(CliTest, SynthManifestRecordsPlanted) {
  synth("d.csv", 10, 10, 20, 2, 3);
  const auto m = nlohmann::json::parse(read_file(dir_ / "d.manifest.json"));
  ASSERT_EQ(m["planted"].size(), 3u);
  const auto chosen = choose_planted(3, 20, 7);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(m["planted"][i]["index"].get<std::size_t>(), chosen[i]);
    EXPECT_EQ(m["planted"][i]["effect"].get<double>(), 1.0);
  }
}

TEST_F(CliTest, SynthMissingRate) {
  SynthOptions o;
  o.spec.n_cases = 500;
  o.spec.n_controls = 500;
  o.spec.p_nutritional = 90;
  o.spec.p_phichar = 10;
  o.spec.missing_probability = 0.1;
  o.spec.seed = 1;
  o.out = dir_ / "m.csv";
  cmd_synth(o, log_);
  IngestOptions i;
  i.delimited = o.out;
  i.out = dir_ / "m2.csv";
  const MissingAudit audit = cmd_ingest(i, log_);
  EXPECT_NEAR(static_cast<double>(audit.total_missing()) / 1e5, 0.1, 0.01);
}

TEST_F(CliTest, RunGridHasOneRowPerCombination) {
  const fs::path data = synth("d.csv", 20, 40, 4, 3, 1);
  RunConfig c = small_run(data, "grid");
  c.models = {ModelKind::kForest, ModelKind::kSvm, ModelKind::kMlp};
  c.feature_sets = {FeatureSet::kNutritional, FeatureSet::kPhiChar, FeatureSet::kBoth};
  cmd_run(c, log_);
  const std::string report = read_file(dir_ / "grid" / "report.md");
  std::size_t rows = 0;
  for (const char* m : {"| Random Forest |", "| SVM |", "| Neural Network |"}) {
    for (std::size_t pos = report.find(m); pos != std::string::npos; pos = report.find(m, pos + 1)) {
      ++rows;
    }
  }
  EXPECT_EQ(rows, 9u);
  const std::string imp = read_file(dir_ / "grid" / "importance.csv");
  EXPECT_EQ(std::count(imp.begin(), imp.end(), '\n'), 1 + 3 * (4 + 3 + 7));
}

TEST_F(CliTest, RunSingleCombination) {
  const fs::path data = synth("d.csv", 20, 20, 4, 3, 1);
  cmd_run(small_run(data, "one"), log_);
  const std::string report = read_file(dir_ / "one" / "report.md");
  EXPECT_NE(report.find("| Random Forest | Nutritional |"), std::string::npos);
  EXPECT_EQ(report.find("| SVM |"), std::string::npos);
  const std::string metrics = read_file(dir_ / "one" / "metrics.csv");
  EXPECT_EQ(std::count(metrics.begin(), metrics.end(), '\n'), 1 + 3 + 2);
}

TEST_F(CliTest, RerunFromManifestIsByteIdenticalAtAnyWorkerCount) {
  const fs::path data = synth("d.csv", 20, 70, 5, 2, 2);
  RunConfig c = small_run(data, "first");
  c.models = {ModelKind::kForest, ModelKind::kSvm};
  set_workers(1);
  cmd_run(c, log_);
  RunConfig again = run_config_from_json(
      nlohmann::json::parse(read_file(dir_ / "first" / "manifest.json")));
  again.output_dir = (dir_ / "second").string();
  set_workers(4);
  cmd_run(again, log_);
  set_workers(0);
  for (const char* f : {"metrics.csv", "importance.csv", "report.md"}) {
    EXPECT_EQ(read_file(dir_ / "first" / f), read_file(dir_ / "second" / f)) << f;
  }
}

TEST_F(CliTest, ReportReRendersSavedRun) {
  const fs::path data = synth("d.csv", 20, 40, 4, 3, 1);
  RunConfig c = small_run(data, "r");
  c.models = {ModelKind::kForest, ModelKind::kMlp};
  c.feature_sets = {FeatureSet::kNutritional, FeatureSet::kBoth};
  cmd_run(c, log_);
  EXPECT_EQ(render_saved_report(dir_ / "r"), read_file(dir_ / "r" / "report.md"));
}

TEST_F(CliTest, CellFailureAbortsWithCoordinates) {
  const fs::path data = synth("d.csv", 20, 20, 4, 3, 1);
  RunConfig c = small_run(data, "bad");
  c.models = {ModelKind::kMlp};
  c.hyper.mlp.learning_rate = 1e6;
  c.hyper.mlp.epochs = 50;
  try {
    cmd_run(c, log_);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("subgroup 0, fold 0, state 0"), std::string::npos);
  }
  EXPECT_FALSE(fs::exists(dir_ / "bad" / "metrics.csv"));
}

TEST_F(CliTest, PartialOutputsRemovedWhenAWriteFails) {
  const fs::path data = synth("d.csv", 20, 20, 4, 3, 1);
  RunConfig c = small_run(data, "partial");
  fs::create_directories(dir_ / "partial" / "report.md");  // blocks the third file
  EXPECT_THROW(cmd_run(c, log_), Error);
  EXPECT_FALSE(fs::exists(dir_ / "partial" / "metrics.csv"));
  EXPECT_FALSE(fs::exists(dir_ / "partial" / "importance.csv"));
  EXPECT_FALSE(fs::exists(dir_ / "partial" / "manifest.json"));
}

TEST_F(CliTest, ConfigValidation) {
  RunConfig c;
  EXPECT_THROW(c.validate(), InvalidArgument);  // no input
  c = small_run(dir_ / "d.csv", "x");
  c.seed.reset();
  EXPECT_THROW(c.validate(), InvalidArgument);  // no wall-clock fallback
  c = small_run(dir_ / "d.csv", "x");
  c.output_dir.clear();
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = small_run(dir_ / "d.csv", "x");
  c.k = 1;
  EXPECT_THROW(c.validate(), InvalidArgument);
}

TEST_F(CliTest, ConfigJsonRoundTrip) {
  RunConfig c = small_run(dir_ / "d.csv", "x");
  c.models = {ModelKind::kSvm, ModelKind::kForest};
  c.feature_sets = {FeatureSet::kBoth};
  c.pairing.name = "AD vs. HD";
  c.hyper.svm.gamma = 0.5;
  const RunConfig back = run_config_from_json(to_json(c));
  EXPECT_EQ(to_json(back), to_json(c));
  InputSource synthetic;
  synthetic.type = InputSource::Type::kSynthetic;
  synthetic.synthetic.informative = {{2, 0.5}};
  c.input = synthetic;
  EXPECT_EQ(to_json(run_config_from_json(to_json(c))), to_json(c));
  EXPECT_THROW(run_config_from_json(nlohmann::json::parse(R"({"models":["tree"]})")), Error);
}

TEST_F(CliTest, EnvironmentOverridesOutputDirOnly) {
  RunConfig c = small_run(dir_ / "d.csv", "x");
  const auto before = to_json(c);
  ::setenv(kOutputDirEnv, "/tmp/elsewhere", 1);
  apply_environment(c);
  ::unsetenv(kOutputDirEnv);
  EXPECT_EQ(c.output_dir, "/tmp/elsewhere");
  auto after = to_json(c);
  after["output_dir"] = before["output_dir"];
  EXPECT_EQ(after, before);
}

TEST_F(CliTest, SyntheticInputRunsWithoutFiles) {
  RunConfig c = small_run("", "syn");
  InputSource in;
  in.type = InputSource::Type::kSynthetic;
  in.synthetic.n_cases = 15;
  in.synthetic.n_controls = 30;
  in.synthetic.p_nutritional = 4;
  in.synthetic.p_phichar = 1;
  c.input = in;
  cmd_run(c, log_);
  EXPECT_TRUE(fs::exists(dir_ / "syn" / "report.md"));
}

TEST_F(CliTest, FixedWidthInputWithPairingCodes) {
  RunConfig c = small_run("", "fw");
  InputSource in;
  in.type = InputSource::Type::kFixedWidth;
  in.path = (kSourceDir / "data" / "example_records.dat").string();
  in.layout = (kSourceDir / "data" / "example_layout.json").string();
  c.input = in;
  c.k = 2;
  c.pairing = {"AD vs. CA", {"1"}, {"3"}};
  cmd_run(c, log_);
  EXPECT_NE(read_file(dir_ / "fw" / "report.md").find("AD vs. CA"), std::string::npos);
}

class ExplainTest : public CliTest {
 protected:
  fs::path train(const fs::path& data, ModelKind kind) {
    TrainOptions t;
    t.data = data;
    t.model = kind;
    t.seed = 4;
    t.hyper.forest.n_trees = 10;
    t.hyper.mlp.epochs = 5;
    t.out = dir_ / (std::string(to_string(kind)) + ".json");
    cmd_train(t, log_);
    return t.out;
  }
};

TEST_F(ExplainTest, SingleForestRow) {
  const fs::path data = synth("d.csv", 30, 30, 6, 2, 2);
  ExplainOptions o;
  o.model = train(data, ModelKind::kForest);
  o.data = data;
  o.rows = {4};
  std::ostringstream dump;
  const ExplainSummary s = cmd_explain(o, dump, log_);
  EXPECT_TRUE(s.gates_passed);
  EXPECT_EQ(s.explained, 1u);
  EXPECT_LT(s.max_local_accuracy_error, kLocalAccuracyTolerance);
  const std::string out = dump.str();
  EXPECT_EQ(std::count(out.begin(), out.end(), '\n'), 1 + 6);  // p contributions
  EXPECT_NE(out.find("base_value"), std::string::npos);
}

TEST_F(ExplainTest, RowOutOfRange) {
  const fs::path data = synth("d.csv", 10, 10, 3, 1);
  ExplainOptions o;
  o.model = train(data, ModelKind::kForest);
  o.data = data;
  o.rows = {20};
  std::ostringstream dump;
  EXPECT_THROW(cmd_explain(o, dump, log_), InvalidArgument);
}

TEST_F(ExplainTest, OracleDeviationReported) {
  const fs::path data = synth("d.csv", 30, 30, 12, 2, 2);
  ExplainOptions o;
  o.model = train(data, ModelKind::kForest);
  o.data = data;
  o.rows = {0, 1, 2};
  o.oracle = true;
  std::ostringstream dump;
  const ExplainSummary s = cmd_explain(o, dump, log_);
  ASSERT_TRUE(s.max_oracle_deviation.has_value());
  EXPECT_LT(*s.max_oracle_deviation, 1e-10);
}

TEST_F(ExplainTest, SamplingExplainerForOtherModels) {
  const fs::path data = synth("d.csv", 20, 20, 4, 1, 1);
  for (ModelKind kind : {ModelKind::kSvm, ModelKind::kMlp}) {
    ExplainOptions o;
    o.model = train(data, kind);
    o.data = data;
    o.rows = {0, 7};
    o.permutations = 16;
    std::ostringstream dump;
    EXPECT_TRUE(cmd_explain(o, dump, log_).gates_passed);
    o.oracle = true;
    EXPECT_THROW(cmd_explain(o, dump, log_), InvalidArgument);
  }
}

// --- the executable itself ---------------------------------------------

int run_tool(const std::string& args, const fs::path& out_file) {
  const std::string cmd = std::string(COHORTXAI_TOOL) + " " + args + " > " +
                          out_file.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST_F(CliTest, ToolExitCodes) {
  const fs::path log = dir_ / "log.txt";
  EXPECT_EQ(run_tool("synth --cases 20 --controls 20 --nutritional 4 --phichar 1 --seed 1 --out " +
                         (dir_ / "d.csv").string(),
                     log),
            0);
  EXPECT_EQ(run_tool("run --data " + (dir_ / "d.csv").string() + " --k 2 --trees 3 --out " +
                         (dir_ / "r").string(),
                     log),
            1) << read_file(log);  // no seed
  EXPECT_NE(read_file(log).find("seed"), std::string::npos);
  EXPECT_EQ(run_tool("run --data " + (dir_ / "d.csv").string() +
                         " --seed 2 --k 2 --trees 3 --permutations 2 --out " + (dir_ / "r").string(),
                     log),
            0) << read_file(log);
  EXPECT_EQ(run_tool("report " + (dir_ / "r").string() + " --out " + (dir_ / "again.md").string(),
                     log),
            0);
  EXPECT_EQ(read_file(dir_ / "again.md"), read_file(dir_ / "r" / "report.md"));
  write_file(dir_ / "empty.csv", "");
  EXPECT_EQ(run_tool("ingest --delimited " + (dir_ / "empty.csv").string() + " --out " +
                         (dir_ / "e.csv").string(),
                     log),
            1);
  EXPECT_NE(read_file(log).find("empty.csv"), std::string::npos);
  EXPECT_NE(run_tool("bogus", log), 0);
}

TEST_F(CliTest, ToolFlagsOverrideConfigAndEnv) {
  RunConfig file = small_run(dir_ / "d.csv", "from_file");
  file.k = 7;
  file.random_states = 2;
  write_file(dir_ / "config.json", to_json(file).dump());
  const fs::path out = dir_ / "resolved.json";
  const std::string base = "run --print-config --config " + (dir_ / "config.json").string();

  ASSERT_EQ(run_tool(base + " --k 4", out), 0) << read_file(out);
  auto j = nlohmann::json::parse(read_file(out));
  EXPECT_EQ(j["k"], 4);
  EXPECT_EQ(j["random_states"], 2);
  EXPECT_EQ(j["output_dir"], (dir_ / "from_file").string());

  const std::string env_cmd = std::string(kOutputDirEnv) + "=/tmp/env_dir " +
                              std::string(COHORTXAI_TOOL) + " " + base + " > " + out.string();
  ASSERT_EQ(std::system(env_cmd.c_str()), 0);
  EXPECT_EQ(nlohmann::json::parse(read_file(out))["output_dir"], "/tmp/env_dir");

  const std::string both = std::string(kOutputDirEnv) + "=/tmp/env_dir " +
                           std::string(COHORTXAI_TOOL) + " " + base + " --out /tmp/flag_dir > " +
                           out.string();
  ASSERT_EQ(std::system(both.c_str()), 0);
  EXPECT_EQ(nlohmann::json::parse(read_file(out))["output_dir"], "/tmp/flag_dir");
}

}  // namespace
}  // namespace cohortxai::cli
