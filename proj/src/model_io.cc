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

#include "cohortxai/model_io.h"

#include "cohortxai/error.h"

namespace cohortxai {
namespace {

using nlohmann::json;

json scaler_json(const Scaler& s) {
  return {{"mean", s.mean}, {"scale", s.scale}};
}

Scaler scaler_from(const json& j) {
  Scaler s;
  s.mean = j.at("mean").get<std::vector<double>>();
  s.scale = j.at("scale").get<std::vector<double>>();
  if (s.mean.size() != s.scale.size()) {
    throw ParseError("scaler mean/scale lengths differ");
  }
  return s;
}

json matrix_json(const Matrix& m) {
  return {{"rows", m.rows()},
          {"cols", m.cols()},
          {"data", std::vector<double>(m.data().begin(), m.data().end())}};
}

Matrix matrix_from(const json& j) {
  Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  const auto data = j.at("data").get<std::vector<double>>();
  if (data.size() != m.rows() * m.cols()) {
    throw ParseError("matrix data has the wrong length");
  }
  std::ranges::copy(data, m.data().begin());
  return m;
}

json forest_json(const ForestModel& f) {
  json trees = json::array();
  for (const Tree& tree : f.trees) {
    json t = {{"feature", json::array()}, {"threshold", json::array()},
              {"left", json::array()},    {"right", json::array()},
              {"cover", json::array()},   {"value", json::array()}};
    for (const TreeNode& n : tree.nodes) {
      t["feature"].push_back(n.feature);
      t["threshold"].push_back(n.threshold);
      t["left"].push_back(n.left);
      t["right"].push_back(n.right);
      t["cover"].push_back(n.cover);
      t["value"].push_back(n.value);
    }
    trees.push_back(std::move(t));
  }
  return {{"params",
           {{"n_trees", f.params.n_trees},
            {"min_leaf_size", f.params.min_leaf_size},
            {"features_per_split", f.params.features_per_split},
            {"bootstrap", f.params.bootstrap}}},
          {"seed", f.seed},
          {"n_features", f.n_features},
          {"trees", std::move(trees)}};
}

ForestModel forest_from(const json& j) {
  ForestModel f;
  const json& p = j.at("params");
  f.params.n_trees = p.at("n_trees").get<std::size_t>();
  f.params.min_leaf_size = p.at("min_leaf_size").get<std::size_t>();
  f.params.features_per_split = p.at("features_per_split").get<std::size_t>();
  f.params.bootstrap = p.at("bootstrap").get<bool>();
  f.seed = j.at("seed").get<std::uint64_t>();
  f.n_features = j.at("n_features").get<std::size_t>();
  for (const json& t : j.at("trees")) {
    const auto feature = t.at("feature").get<std::vector<int>>();
    const auto threshold = t.at("threshold").get<std::vector<double>>();
    const auto left = t.at("left").get<std::vector<int>>();
    const auto right = t.at("right").get<std::vector<int>>();
    const auto cover = t.at("cover").get<std::vector<double>>();
    const auto value = t.at("value").get<std::vector<double>>();
    const std::size_t n = feature.size();
    if (threshold.size() != n || left.size() != n || right.size() != n ||
        cover.size() != n || value.size() != n || n == 0) {
      throw ParseError("tree arrays have inconsistent lengths");
    }
    Tree tree;
    for (std::size_t i = 0; i < n; ++i) {
      TreeNode node{feature[i], threshold[i], left[i], right[i], cover[i], value[i]};
      if (!node.is_leaf()) {
        const auto bad = [&](int c) {
          return c <= static_cast<int>(i) || c >= static_cast<int>(n);
        };
        if (bad(node.left) || bad(node.right) ||
            static_cast<std::size_t>(node.feature) >= f.n_features) {
          throw ParseError("tree node " + std::to_string(i) +
                           " has invalid children or feature");
        }
      }
      tree.nodes.push_back(node);
    }
    f.trees.push_back(std::move(tree));
  }
  if (f.trees.empty()) throw ParseError("forest has no trees");
  return f;
}

}  // namespace

json model_to_json(const SavedModel& saved) {
  json j = {{"format", "cohortxai-model"},
            {"version", 1},
            {"kind", std::string(to_string(kind_of(saved.model)))},
            {"feature_names", saved.feature_names}};
  if (const auto* f = std::get_if<ForestModel>(&saved.model)) {
    j.update(forest_json(*f));
  } else if (const auto* s = std::get_if<ScaledSvm>(&saved.model)) {
    j["scaler"] = scaler_json(s->scaler);
    j["gamma"] = s->svm.gamma;
    j["c"] = s->svm.c;
    j["bias"] = s->svm.bias;
    j["n_features"] = s->svm.n_features;
    j["support_vectors"] = matrix_json(s->svm.support_vectors);
    j["alpha"] = s->svm.alpha;
    j["labels"] = s->svm.labels;
  } else {
    const auto& m = std::get<ScaledMlp>(saved.model);
    j["scaler"] = scaler_json(m.scaler);
    j["n_features"] = m.mlp.n_features;
    json layers = json::array();
    for (const auto& layer : m.mlp.hidden) {
      layers.push_back({{"weights", matrix_json(layer.weights)},
                        {"bias", layer.bias}});
    }
    j["hidden"] = std::move(layers);
    j["output_weights"] = m.mlp.output_weights;
    j["output_bias"] = m.mlp.output_bias;
  }
  return j;
}

SavedModel model_from_json(const json& j) {
  try {
    SavedModel saved;
    saved.feature_names = j.value("feature_names", std::vector<std::string>{});
    const ModelKind kind = parse_model_kind(j.at("kind").get<std::string>());
    switch (kind) {
      case ModelKind::kForest:
        saved.model = forest_from(j);
        break;
      case ModelKind::kSvm: {
        ScaledSvm s;
        s.scaler = scaler_from(j.at("scaler"));
        s.svm.gamma = j.at("gamma").get<double>();
        s.svm.c = j.at("c").get<double>();
        s.svm.bias = j.at("bias").get<double>();
        s.svm.n_features = j.at("n_features").get<std::size_t>();
        s.svm.support_vectors = matrix_from(j.at("support_vectors"));
        s.svm.alpha = j.at("alpha").get<std::vector<double>>();
        s.svm.labels = j.at("labels").get<std::vector<int>>();
        if (s.svm.alpha.size() != s.svm.support_vectors.rows() ||
            s.svm.labels.size() != s.svm.alpha.size()) {
          throw ParseError("svm support vector arrays disagree");
        }
        saved.model = std::move(s);
        break;
      }
      case ModelKind::kMlp: {
        ScaledMlp m;
        m.scaler = scaler_from(j.at("scaler"));
        m.mlp.n_features = j.at("n_features").get<std::size_t>();
        for (const json& layer : j.at("hidden")) {
          m.mlp.hidden.push_back({matrix_from(layer.at("weights")),
                                  layer.at("bias").get<std::vector<double>>()});
        }
        m.mlp.output_weights = j.at("output_weights").get<std::vector<double>>();
        m.mlp.output_bias = j.at("output_bias").get<double>();
        saved.model = std::move(m);
        break;
      }
    }
    if (!saved.feature_names.empty() &&
        saved.feature_names.size() != feature_count(saved.model)) {
      throw ParseError("feature_names length does not match the model");
    }
    return saved;
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid model JSON: ") + e.what());
  }
}

json to_json(const ModelHyper& hyper) {
  return {
      {"forest",
       {{"n_trees", hyper.forest.n_trees},
        {"min_leaf_size", hyper.forest.min_leaf_size},
        {"features_per_split", hyper.forest.features_per_split},
        {"bootstrap", hyper.forest.bootstrap}}},
      {"svm",
       {{"c", hyper.svm.c},
        {"gamma", hyper.svm.gamma ? json(*hyper.svm.gamma) : json(nullptr)},
        {"tol", hyper.svm.tol},
        {"max_passes", hyper.svm.max_passes},
        {"max_sweeps", hyper.svm.max_sweeps}}},
      {"mlp",
       {{"learning_rate", hyper.mlp.learning_rate},
        {"epochs", hyper.mlp.epochs},
        {"batch", hyper.mlp.batch},
        {"hidden_width", hyper.mlp.hidden_width},
        {"hidden_layers", hyper.mlp.hidden_layers}}}};
}

ModelHyper hyper_from_json(const json& j) {
  ModelHyper h;
  try {
    if (j.contains("forest")) {
      const json& f = j["forest"];
      h.forest.n_trees = f.value("n_trees", h.forest.n_trees);
      h.forest.min_leaf_size = f.value("min_leaf_size", h.forest.min_leaf_size);
      h.forest.features_per_split =
          f.value("features_per_split", h.forest.features_per_split);
      h.forest.bootstrap = f.value("bootstrap", h.forest.bootstrap);
    }
    if (j.contains("svm")) {
      const json& s = j["svm"];
      h.svm.c = s.value("c", h.svm.c);
      if (s.contains("gamma") && !s["gamma"].is_null()) {
        h.svm.gamma = s["gamma"].get<double>();
      }
      h.svm.tol = s.value("tol", h.svm.tol);
      h.svm.max_passes = s.value("max_passes", h.svm.max_passes);
      h.svm.max_sweeps = s.value("max_sweeps", h.svm.max_sweeps);
    }
    if (j.contains("mlp")) {
      const json& m = j["mlp"];
      h.mlp.learning_rate = m.value("learning_rate", h.mlp.learning_rate);
      h.mlp.epochs = m.value("epochs", h.mlp.epochs);
      h.mlp.batch = m.value("batch", h.mlp.batch);
      h.mlp.hidden_width = m.value("hidden_width", h.mlp.hidden_width);
      h.mlp.hidden_layers = m.value("hidden_layers", h.mlp.hidden_layers);
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid hyperparameters: ") + e.what());
  }
  return h;
}

}  // namespace cohortxai
