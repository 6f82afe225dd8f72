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

#ifndef COHORTXAI_MODEL_IO_H_
#define COHORTXAI_MODEL_IO_H_

#include <string>
#include <vector>

#include "json.hpp"

#include "cohortxai/classifier.h"

namespace cohortxai {

struct SavedModel {
  TrainedModel model;
  std::vector<std::string> feature_names;
};

// Self-describing JSON: {"kind", "feature_names", "params", "seed", ...}.
// Doubles are written in round-trip form, so a loaded model predicts
// bit-identically.
nlohmann::json model_to_json(const SavedModel& saved);
SavedModel model_from_json(const nlohmann::json& json);

nlohmann::json to_json(const ModelHyper& hyper);
ModelHyper hyper_from_json(const nlohmann::json& json);

}  // namespace cohortxai

#endif  // COHORTXAI_MODEL_IO_H_
