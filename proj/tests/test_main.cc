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

#include "cohortxai/explain.h"

namespace {

// Fails the run if any explanation produced anywhere in the suite broke
// local accuracy.
class LocalAccuracyGate : public ::testing::Environment {
 public:
  void SetUp() override { cohortxai::reset_local_accuracy_stats(); }
  void TearDown() override {
    const auto stats = cohortxai::local_accuracy_stats();
    std::printf("[ gate     ] %llu explanations checked, %llu violations, max error %.3g\n",
                static_cast<unsigned long long>(stats.checked),
                static_cast<unsigned long long>(stats.violations), stats.max_error);
    EXPECT_EQ(stats.violations, 0u);
    EXPECT_LT(stats.max_error, cohortxai::kLocalAccuracyTolerance);
  }
};

}  // namespace

int main(int argc, char** argv) {
  ::testing::InitGoogleTest(&argc, argv);
  ::testing::AddGlobalTestEnvironment(new LocalAccuracyGate);
  return RUN_ALL_TESTS();
}
