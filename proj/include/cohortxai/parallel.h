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

#ifndef COHORTXAI_PARALLEL_H_
#define COHORTXAI_PARALLEL_H_

namespace cohortxai {

// Every parallel kernel has a serial reference path selected by this flag.
// Both paths produce bit-identical results; the serial one exists for tests
// and benchmarks.
enum class Execution { kSerial, kParallel };

// Number of OpenMP workers a parallel region will use (1 without OpenMP).
int max_workers();

// Sets the worker count for subsequent parallel regions; values < 1 restore
// the runtime default.
void set_workers(int n);

}  // namespace cohortxai

#endif  // COHORTXAI_PARALLEL_H_
