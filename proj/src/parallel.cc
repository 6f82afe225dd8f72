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

#include "cohortxai/parallel.h"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cohortxai {

#ifdef _OPENMP
namespace {
const int kDefaultWorkers = omp_get_max_threads();
}  // namespace

int max_workers() { return omp_get_max_threads(); }

void set_workers(int n) { omp_set_num_threads(n < 1 ? kDefaultWorkers : n); }
#else
int max_workers() { return 1; }
void set_workers(int) {}
#endif

}  // namespace cohortxai
