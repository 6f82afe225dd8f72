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

#ifndef COHORTXAI_RANDOM_H_
#define COHORTXAI_RANDOM_H_

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace cohortxai {

using Rng = std::mt19937_64;

// 64-bit FNV-1a of a stream tag. Tags name the purpose of a substream
// ("model", "folds", ...), so adding a new consumer never shifts the seeds
// of existing ones.
constexpr std::uint64_t stream_tag(std::string_view name) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (char c : name) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t value);

// Derives the seed of the substream identified by `coordinates` under
// `master`. The derivation is a SplitMix64 chain:
//   h0 = mix64(master); h_{i+1} = mix64(h_i ^ mix64(c_i + 0x9e3779b97f4a7c15))
// One master seed therefore reproduces every substream of a study.
std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> coordinates);

inline Rng make_rng(std::uint64_t master,
                    std::initializer_list<std::uint64_t> coordinates) {
  return Rng(derive_seed(master, coordinates));
}

}  // namespace cohortxai

#endif  // COHORTXAI_RANDOM_H_
