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

#ifndef COHORTXAI_DATASET_H_
#define COHORTXAI_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cohortxai/matrix.h"

namespace cohortxai {

// Value stored in every cell flagged missing once the missing-value policy
// has been applied.
inline constexpr double kMissingSentinel = -1.0;

enum class FeatureKind { kPhiChar, kNutritional };
enum class FeatureSet { kPhiChar, kNutritional, kBoth };

std::string_view to_string(FeatureKind kind);
std::string_view to_string(FeatureSet set);
FeatureKind parse_feature_kind(std::string_view text);
FeatureSet parse_feature_set(std::string_view text);

struct DelimitedColumn {
  std::size_t index = 0;
  friend bool operator==(const DelimitedColumn&,
                         const DelimitedColumn&) = default;
};

struct FixedWidthRange {
  std::size_t start = 0;
  std::size_t width = 0;
  friend bool operator==(const FixedWidthRange&,
                         const FixedWidthRange&) = default;
};

// Where a feature came from. Synthesized features have no source.
using ColumnSource =
    std::variant<std::monostate, DelimitedColumn, FixedWidthRange>;

struct FeatureSpec {
  std::string name;
  FeatureKind kind = FeatureKind::kNutritional;
  ColumnSource source;
  friend bool operator==(const FeatureSpec&, const FeatureSpec&) = default;
};

enum class FieldType { kNumeric, kCategorical, kLabel };

// One fixed-width field. Blank bytes are always treated as absent; the
// missing codes add survey-specific codes such as "8888". A field of type
// kLabel carries the outcome: codes in `case_codes` map to 1, codes in
// `control_codes` map to 0, and records with any other code are dropped.
struct LayoutField {
  std::string name;
  std::size_t start = 0;
  std::size_t width = 0;
  FieldType type = FieldType::kNumeric;
  std::vector<std::string> missing_codes;
  FeatureKind kind = FeatureKind::kNutritional;
  std::vector<std::string> case_codes{"1"};
  std::vector<std::string> control_codes{"0"};
};

struct LayoutSpec {
  std::vector<LayoutField> fields;

  // Throws InvalidArgument on overlapping or unordered ranges, zero widths,
  // duplicate names, or a label field count other than one.
  void validate() const;
  std::size_t record_width() const;
};

// Layout file: JSON array of {name, start, width, type, missing_codes, kind}.
// `type` is "numeric", "categorical" or "label"; label fields may carry
// "case_codes" / "control_codes".
LayoutSpec parse_layout_json(std::string_view json);
std::string layout_to_json(const LayoutSpec& layout);

using KindMap = std::map<std::string, FeatureKind, std::less<>>;

KindMap parse_kind_map_json(std::string_view json);
std::string kind_map_to_json(const KindMap& kinds);

// Rectangular cohort table: features, binary labels (1 = case), per-feature
// metadata and a missingness mask. Immutable once built.
class Dataset {
 public:
  Dataset() = default;
  // Throws InvalidArgument when shapes disagree, n or p is zero, labels are
  // not binary, or feature names repeat.
  Dataset(Matrix values, std::vector<int> labels,
          std::vector<FeatureSpec> specs, std::vector<std::uint8_t> missing);

  std::size_t rows() const { return values_.rows(); }
  std::size_t features() const { return values_.cols(); }

  const Matrix& values() const { return values_; }
  std::span<const int> labels() const { return labels_; }
  const std::vector<FeatureSpec>& specs() const { return specs_; }
  std::vector<std::string> feature_names() const;
  std::optional<std::size_t> find_feature(std::string_view name) const;

  bool missing(std::size_t r, std::size_t c) const {
    return missing_[r * features() + c] != 0;
  }
  std::span<const std::uint8_t> missing_mask() const { return missing_; }

  // Per-feature count of flagged cells.
  std::vector<std::size_t> missing_counts() const;
  std::size_t count_label(int label) const;

  friend bool operator==(const Dataset&, const Dataset&);

 private:
  Matrix values_;
  std::vector<int> labels_;
  std::vector<FeatureSpec> specs_;
  std::vector<std::uint8_t> missing_;
};

// Parses newline-separated fixed-width records (LF or CRLF). Missing cells are
// flagged in the mask and hold NaN until apply_missing_policy runs.
// Throws ParseError naming the 1-based record number and the field.
Dataset parse_fixed_width(std::string_view bytes, const LayoutSpec& layout);

struct DelimitedOptions {
  char delimiter = ',';
  bool header = true;
  std::string label_column = "label";
  // Features missing from the map default to kNutritional.
  KindMap kinds;
};

// Parses a delimited table. Without a header, features are named x0, x1, ...
// and the label is the last column. Empty cells are flagged missing.
Dataset parse_delimited(std::string_view text, const DelimitedOptions& options);

// Canonical delimited form: header row, features in order, then `label`;
// missing cells are written empty; numbers use the shortest representation
// that parses back to the same double.
std::string write_delimited(const Dataset& ds);

// Stores kMissingSentinel in every flagged cell; everything else is kept.
Dataset apply_missing_policy(Dataset ds);

// Column projection onto one kind, or both kinds in original order.
Dataset select_feature_set(const Dataset& ds, FeatureSet which);

struct PlantedEffect {
  std::size_t feature = 0;
  // Mean shift of the case class in standard-deviation units.
  double effect = 0.0;
};

// Column order: p_nutritional nutritional columns, then p_phichar ones.
// Cases come first in row order.
struct SyntheticSpec {
  std::size_t n_cases = 208;
  std::size_t n_controls = 208;
  std::size_t p_nutritional = 93;
  std::size_t p_phichar = 12;
  std::vector<PlantedEffect> informative;
  double missing_probability = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

// Feature names used by the synthesizer. Leading names follow the survey
// codes that appear in published result tables; the rest are placeholders.
std::vector<std::string> synthetic_feature_names(std::size_t p_nutritional,
                                                 std::size_t p_phichar);

// Unit-variance Gaussian features, informative ones shifted in cases, cells
// masked independently, policy applied. Deterministic in spec.seed.
Dataset generate_synthetic(const SyntheticSpec& spec);

}  // namespace cohortxai

#endif  // COHORTXAI_DATASET_H_
