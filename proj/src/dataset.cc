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

#include "cohortxai/dataset.h"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <utility>

#include "json.hpp"

#include "cohortxai/error.h"
#include "cohortxai/random.h"

namespace cohortxai {
namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) {
    s.remove_suffix(1);
  }
  return s;
}

std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  if (!std::isfinite(value)) return std::nullopt;
  return value;
}

// Splits on '\n', strips a trailing '\r', and drops trailing empty lines.
std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = end + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::vector<std::string_view> split_cells(std::string_view line, char delim) {
  std::vector<std::string_view> cells;
  std::size_t pos = 0;
  while (true) {
    std::size_t end = line.find(delim, pos);
    if (end == std::string_view::npos) {
      cells.push_back(line.substr(pos));
      break;
    }
    cells.push_back(line.substr(pos, end - pos));
    pos = end + 1;
  }
  for (auto& cell : cells) {
    cell = trim(cell);
    if (cell.size() >= 2 && cell.front() == '"' && cell.back() == '"') {
      cell = cell.substr(1, cell.size() - 2);
    }
  }
  return cells;
}

bool contains(const std::vector<std::string>& codes, std::string_view value) {
  return std::ranges::any_of(
      codes, [&](const std::string& code) { return trim(code) == value; });
}

std::string_view to_string(FieldType type) {
  switch (type) {
    case FieldType::kNumeric:
      return "numeric";
    case FieldType::kCategorical:
      return "categorical";
    case FieldType::kLabel:
      return "label";
  }
  return "numeric";
}

FieldType parse_field_type(std::string_view text) {
  if (text == "numeric") return FieldType::kNumeric;
  if (text == "categorical") return FieldType::kCategorical;
  if (text == "label") return FieldType::kLabel;
  throw ParseError("unknown field type '" + std::string(text) + "'");
}

void append_number(std::string& out, double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  out.append(buf, ptr);
}

bool bit_equal(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  const auto da = a.data();
  const auto db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) {
    if (std::bit_cast<std::uint64_t>(da[i]) !=
        std::bit_cast<std::uint64_t>(db[i])) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::string_view to_string(FeatureKind kind) {
  return kind == FeatureKind::kPhiChar ? "phichar" : "nutritional";
}

std::string_view to_string(FeatureSet set) {
  switch (set) {
    case FeatureSet::kPhiChar:
      return "phichar";
    case FeatureSet::kNutritional:
      return "nutritional";
    case FeatureSet::kBoth:
      return "both";
  }
  return "both";
}

FeatureKind parse_feature_kind(std::string_view text) {
  if (text == "phichar" || text == "PhiChar") return FeatureKind::kPhiChar;
  if (text == "nutritional" || text == "Nutritional") {
    return FeatureKind::kNutritional;
  }
  throw ParseError("unknown feature kind '" + std::string(text) + "'");
}

FeatureSet parse_feature_set(std::string_view text) {
  if (text == "phichar" || text == "PhiChar") return FeatureSet::kPhiChar;
  if (text == "nutritional" || text == "Nutritional") {
    return FeatureSet::kNutritional;
  }
  if (text == "both" || text == "Both") return FeatureSet::kBoth;
  throw ParseError("unknown feature set '" + std::string(text) + "'");
}

// ---------------------------------------------------------------- Layout --

void LayoutSpec::validate() const {
  if (fields.empty()) throw InvalidArgument("layout has no fields");
  std::set<std::string, std::less<>> names;
  std::size_t labels = 0;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const LayoutField& f = fields[i];
    if (f.name.empty()) throw InvalidArgument("layout field with empty name");
    if (!names.insert(f.name).second) {
      throw InvalidArgument("duplicate layout field '" + f.name + "'");
    }
    if (f.width == 0) {
      throw InvalidArgument("layout field '" + f.name + "' has zero width");
    }
    if (i > 0) {
      const LayoutField& prev = fields[i - 1];
      if (f.start <= prev.start) {
        throw InvalidArgument("layout field '" + f.name +
                              "' does not start after '" + prev.name + "'");
      }
      if (prev.start + prev.width > f.start) {
        throw InvalidArgument("layout fields '" + prev.name + "' and '" +
                              f.name + "' overlap");
      }
    }
    if (f.type == FieldType::kLabel) ++labels;
  }
  if (labels != 1) {
    throw InvalidArgument("layout must declare exactly one label field");
  }
  if (labels == fields.size()) {
    throw InvalidArgument("layout declares no feature fields");
  }
}

std::size_t LayoutSpec::record_width() const {
  std::size_t width = 0;
  for (const auto& f : fields) width = std::max(width, f.start + f.width);
  return width;
}

LayoutSpec parse_layout_json(std::string_view text) {
  LayoutSpec layout;
  try {
    const json doc = json::parse(text);
    if (!doc.is_array()) throw ParseError("layout must be a JSON array");
    for (const json& item : doc) {
      LayoutField f;
      f.name = item.at("name").get<std::string>();
      const auto start = item.at("start").get<std::int64_t>();
      const auto width = item.at("width").get<std::int64_t>();
      if (start < 0 || width < 1) {
        throw ParseError("layout field '" + f.name +
                         "' needs start >= 0 and width >= 1");
      }
      f.start = static_cast<std::size_t>(start);
      f.width = static_cast<std::size_t>(width);
      f.type = parse_field_type(item.value("type", std::string("numeric")));
      f.missing_codes =
          item.value("missing_codes", std::vector<std::string>{});
      if (f.type == FieldType::kLabel) {
        f.case_codes = item.value("case_codes", f.case_codes);
        f.control_codes = item.value("control_codes", f.control_codes);
      } else {
        f.kind = parse_feature_kind(item.value("kind", std::string("nutritional")));
      }
      layout.fields.push_back(std::move(f));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid layout JSON: ") + e.what());
  }
  layout.validate();
  return layout;
}

std::string layout_to_json(const LayoutSpec& layout) {
  json doc = json::array();
  for (const auto& f : layout.fields) {
    json item = {{"name", f.name},
                 {"start", f.start},
                 {"width", f.width},
                 {"type", std::string(to_string(f.type))},
                 {"missing_codes", f.missing_codes}};
    if (f.type == FieldType::kLabel) {
      item["case_codes"] = f.case_codes;
      item["control_codes"] = f.control_codes;
    } else {
      item["kind"] = std::string(to_string(f.kind));
    }
    doc.push_back(std::move(item));
  }
  return doc.dump(1) + "\n";
}

KindMap parse_kind_map_json(std::string_view text) {
  KindMap kinds;
  try {
    const json doc = json::parse(text);
    if (!doc.is_object()) throw ParseError("kind map must be a JSON object");
    for (const auto& [name, kind] : doc.items()) {
      kinds.emplace(name, parse_feature_kind(kind.get<std::string>()));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid kind map JSON: ") + e.what());
  }
  return kinds;
}

std::string kind_map_to_json(const KindMap& kinds) {
  json doc = json::object();
  for (const auto& [name, kind] : kinds) doc[name] = std::string(to_string(kind));
  return doc.dump(1) + "\n";
}

// --------------------------------------------------------------- Dataset --

Dataset::Dataset(Matrix values, std::vector<int> labels,
                 std::vector<FeatureSpec> specs,
                 std::vector<std::uint8_t> missing)
    : values_(std::move(values)),
      labels_(std::move(labels)),
      specs_(std::move(specs)),
      missing_(std::move(missing)) {
  if (values_.rows() == 0 || values_.cols() == 0) {
    throw InvalidArgument("dataset needs at least one row and one feature");
  }
  if (labels_.size() != values_.rows()) {
    throw InvalidArgument("label count does not match row count");
  }
  if (specs_.size() != values_.cols()) {
    throw InvalidArgument("feature spec count does not match column count");
  }
  if (missing_.empty()) missing_.assign(values_.rows() * values_.cols(), 0);
  if (missing_.size() != values_.rows() * values_.cols()) {
    throw InvalidArgument("missingness mask has the wrong shape");
  }
  for (int label : labels_) {
    if (label != 0 && label != 1) {
      throw InvalidArgument("labels must be 0 or 1, got " +
                            std::to_string(label));
    }
  }
  std::set<std::string_view> names;
  for (const auto& spec : specs_) {
    if (!names.insert(spec.name).second) {
      throw InvalidArgument("duplicate feature name '" + spec.name + "'");
    }
  }
}

std::vector<std::string> Dataset::feature_names() const {
  std::vector<std::string> names;
  names.reserve(specs_.size());
  for (const auto& spec : specs_) names.push_back(spec.name);
  return names;
}

std::optional<std::size_t> Dataset::find_feature(std::string_view name) const {
  for (std::size_t j = 0; j < specs_.size(); ++j) {
    if (specs_[j].name == name) return j;
  }
  return std::nullopt;
}

std::vector<std::size_t> Dataset::missing_counts() const {
  std::vector<std::size_t> counts(features(), 0);
  for (std::size_t r = 0; r < rows(); ++r) {
    for (std::size_t c = 0; c < features(); ++c) counts[c] += missing(r, c);
  }
  return counts;
}

std::size_t Dataset::count_label(int label) const {
  return static_cast<std::size_t>(std::ranges::count(labels_, label));
}

bool operator==(const Dataset& a, const Dataset& b) {
  return a.labels_ == b.labels_ && a.specs_ == b.specs_ &&
         a.missing_ == b.missing_ && bit_equal(a.values_, b.values_);
}

// --------------------------------------------------------------- Parsing --

Dataset parse_fixed_width(std::string_view bytes, const LayoutSpec& layout) {
  layout.validate();
  const std::size_t width = layout.record_width();

  std::vector<FeatureSpec> specs;
  const LayoutField* label_field = nullptr;
  for (const auto& f : layout.fields) {
    if (f.type == FieldType::kLabel) {
      label_field = &f;
      continue;
    }
    specs.push_back({f.name, f.kind, FixedWidthRange{f.start, f.width}});
  }

  const auto lines = split_lines(bytes);
  std::vector<double> values;
  std::vector<std::uint8_t> missing;
  std::vector<int> labels;
  std::size_t kept = 0;
  for (std::size_t r = 0; r < lines.size(); ++r) {
    const std::string_view line = lines[r];
    const std::string where = "record " + std::to_string(r + 1);
    if (line.size() < width) {
      for (const auto& f : layout.fields) {
        if (line.size() < f.start + f.width) {
          throw ParseError(where + ": line has " + std::to_string(line.size()) +
                           " bytes, field '" + f.name + "' needs " +
                           std::to_string(f.start + f.width));
        }
      }
    }
    const std::string_view code =
        trim(line.substr(label_field->start, label_field->width));
    int label;
    if (contains(label_field->case_codes, code)) {
      label = 1;
    } else if (contains(label_field->control_codes, code)) {
      label = 0;
    } else {
      // Outside the pairing: neither case nor control.
      continue;
    }
    for (const auto& f : layout.fields) {
      if (f.type == FieldType::kLabel) continue;
      const std::string_view cell = trim(line.substr(f.start, f.width));
      if (cell.empty() || contains(f.missing_codes, cell)) {
        values.push_back(kNaN);
        missing.push_back(1);
        continue;
      }
      const auto value = parse_number(cell);
      if (!value) {
        throw ParseError(where + ", field '" + f.name +
                         "': non-numeric value '" + std::string(cell) + "'");
      }
      if (f.type == FieldType::kCategorical && *value != std::floor(*value)) {
        throw ParseError(where + ", field '" + f.name +
                         "': categorical code '" + std::string(cell) +
                         "' is not an integer");
      }
      values.push_back(*value);
      missing.push_back(0);
    }
    labels.push_back(label);
    ++kept;
  }
  if (kept == 0) throw ParseError("no case or control records in input");
  Matrix m(kept, specs.size());
  std::ranges::copy(values, m.data().begin());
  return Dataset(std::move(m), std::move(labels), std::move(specs),
                 std::move(missing));
}

Dataset parse_delimited(std::string_view text,
                        const DelimitedOptions& options) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw ParseError("empty delimited input");

  std::vector<std::string> header;
  std::size_t first_data = 0;
  if (options.header) {
    const auto cells = split_cells(lines[0], options.delimiter);
    if (std::ranges::all_of(cells, [](std::string_view c) {
          return parse_number(c).has_value();
        })) {
      throw ParseError("line 1: header row is numeric; input has no header");
    }
    header.assign(cells.begin(), cells.end());
    first_data = 1;
  } else {
    const std::size_t n = split_cells(lines[0], options.delimiter).size();
    if (n < 2) throw ParseError("line 1: need at least one feature and a label");
    for (std::size_t j = 0; j + 1 < n; ++j) header.push_back("x" + std::to_string(j));
    header.push_back(options.label_column);
  }

  std::size_t label_col = header.size();
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] == options.label_column) {
      if (label_col != header.size()) {
        throw ParseError("label column '" + options.label_column +
                         "' appears twice");
      }
      label_col = j;
    }
  }
  if (label_col == header.size()) {
    throw ParseError("label column '" + options.label_column +
                     "' not found in header");
  }
  for (const auto& [name, kind] : options.kinds) {
    if (std::ranges::find(header, name) == header.end()) {
      throw ParseError("feature '" + name + "' from kind map not in header");
    }
  }

  std::vector<FeatureSpec> specs;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j == label_col) continue;
    FeatureSpec spec{header[j], FeatureKind::kNutritional, DelimitedColumn{j}};
    if (auto it = options.kinds.find(header[j]); it != options.kinds.end()) {
      spec.kind = it->second;
    }
    specs.push_back(std::move(spec));
  }

  const std::size_t n_rows = lines.size() - first_data;
  if (n_rows == 0) throw ParseError("delimited input has no data rows");
  Matrix m(n_rows, specs.size());
  std::vector<std::uint8_t> missing(n_rows * specs.size(), 0);
  std::vector<int> labels(n_rows);
  for (std::size_t r = 0; r < n_rows; ++r) {
    const std::size_t line_no = first_data + r + 1;
    const auto cells = split_cells(lines[first_data + r], options.delimiter);
    if (cells.size() != header.size()) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(header.size()) + " fields, found " +
                       std::to_string(cells.size()));
    }
    const auto label = parse_number(cells[label_col]);
    if (!label || (*label != 0.0 && *label != 1.0)) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": unknown label value '" +
                       std::string(cells[label_col]) + "'");
    }
    labels[r] = static_cast<int>(*label);
    std::size_t c = 0;
    for (std::size_t j = 0; j < cells.size(); ++j) {
      if (j == label_col) continue;
      if (cells[j].empty()) {
        m(r, c) = kNaN;
        missing[r * specs.size() + c] = 1;
      } else {
        const auto value = parse_number(cells[j]);
        if (!value) {
          throw ParseError("line " + std::to_string(line_no) + ", field '" +
                           header[j] + "': non-numeric value '" +
                           std::string(cells[j]) + "'");
        }
        m(r, c) = *value;
      }
      ++c;
    }
  }
  return Dataset(std::move(m), std::move(labels), std::move(specs),
                 std::move(missing));
}

std::string write_delimited(const Dataset& ds) {
  std::string out;
  for (const auto& spec : ds.specs()) {
    out += spec.name;
    out += ',';
  }
  out += "label\n";
  for (std::size_t r = 0; r < ds.rows(); ++r) {
    for (std::size_t c = 0; c < ds.features(); ++c) {
      if (!ds.missing(r, c)) append_number(out, ds.values()(r, c));
      out += ',';
    }
    out += ds.labels()[r] == 1 ? "1\n" : "0\n";
  }
  return out;
}

// ------------------------------------------------------------ Transforms --

Dataset apply_missing_policy(Dataset ds) {
  Matrix values = ds.values();
  for (std::size_t r = 0; r < ds.rows(); ++r) {
    for (std::size_t c = 0; c < ds.features(); ++c) {
      if (ds.missing(r, c)) values(r, c) = kMissingSentinel;
    }
  }
  std::vector<int> labels(ds.labels().begin(), ds.labels().end());
  std::vector<std::uint8_t> mask(ds.missing_mask().begin(),
                                 ds.missing_mask().end());
  return Dataset(std::move(values), std::move(labels), ds.specs(),
                 std::move(mask));
}

Dataset select_feature_set(const Dataset& ds, FeatureSet which) {
  std::vector<std::size_t> cols;
  for (std::size_t j = 0; j < ds.features(); ++j) {
    const FeatureKind kind = ds.specs()[j].kind;
    if (which == FeatureSet::kBoth ||
        (which == FeatureSet::kPhiChar && kind == FeatureKind::kPhiChar) ||
        (which == FeatureSet::kNutritional &&
         kind == FeatureKind::kNutritional)) {
      cols.push_back(j);
    }
  }
  if (cols.empty()) {
    throw InvalidArgument("dataset has no features of kind '" +
                          std::string(to_string(which)) + "'");
  }
  std::vector<FeatureSpec> specs;
  std::vector<std::uint8_t> mask(ds.rows() * cols.size());
  for (std::size_t j : cols) specs.push_back(ds.specs()[j]);
  for (std::size_t r = 0; r < ds.rows(); ++r) {
    for (std::size_t k = 0; k < cols.size(); ++k) {
      mask[r * cols.size() + k] = ds.missing(r, cols[k]);
    }
  }
  std::vector<int> labels(ds.labels().begin(), ds.labels().end());
  return Dataset(select_columns(ds.values(), cols), std::move(labels),
                 std::move(specs), std::move(mask));
}

// ------------------------------------------------------------- Synthetic --

void SyntheticSpec::validate() const {
  if (n_cases + n_controls == 0) {
    throw InvalidArgument("synthetic spec needs at least one row");
  }
  if (p_nutritional + p_phichar == 0) {
    throw InvalidArgument("synthetic spec needs at least one feature");
  }
  for (const auto& planted : informative) {
    if (planted.feature >= p_nutritional + p_phichar) {
      throw InvalidArgument("informative feature index " +
                            std::to_string(planted.feature) + " out of range");
    }
    if (!std::isfinite(planted.effect)) {
      throw InvalidArgument("informative effect size must be finite");
    }
  }
  if (!(missing_probability >= 0.0 && missing_probability < 1.0)) {
    throw InvalidArgument("missing probability must lie in [0, 1)");
  }
}

std::vector<std::string> synthetic_feature_names(std::size_t p_nutritional,
                                                 std::size_t p_phichar) {
  static constexpr std::string_view kNutritional[] = {
      "VBP", "GHP", "NCPNVK", "BUP", "UBP", "SSBTP", "SEP",
      "UAP", "NCPN3ME", "BCP", "C1P", "TIP", "RWP", "PBP",
      "URP", "FOP", "FBP", "UDP", "G1P", "BXP"};
  static constexpr std::string_view kPhiChar[] = {
      "AGE", "WAIST", "SMK", "WHR", "BMI", "SBP",
      "SEX", "DBP", "RACE", "EDU", "MAR"};
  auto placeholder = [](std::string_view prefix, std::size_t i) {
    std::string digits = std::to_string(i + 1);
    return std::string(prefix) + std::string(3 - std::min<std::size_t>(3, digits.size()), '0') + digits;
  };
  std::vector<std::string> names;
  for (std::size_t i = 0; i < p_nutritional; ++i) {
    names.push_back(i < std::size(kNutritional) ? std::string(kNutritional[i])
                                                : placeholder("NUT", i));
  }
  for (std::size_t i = 0; i < p_phichar; ++i) {
    names.push_back(i < std::size(kPhiChar) ? std::string(kPhiChar[i])
                                            : placeholder("PHI", i));
  }
  return names;
}

Dataset generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  const std::size_t n = spec.n_cases + spec.n_controls;
  const std::size_t p = spec.p_nutritional + spec.p_phichar;
  std::vector<double> shift(p, 0.0);
  for (const auto& planted : spec.informative) {
    shift[planted.feature] += planted.effect;
  }

  const auto names = synthetic_feature_names(spec.p_nutritional, spec.p_phichar);
  std::vector<FeatureSpec> specs;
  for (std::size_t j = 0; j < p; ++j) {
    specs.push_back({names[j],
                     j < spec.p_nutritional ? FeatureKind::kNutritional
                                            : FeatureKind::kPhiChar,
                     std::monostate{}});
  }

  Rng rng = make_rng(spec.seed, {stream_tag("synthetic")});
  std::normal_distribution<double> gaussian(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  Matrix values(n, p);
  std::vector<std::uint8_t> missing(n * p, 0);
  std::vector<int> labels(n);
  for (std::size_t r = 0; r < n; ++r) {
    labels[r] = r < spec.n_cases ? 1 : 0;
    for (std::size_t j = 0; j < p; ++j) {
      values(r, j) = gaussian(rng) + (labels[r] == 1 ? shift[j] : 0.0);
      missing[r * p + j] = uniform(rng) < spec.missing_probability;
    }
  }
  return apply_missing_policy(Dataset(std::move(values), std::move(labels),
                                      std::move(specs), std::move(missing)));
}

}  // namespace cohortxai
