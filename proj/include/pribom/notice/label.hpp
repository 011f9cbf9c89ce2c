/*
 * Copyright (C) 2026 The PriBOM Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Data Safety label input, its mapping onto data-type categories, and the
// attachment of disclosures to widget entries.

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "pribom/diagnostics.hpp"
#include "pribom/model.hpp"

namespace pribom::notice {

struct DataSafetyRow {
  std::string label_name;
  bool collected = false;
  bool optional_flag = false;
  std::vector<std::string> purposes;
};

// Accepts {"labels": [...]} or a bare array of rows. Throws pribom::Error
// on a malformed file.
std::vector<DataSafetyRow> data_safety_from_json(const nlohmann::json& j);
std::vector<DataSafetyRow> load_data_safety(const std::filesystem::path& path);

// Data Safety data-type names and the category each maps to, if any.
class TaxonomyMap {
 public:
  // Accepts {"labels": {name: category|null}} or the bare map.
  static TaxonomyMap from_json(const nlohmann::json& j);
  static TaxonomyMap load(const std::filesystem::path& path);

  // False when `label_name` is not in the taxonomy (case-insensitive).
  bool known(const std::string& label_name) const;
  std::optional<std::string> category_of(const std::string& label_name) const;
  const std::map<std::string, std::optional<std::string>>& all() const noexcept { return entries_; }

 private:
  std::map<std::string, std::optional<std::string>> entries_;  // lowercased name
};

// Declarations for collected rows whose label maps to a category, in input
// order. Other rows are skipped; unmapped or unknown labels are reported.
std::vector<LabelDeclaration> parse_label(const std::vector<DataSafetyRow>& rows, const TaxonomyMap& taxonomy,
                                          Diagnostics& diags);

// Replaces each entry's disclosure sections with the segments and
// declarations whose data type occurs among its findings.
std::vector<WidgetEntry> attach(std::vector<WidgetEntry> entries, const std::vector<PolicySegment>& segments,
                                const std::vector<LabelDeclaration>& declarations);

}  // namespace pribom::notice
