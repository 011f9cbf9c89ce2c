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

#include "pribom/notice/label.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "pribom/io.hpp"

namespace pribom::notice {
namespace {

constexpr const char* kModule = "notice-analyzer";

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

std::vector<DataSafetyRow> data_safety_from_json(const nlohmann::json& j) {
  const nlohmann::json* rows = &j;
  if (j.is_object()) {
    if (!j.contains("labels")) throw Error(kModule, "Data Safety file lacks \"labels\"");
    rows = &j.at("labels");
  }
  if (!rows->is_array()) throw Error(kModule, "Data Safety labels must be an array");
  std::vector<DataSafetyRow> out;
  std::size_t i = 0;
  for (const auto& rec : *rows) {
    const std::string where = "label row " + std::to_string(i++);
    DataSafetyRow r;
    try {
      r.label_name = rec.at("label_name").get<std::string>();
      r.collected = rec.at("collected").get<bool>();
      if (rec.contains("optional")) r.optional_flag = rec.at("optional").get<bool>();
      if (rec.contains("purposes")) r.purposes = rec.at("purposes").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception&) {
      throw Error(kModule, where + ": needs string label_name, boolean collected and optional, string purposes");
    }
    if (r.label_name.empty()) throw Error(kModule, where + ": empty label_name");
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<DataSafetyRow> load_data_safety(const std::filesystem::path& path) {
  return data_safety_from_json(read_json_file(path, kModule));
}

TaxonomyMap TaxonomyMap::from_json(const nlohmann::json& j) {
  const nlohmann::json* labels = &j;
  if (j.is_object() && j.contains("labels")) labels = &j.at("labels");
  if (!labels->is_object()) throw Error(kModule, "taxonomy map must map label names to categories");
  TaxonomyMap t;
  for (const auto& [name, cat] : labels->items()) {
    std::optional<std::string> category;
    if (!cat.is_null()) {
      if (!cat.is_string() || !is_data_type(cat.get<std::string>())) {
        throw Error(kModule, "taxonomy label " + name + " maps to something other than a data-type category");
      }
      category = cat.get<std::string>();
    }
    if (!t.entries_.emplace(lower(name), category).second) {
      throw Error(kModule, "taxonomy label " + name + " appears twice");
    }
  }
  return t;
}

TaxonomyMap TaxonomyMap::load(const std::filesystem::path& path) {
  return from_json(read_json_file(path, kModule));
}

bool TaxonomyMap::known(const std::string& label_name) const { return entries_.count(lower(label_name)) != 0; }

std::optional<std::string> TaxonomyMap::category_of(const std::string& label_name) const {
  const auto it = entries_.find(lower(label_name));
  return it == entries_.end() ? std::nullopt : it->second;
}

std::vector<LabelDeclaration> parse_label(const std::vector<DataSafetyRow>& rows, const TaxonomyMap& taxonomy,
                                          Diagnostics& diags) {
  std::vector<LabelDeclaration> out;
  for (const auto& r : rows) {
    if (!r.collected) continue;
    if (!taxonomy.known(r.label_name)) {
      diags.warn(kModule, "label \"" + r.label_name + "\" is not a Data Safety data type");
      continue;
    }
    const auto category = taxonomy.category_of(r.label_name);
    if (!category) {
      diags.info(kModule, "label \"" + r.label_name + "\" has no category mapping");
      continue;
    }
    LabelDeclaration d;
    d.label_name = r.label_name;
    d.data_type = *category;
    d.optional_flag = r.optional_flag;
    d.purposes = r.purposes;
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<WidgetEntry> attach(std::vector<WidgetEntry> entries, const std::vector<PolicySegment>& segments,
                                const std::vector<LabelDeclaration>& declarations) {
  for (auto& e : entries) {
    const auto types = e.data_types();
    const std::set<std::string> wanted(types.begin(), types.end());
    e.policy_segments.clear();
    e.label_declarations.clear();
    for (const auto& s : segments) {
      if (wanted.count(s.data_type)) e.policy_segments.push_back(s);
    }
    for (const auto& d : declarations) {
      if (wanted.count(d.data_type)) e.label_declarations.push_back(d);
    }
  }
  return entries;
}

}  // namespace pribom::notice
