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

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "pribom/diagnostics.hpp"
#include "pribom/error.hpp"
#include "pribom/model.hpp"

namespace pribom::permission {

// data_type carried by findings whose permission is not dangerous (U+2014).
// Such findings never reach a document; they are reported as diagnostics.
inline constexpr std::string_view kNoDataType = "\xE2\x80\x94";

// Raised by data_type_of for permissions that are not in the catalog or
// are not dangerous.
class UnknownPermission : public Error {
 public:
  enum class Reason { not_in_catalog, not_dangerous };
  UnknownPermission(std::string permission, Reason reason);
  const std::string& permission() const noexcept { return permission_; }
  Reason reason() const noexcept { return reason_; }

 private:
  std::string permission_;
  Reason reason_;
};

struct PermissionInfo {
  std::string permission;
  std::string protection_level;  // "dangerous", "normal", "signature", ...
  std::optional<std::string> data_type;

  bool dangerous() const { return protection_level == "dangerous"; }
};

// Every permission the tool knows, with its protection level and, for
// dangerous ones, the data-type category.
class PermissionCatalog {
 public:
  // Accepts {"permissions": [...]} or a bare array of records. Throws
  // pribom::Error when a dangerous permission lacks a valid category or a
  // non-dangerous one has a category.
  static PermissionCatalog from_json(const nlohmann::json& j);
  static PermissionCatalog load(const std::filesystem::path& path);

  const PermissionInfo* find(const std::string& permission) const;
  const std::map<std::string, PermissionInfo>& all() const noexcept { return entries_; }
  std::vector<std::string> dangerous() const;

  // The category of a dangerous permission.
  const std::string& data_type_of(const std::string& permission) const;

 private:
  std::map<std::string, PermissionInfo> entries_;
};

struct ApiRule {
  std::string descriptor;  // "L<cls>;-<name>-(<params>)<ret>"
  MethodRef method;
  std::vector<std::string> permissions;
  int min_api = 1;
};

// Exact-descriptor rules from framework APIs to the permissions they need.
class ApiPermissionMap {
 public:
  // Accepts {"rules": [...]} or a bare array. Throws pribom::Error on a
  // malformed descriptor, a duplicate descriptor or a level below 1.
  static ApiPermissionMap from_json(const nlohmann::json& j);
  static ApiPermissionMap load(const std::filesystem::path& path);

  const std::vector<ApiRule>& rules() const noexcept { return rules_; }
  const ApiRule* match(const MethodRef& m) const;

  // Throws pribom::Error naming the first rule permission missing from
  // `catalog`.
  void check_against(const PermissionCatalog& catalog) const;

 private:
  std::vector<ApiRule> rules_;
  std::map<MethodRef, std::size_t> index_;
};

// API level at which each widget class appeared.
class WidgetApiTable {
 public:
  // Accepts {"widgets": [...]} or a bare array of {class, introduced_level}.
  static WidgetApiTable from_json(const nlohmann::json& j);
  static WidgetApiTable load(const std::filesystem::path& path);

  std::optional<int> find(const std::string& widget_class) const;
  const std::map<std::string, int>& all() const noexcept { return levels_; }

 private:
  std::map<std::string, int> levels_;
};

// Findings for every method in `reachable` that a rule matches, one per
// (permission, method_path), sorted (data_type, permission, method_path).
// Non-dangerous permissions carry kNoDataType.
std::vector<PermissionFinding> map_apis(const std::set<MethodRef>& reachable, const ApiPermissionMap& map,
                                        const PermissionCatalog& catalog);

// True when the finding names one of the ten categories.
bool is_data_finding(const PermissionFinding& f);

// Table lookup; classes absent from the table get level 1 and a diagnostic.
int widget_min_api(const std::string& widget_type, const WidgetApiTable& table, Diagnostics& diags);

}  // namespace pribom::permission
