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

#include "pribom/permission/mapper.hpp"

#include <algorithm>
#include <tuple>

#include "pribom/io.hpp"

namespace pribom::permission {
namespace {

constexpr const char* kModule = "permission-mapper";

// Records live under `key` in an object, or form the whole document.
const nlohmann::json& records(const nlohmann::json& j, const char* key) {
  if (j.is_array()) return j;
  if (j.is_object() && j.contains(key) && j.at(key).is_array()) return j.at(key);
  throw Error(kModule, std::string("expected an array or an object with \"") + key + "\"");
}

template <typename T>
T field(const nlohmann::json& rec, const char* key, std::size_t index) {
  try {
    return rec.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(kModule, "record " + std::to_string(index) + ": missing or invalid \"" + key + "\"");
  }
}

}  // namespace

UnknownPermission::UnknownPermission(std::string permission, Reason reason)
    : Error(kModule, reason == Reason::not_in_catalog ? "unknown permission " + permission
                                                      : permission + " is not a dangerous permission"),
      permission_(std::move(permission)),
      reason_(reason) {}

PermissionCatalog PermissionCatalog::from_json(const nlohmann::json& j) {
  PermissionCatalog c;
  std::size_t i = 0;
  for (const auto& rec : records(j, "permissions")) {
    PermissionInfo info;
    info.permission = field<std::string>(rec, "permission", i);
    info.protection_level = field<std::string>(rec, "protection_level", i);
    if (rec.contains("data_type") && !rec.at("data_type").is_null()) {
      info.data_type = field<std::string>(rec, "data_type", i);
    }
    if (info.dangerous()) {
      if (!info.data_type || !is_data_type(*info.data_type)) {
        throw Error(kModule, "dangerous permission " + info.permission + " has no valid data_type");
      }
    } else if (info.data_type) {
      throw Error(kModule, info.protection_level + " permission " + info.permission + " must not have a data_type");
    }
    if (!c.entries_.emplace(info.permission, info).second) {
      throw Error(kModule, "duplicate permission " + info.permission);
    }
    ++i;
  }
  return c;
}

PermissionCatalog PermissionCatalog::load(const std::filesystem::path& path) {
  return from_json(read_json_file(path, kModule));
}

const PermissionInfo* PermissionCatalog::find(const std::string& permission) const {
  const auto it = entries_.find(permission);
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<std::string> PermissionCatalog::dangerous() const {
  std::vector<std::string> out;
  for (const auto& [name, info] : entries_) {
    if (info.dangerous()) out.push_back(name);
  }
  return out;
}

const std::string& PermissionCatalog::data_type_of(const std::string& permission) const {
  const auto* info = find(permission);
  if (info == nullptr) throw UnknownPermission(permission, UnknownPermission::Reason::not_in_catalog);
  if (!info->dangerous()) throw UnknownPermission(permission, UnknownPermission::Reason::not_dangerous);
  return *info->data_type;
}

ApiPermissionMap ApiPermissionMap::from_json(const nlohmann::json& j) {
  ApiPermissionMap m;
  std::size_t i = 0;
  for (const auto& rec : records(j, "rules")) {
    ApiRule r;
    r.descriptor = field<std::string>(rec, "descriptor", i);
    r.permissions = field<std::vector<std::string>>(rec, "permissions", i);
    r.min_api = rec.contains("min_api") ? field<int>(rec, "min_api", i) : 1;
    try {
      r.method = MethodRef::parse_method_path(r.descriptor);
    } catch (const Error&) {
      throw Error(kModule, "rule " + std::to_string(i) + ": bad descriptor " + r.descriptor);
    }
    if (r.method.method_path() != r.descriptor) {
      throw Error(kModule, "rule " + std::to_string(i) + ": descriptor is not canonical: " + r.descriptor);
    }
    if (r.permissions.empty()) throw Error(kModule, "rule " + r.descriptor + " lists no permissions");
    if (r.min_api < 1) throw Error(kModule, "rule " + r.descriptor + " has min_api below 1");
    std::sort(r.permissions.begin(), r.permissions.end());
    r.permissions.erase(std::unique(r.permissions.begin(), r.permissions.end()), r.permissions.end());
    if (!m.index_.emplace(r.method, m.rules_.size()).second) {
      throw Error(kModule, "duplicate rule " + r.descriptor);
    }
    m.rules_.push_back(std::move(r));
    ++i;
  }
  return m;
}

ApiPermissionMap ApiPermissionMap::load(const std::filesystem::path& path) {
  return from_json(read_json_file(path, kModule));
}

const ApiRule* ApiPermissionMap::match(const MethodRef& m) const {
  const auto it = index_.find(m);
  return it == index_.end() ? nullptr : &rules_[it->second];
}

void ApiPermissionMap::check_against(const PermissionCatalog& catalog) const {
  for (const auto& r : rules_) {
    for (const auto& p : r.permissions) {
      if (catalog.find(p) == nullptr) {
        throw Error(kModule, "rule " + r.descriptor + " names " + p + ", which is not in the permission catalog");
      }
    }
  }
}

WidgetApiTable WidgetApiTable::from_json(const nlohmann::json& j) {
  WidgetApiTable t;
  std::size_t i = 0;
  for (const auto& rec : records(j, "widgets")) {
    const auto cls = field<std::string>(rec, "class", i);
    const auto level = field<int>(rec, "introduced_level", i);
    if (level < 1) throw Error(kModule, "widget " + cls + " has introduced_level below 1");
    if (!t.levels_.emplace(cls, level).second) throw Error(kModule, "duplicate widget " + cls);
    ++i;
  }
  return t;
}

WidgetApiTable WidgetApiTable::load(const std::filesystem::path& path) {
  return from_json(read_json_file(path, kModule));
}

std::optional<int> WidgetApiTable::find(const std::string& widget_class) const {
  const auto it = levels_.find(widget_class);
  if (it == levels_.end()) return std::nullopt;
  return it->second;
}

std::vector<PermissionFinding> map_apis(const std::set<MethodRef>& reachable, const ApiPermissionMap& map,
                                        const PermissionCatalog& catalog) {
  std::vector<PermissionFinding> out;
  for (const auto& m : reachable) {
    const auto* rule = map.match(m);
    if (rule == nullptr) continue;
    for (const auto& p : rule->permissions) {
      PermissionFinding f;
      f.permission = p;
      const auto* info = catalog.find(p);
      f.data_type = info != nullptr && info->dangerous() ? *info->data_type : std::string(kNoDataType);
      f.method_path = rule->descriptor;
      f.min_api_level = rule->min_api;
      out.push_back(std::move(f));
    }
  }
  auto key = [](const PermissionFinding& f) { return std::tie(f.data_type, f.permission, f.method_path); };
  std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const auto& a, const auto& b) {
                          return a.permission == b.permission && a.method_path == b.method_path;
                        }),
            out.end());
  return out;
}

bool is_data_finding(const PermissionFinding& f) { return is_data_type(f.data_type); }

int widget_min_api(const std::string& widget_type, const WidgetApiTable& table, Diagnostics& diags) {
  if (const auto level = table.find(widget_type)) return *level;
  diags.info(kModule, "widget type " + widget_type + " is not in the widget API table; assuming level 1");
  return 1;
}

}  // namespace pribom::permission
