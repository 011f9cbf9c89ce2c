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

#include "httplib.h"

#include "pribom/tpl/metadata.hpp"

#include <regex>

#include "pribom/io.hpp"

namespace pribom::tpl {
namespace {

constexpr const char* kModule = "tpl-detector";

std::optional<std::string> date_field(const nlohmann::json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  static const std::regex date_re(R"(\d{4}-\d{2}-\d{2})");
  if (!j.at(key).is_string() || !std::regex_match(j.at(key).get<std::string>(), date_re)) {
    throw Error(kModule, where + ": \"" + key + "\" is not an ISO yyyy-mm-dd date");
  }
  return j.at(key).get<std::string>();
}

}  // namespace

LibraryMetadata metadata_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(kModule, "library metadata must be an object");
  LibraryMetadata m;
  if (j.contains("latest_version") && !j.at("latest_version").is_null()) {
    if (!j.at("latest_version").is_string()) throw Error(kModule, "\"latest_version\" must be a string");
    m.latest_version = j.at("latest_version").get<std::string>();
  }
  m.publish_date_latest = date_field(j, "publish_date_latest", "metadata");
  if (j.contains("publish_date_current_versions")) {
    const auto& dates = j.at("publish_date_current_versions");
    if (!dates.is_object()) throw Error(kModule, "\"publish_date_current_versions\" must be an object");
    for (const auto& [version, _] : dates.items()) {
      if (auto d = date_field(dates, version.c_str(), "version " + version)) m.publish_dates.emplace(version, *d);
    }
  }
  return m;
}

nlohmann::json metadata_to_json(const LibraryMetadata& m) {
  nlohmann::json j = nlohmann::json::object();
  j["latest_version"] = m.latest_version ? nlohmann::json(*m.latest_version) : nlohmann::json();
  j["publish_date_latest"] = m.publish_date_latest ? nlohmann::json(*m.publish_date_latest) : nlohmann::json();
  j["publish_date_current_versions"] = m.publish_dates;
  return j;
}

TransportError::TransportError(const std::string& message) : Error(kModule, message) {}

OfflineMetadata OfflineMetadata::from_json(const nlohmann::json& j) {
  const nlohmann::json* libs = &j;
  if (j.is_object() && j.contains("libraries")) libs = &j.at("libraries");
  if (!libs->is_object()) throw Error(kModule, "offline metadata must map library names to records");
  OfflineMetadata o;
  for (const auto& [name, rec] : libs->items()) {
    try {
      o.entries_.emplace(name, metadata_from_json(rec));
    } catch (const Error& e) {
      throw Error(kModule, "library " + name + ": " + e.what());
    }
  }
  return o;
}

OfflineMetadata OfflineMetadata::load(const std::filesystem::path& path) {
  return from_json(read_json_file(path, kModule));
}

std::optional<LibraryMetadata> OfflineMetadata::lookup(const std::string& name) {
  const auto it = entries_.find(name);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

RemoteMetadata::RemoteMetadata(std::string base_url, std::filesystem::path cache_path, int timeout_seconds)
    : base_url_(std::move(base_url)), cache_path_(std::move(cache_path)), timeout_seconds_(timeout_seconds) {
  while (!base_url_.empty() && base_url_.back() == '/') base_url_.pop_back();
  if (std::filesystem::exists(cache_path_)) {
    cache_ = read_json_file(cache_path_, kModule);
    if (!cache_.is_object()) throw Error(kModule, "metadata cache " + cache_path_.string() + " is not an object");
  }
}

std::optional<LibraryMetadata> RemoteMetadata::lookup(const std::string& name) {
  std::lock_guard lock(mutex_);
  if (cache_.contains(name)) {
    const auto& hit = cache_.at(name);
    if (hit.is_null()) return std::nullopt;
    return metadata_from_json(hit);
  }
  // Split "scheme://host[:port]" from the path prefix.
  const auto scheme_end = base_url_.find("://");
  if (scheme_end == std::string::npos) throw TransportError("metadata URL lacks a scheme: " + base_url_);
  const auto path_start = base_url_.find('/', scheme_end + 3);
  const std::string origin = base_url_.substr(0, path_start);
  const std::string prefix = path_start == std::string::npos ? std::string() : base_url_.substr(path_start);

  httplib::Client client(origin);
  client.set_connection_timeout(timeout_seconds_, 0);
  client.set_read_timeout(timeout_seconds_, 0);
  const auto res = client.Get(prefix + "/" + httplib::detail::encode_url(name));
  ++fetches_;
  if (!res) {
    throw TransportError("fetching metadata for " + name + " from " + base_url_ + " failed: " +
                         httplib::to_string(res.error()));
  }
  nlohmann::json entry;
  if (res->status == 200) {
    try {
      entry = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::parse_error& e) {
      throw TransportError("metadata for " + name + " is not JSON: " + e.what());
    }
    metadata_from_json(entry);  // reject bad answers before caching them
  } else if (res->status != 404) {
    throw TransportError("metadata endpoint answered HTTP " + std::to_string(res->status) + " for " + name);
  }
  cache_[name] = entry;
  write_file_atomic(cache_path_, cache_.dump(2) + "\n");
  if (entry.is_null()) return std::nullopt;
  return metadata_from_json(entry);
}

std::vector<TplRecord> enrich(std::vector<TplRecord> records, MetadataSource& source, Diagnostics& diags) {
  for (auto& r : records) {
    const auto meta = source.lookup(r.name);
    if (!meta) {
      diags.warn(kModule, "no version metadata for library " + r.name);
      continue;
    }
    r.latest_version = meta->latest_version;
    r.publish_date_latest = meta->publish_date_latest;
    const auto it = meta->publish_dates.find(r.version);
    if (it != meta->publish_dates.end()) {
      r.publish_date_current = it->second;
    } else {
      diags.info(kModule, "no publish date for " + r.name + " version " + r.version);
    }
    if (r.publish_date_current && r.publish_date_latest && *r.publish_date_latest < *r.publish_date_current) {
      diags.warn(kModule, "metadata for " + r.name + " dates the latest version before version " + r.version +
                              "; dropping the latest date");
      r.publish_date_latest.reset();
    }
  }
  return records;
}

}  // namespace pribom::tpl
