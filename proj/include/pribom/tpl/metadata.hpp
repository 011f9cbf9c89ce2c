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

// Version and publish-date metadata for detected libraries, read from a
// bundled file or fetched from a repository endpoint and cached on disk.

#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "pribom/diagnostics.hpp"
#include "pribom/error.hpp"
#include "pribom/model.hpp"

namespace pribom::tpl {

struct LibraryMetadata {
  std::optional<std::string> latest_version;
  std::optional<std::string> publish_date_latest;       // yyyy-mm-dd
  std::map<std::string, std::string> publish_dates;     // version -> yyyy-mm-dd

  bool operator==(const LibraryMetadata&) const = default;
};

// {latest_version, publish_date_latest, publish_date_current_versions}.
// Throws pribom::Error on a malformed date.
LibraryMetadata metadata_from_json(const nlohmann::json& j);
nlohmann::json metadata_to_json(const LibraryMetadata& m);

// Raised when the remote endpoint cannot be reached or answers badly.
class TransportError : public Error {
 public:
  explicit TransportError(const std::string& message);
};

class MetadataSource {
 public:
  virtual ~MetadataSource() = default;
  // Metadata for `name`, or nullopt when the source does not know it.
  virtual std::optional<LibraryMetadata> lookup(const std::string& name) = 0;
};

// The bundled name -> metadata map.
class OfflineMetadata : public MetadataSource {
 public:
  static OfflineMetadata from_json(const nlohmann::json& j);
  static OfflineMetadata load(const std::filesystem::path& path);

  std::optional<LibraryMetadata> lookup(const std::string& name) override;
  const std::map<std::string, LibraryMetadata>& all() const noexcept { return entries_; }

 private:
  std::map<std::string, LibraryMetadata> entries_;
};

// GET <base_url>/<name>; 200 gives metadata, 404 an unknown library. Every
// answer, including 404, is stored in `cache_path`, and cached names are
// never fetched again.
class RemoteMetadata : public MetadataSource {
 public:
  RemoteMetadata(std::string base_url, std::filesystem::path cache_path, int timeout_seconds = 10);

  std::optional<LibraryMetadata> lookup(const std::string& name) override;
  std::size_t fetch_count() const noexcept { return fetches_; }

 private:
  std::string base_url_;
  std::filesystem::path cache_path_;
  int timeout_seconds_;
  std::mutex mutex_;
  nlohmann::json cache_ = nlohmann::json::object();
  std::size_t fetches_ = 0;
};

// Fills latest_version and both dates from `source`. Unknown libraries and
// versions without a date are left as they are, with a diagnostic.
std::vector<TplRecord> enrich(std::vector<TplRecord> records, MetadataSource& source, Diagnostics& diags);

}  // namespace pribom::tpl
