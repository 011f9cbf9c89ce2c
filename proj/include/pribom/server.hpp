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

// The document service behind `pribom serve`: one in-memory document with
// a revision counter, read by many and edited by one at a time.

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <shared_mutex>
#include <string>

#include "json.hpp"

#include "pribom/model.hpp"

namespace pribom {

// Serialized form shared by CLI --json output and HTTP responses.
std::string to_payload(const nlohmann::json& j);

// Raised when an edit names a revision older than the current one.
class StaleRevision : public Error {
 public:
  StaleRevision(std::uint64_t expected, std::uint64_t actual);
  std::uint64_t current() const noexcept { return actual_; }

 private:
  std::uint64_t actual_;
};

class DocumentStore {
 public:
  DocumentStore(PriBomDocument doc, std::filesystem::path path);
  static DocumentStore load(const std::filesystem::path& path);

  // A copy of the document and the revision it belongs to.
  std::pair<PriBomDocument, std::uint64_t> snapshot() const;
  std::uint64_t revision() const;

  // Applies a disclosure edit ({revision, widget_name?, policy_segments?,
  // label_declarations?}) to one widget and returns the new revision.
  // Throws StaleRevision, NotFound or BadRequest.
  std::uint64_t edit_disclosure(std::string_view selector, const nlohmann::json& body);

  // Writes the document to its path atomically.
  std::filesystem::path save() const;

 private:
  mutable std::shared_mutex mutex_;
  PriBomDocument doc_;
  std::filesystem::path path_;
  std::uint64_t revision_ = 1;
};

class HttpService {
 public:
  // `web_root` holds the static UI; it may be absent.
  HttpService(DocumentStore& store, std::filesystem::path web_root);
  ~HttpService();
  HttpService(const HttpService&) = delete;
  HttpService& operator=(const HttpService&) = delete;

  // Port 0 picks a free port. Returns the bound port; throws on failure.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// "host:port" with an optional host; throws pribom::Error otherwise.
std::pair<std::string, int> parse_address(const std::string& addr);

}  // namespace pribom
