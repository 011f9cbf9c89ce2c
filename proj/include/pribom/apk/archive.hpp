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

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "pribom/error.hpp"

namespace pribom::apk {

class ApkError : public Error {
 public:
  enum class Kind { io, not_a_zip, missing_manifest, missing_dex, corrupt_entry };

  ApkError(Kind kind, const std::string& what) : Error("apk-parser", what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

struct ZipEntry {
  std::uint32_t local_header_offset = 0;
  std::uint32_t compressed_size = 0;
  std::uint32_t uncompressed_size = 0;
  std::uint16_t method = 0;  // 0 stored, 8 deflate
  std::uint32_t crc32 = 0;
};

// An opened APK. The archive bytes are held in memory and shared between
// copies; member reads decompress on demand.
class ApkArchive {
 public:
  static ApkArchive open(const std::filesystem::path& path);
  static ApkArchive from_bytes(std::vector<std::uint8_t> bytes,
                               std::filesystem::path path = {});

  const std::filesystem::path& path() const noexcept { return path_; }
  const std::map<std::string, ZipEntry>& entries() const noexcept { return entries_; }
  bool contains(const std::string& name) const { return entries_.count(name) != 0; }

  // Decompressed member contents; CRC-checked.
  std::vector<std::uint8_t> read(const std::string& name) const;

  // Sorted member names starting with `prefix`.
  std::vector<std::string> names_with_prefix(const std::string& prefix) const;

  // classes.dex, classes2.dex, ... in load order.
  std::vector<std::string> dex_members() const;

 private:
  std::filesystem::path path_;
  std::shared_ptr<const std::vector<std::uint8_t>> bytes_;
  std::map<std::string, ZipEntry> entries_;
};

// Opens and checks the members every APK must carry.
inline ApkArchive open_apk(const std::filesystem::path& path) { return ApkArchive::open(path); }

}  // namespace pribom::apk
