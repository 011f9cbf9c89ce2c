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

#include "pribom/apk/archive.hpp"

#include <zlib.h>

#include <algorithm>
#include <fstream>
#include <iterator>
#include <regex>

#include "pribom/apk/byte_reader.hpp"

namespace pribom::apk {
namespace {

constexpr std::uint32_t kEocdSignature = 0x06054b50;
constexpr std::uint32_t kCentralSignature = 0x02014b50;
constexpr std::uint32_t kLocalSignature = 0x04034b50;
constexpr std::size_t kEocdSize = 22;
constexpr std::uint32_t kMaxMemberSize = 512u << 20;

std::size_t find_eocd(Bytes data) {
  if (data.size() < kEocdSize) {
    throw ApkError(ApkError::Kind::not_a_zip, "not a zip archive: file too short");
  }
  const std::size_t lowest = data.size() > kEocdSize + 0xffff ? data.size() - kEocdSize - 0xffff : 0;
  for (std::size_t pos = data.size() - kEocdSize + 1; pos-- > lowest;) {
    if (data[pos] == 0x50 && data[pos + 1] == 0x4b && data[pos + 2] == 0x05 &&
        data[pos + 3] == 0x06) {
      return pos;
    }
  }
  throw ApkError(ApkError::Kind::not_a_zip, "not a zip archive: no end-of-central-directory");
}

std::vector<std::uint8_t> inflate_raw(Bytes in, std::uint32_t expected_size,
                                      const std::string& name) {
  std::vector<std::uint8_t> out(expected_size);
  z_stream zs{};
  if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) {
    throw ApkError(ApkError::Kind::corrupt_entry, "zlib init failed for " + name);
  }
  zs.next_in = const_cast<Bytef*>(in.data());
  zs.avail_in = static_cast<uInt>(in.size());
  zs.next_out = out.data();
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = inflate(&zs, Z_FINISH);
  const auto produced = zs.total_out;
  inflateEnd(&zs);
  if (rc != Z_STREAM_END || produced != expected_size) {
    throw ApkError(ApkError::Kind::corrupt_entry, "corrupt deflate stream in " + name);
  }
  return out;
}

}  // namespace

ApkArchive ApkArchive::open(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ApkError(ApkError::Kind::io, "cannot open '" + path.string() + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return from_bytes(std::move(bytes), path);
}

ApkArchive ApkArchive::from_bytes(std::vector<std::uint8_t> bytes, std::filesystem::path path) {
  ApkArchive archive;
  archive.path_ = std::move(path);
  archive.bytes_ = std::make_shared<const std::vector<std::uint8_t>>(std::move(bytes));
  const Bytes data(*archive.bytes_);

  const auto eocd_pos = find_eocd(data);
  ByteReader eocd(data, "apk-parser");
  eocd.seek(eocd_pos + 4);
  eocd.skip(4);  // disk numbers
  eocd.u16();
  const auto total = eocd.u16();
  const auto cd_size = eocd.u32();
  const auto cd_offset = eocd.u32();
  if (cd_offset == 0xffffffff) {
    throw ApkError(ApkError::Kind::not_a_zip, "zip64 archives are not supported");
  }

  try {
    ByteReader cd = eocd.sub(cd_offset, cd_size);
    for (std::uint16_t i = 0; i < total; ++i) {
      if (cd.u32() != kCentralSignature) {
        cd.fail(ParseError::Kind::malformed, cd.pos() - 4, "bad central directory signature");
      }
      cd.skip(6);  // versions, flags
      ZipEntry entry;
      entry.method = cd.u16();
      cd.skip(4);  // time, date
      entry.crc32 = cd.u32();
      entry.compressed_size = cd.u32();
      entry.uncompressed_size = cd.u32();
      const auto name_len = cd.u16();
      const auto extra_len = cd.u16();
      const auto comment_len = cd.u16();
      cd.skip(8);  // disk, attributes
      entry.local_header_offset = cd.u32();
      const auto name = cd.bytes(name_len);
      cd.skip(extra_len + comment_len);
      archive.entries_.emplace(std::string(name.begin(), name.end()), entry);
    }
  } catch (const ParseError& e) {
    throw ApkError(ApkError::Kind::not_a_zip,
                   std::string("not a zip archive: corrupt central directory: ") + e.what());
  }

  if (!archive.contains("AndroidManifest.xml")) {
    throw ApkError(ApkError::Kind::missing_manifest, "archive has no AndroidManifest.xml");
  }
  if (archive.dex_members().empty()) {
    throw ApkError(ApkError::Kind::missing_dex, "archive has no classes*.dex");
  }
  return archive;
}

std::vector<std::uint8_t> ApkArchive::read(const std::string& name) const {
  const auto it = entries_.find(name);
  if (it == entries_.end()) {
    throw ApkError(ApkError::Kind::corrupt_entry, "no member named '" + name + "'");
  }
  const auto& entry = it->second;
  if (entry.uncompressed_size > kMaxMemberSize) {
    throw ApkError(ApkError::Kind::corrupt_entry, "member too large: " + name);
  }
  std::vector<std::uint8_t> out;
  try {
    ByteReader r(Bytes(*bytes_), "apk-parser");
    r.seek(entry.local_header_offset);
    if (r.u32() != kLocalSignature) {
      r.fail(ParseError::Kind::malformed, entry.local_header_offset,
             "bad local header signature for " + name);
    }
    r.skip(22);
    const auto name_len = r.u16();
    const auto extra_len = r.u16();
    r.skip(name_len + extra_len);
    const auto payload = r.bytes(entry.compressed_size);
    if (entry.method == 0) {
      if (entry.compressed_size != entry.uncompressed_size) {
        throw ApkError(ApkError::Kind::corrupt_entry, "stored size mismatch in " + name);
      }
      out.assign(payload.begin(), payload.end());
    } else if (entry.method == 8) {
      out = inflate_raw(payload, entry.uncompressed_size, name);
    } else {
      throw ApkError(ApkError::Kind::corrupt_entry,
                     "unsupported compression method " + std::to_string(entry.method) +
                         " for " + name);
    }
  } catch (const ParseError& e) {
    throw ApkError(ApkError::Kind::corrupt_entry, e.what());
  }
  const auto crc = ::crc32(0L, out.data(), static_cast<uInt>(out.size()));
  if (crc != entry.crc32) {
    throw ApkError(ApkError::Kind::corrupt_entry, "CRC mismatch in " + name);
  }
  return out;
}

std::vector<std::string> ApkArchive::names_with_prefix(const std::string& prefix) const {
  std::vector<std::string> out;
  for (auto it = entries_.lower_bound(prefix); it != entries_.end(); ++it) {
    if (it->first.compare(0, prefix.size(), prefix) != 0) break;
    out.push_back(it->first);
  }
  return out;
}

std::vector<std::string> ApkArchive::dex_members() const {
  static const std::regex dex_re(R"(^classes(\d*)\.dex$)");
  std::vector<std::pair<int, std::string>> found;
  for (const auto& [name, _] : entries_) {
    std::smatch m;
    if (std::regex_match(name, m, dex_re)) {
      found.emplace_back(m[1].length() ? std::stoi(m[1]) : 1, name);
    }
  }
  std::sort(found.begin(), found.end());
  std::vector<std::string> out;
  for (auto& [_, name] : found) out.push_back(std::move(name));
  return out;
}

}  // namespace pribom::apk
