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

#include "pribom/apk/arsc.hpp"

#include "pribom/apk/string_pool.hpp"

namespace pribom::apk {
namespace {

constexpr const char* kModule = "apk-parser";

constexpr std::uint16_t kChunkPackage = 0x0200;
constexpr std::uint16_t kChunkType = 0x0201;
constexpr std::uint16_t kChunkTypeSpec = 0x0202;

constexpr std::uint32_t kNoEntry = 0xffffffff;
constexpr std::uint16_t kNoEntry16 = 0xffff;
constexpr std::uint16_t kEntryComplex = 0x0001;
constexpr std::uint16_t kEntryCompact = 0x0008;
constexpr std::uint8_t kTypeSparse = 0x01;
constexpr std::uint8_t kTypeOffset16 = 0x02;
constexpr std::uint8_t kValueString = 0x03;

std::string read_utf16_fixed(ByteReader& r, std::size_t units) {
  std::string out;
  bool done = false;
  for (std::size_t i = 0; i < units; ++i) {
    const auto cu = r.u16();
    if (cu == 0) done = true;
    if (!done) append_utf8(out, cu);
  }
  return out;
}

struct PackageContext {
  std::uint8_t id = 0;
  std::optional<StringPool> type_strings;
  std::optional<StringPool> key_strings;
};

void parse_type_chunk(ByteReader chunk, const ChunkHeader& h, const PackageContext& pkg,
                      const StringPool& global, ResourceTable& table) {
  if (!pkg.type_strings || !pkg.key_strings) {
    chunk.fail(ParseError::Kind::malformed, 0, "type chunk before package string pools");
  }
  chunk.seek(8);
  const auto type_id = chunk.u8();
  const auto flags = chunk.u8();
  chunk.u16();
  const auto entry_count = chunk.u32();
  const auto entries_start = chunk.u32();
  if (type_id == 0) chunk.fail(ParseError::Kind::malformed, 8, "type id 0");
  const auto& type_name = pkg.type_strings->at(type_id - 1u);

  chunk.seek(h.header_size);
  const std::uint64_t slot_size = (flags & kTypeSparse) ? 4 : (flags & kTypeOffset16) ? 2 : 4;
  if (entry_count * slot_size > chunk.remaining()) {
    chunk.fail(ParseError::Kind::truncated, 12, "entry count exceeds type chunk");
  }
  std::vector<std::pair<std::uint32_t, std::uint32_t>> slots;  // entry index, offset
  slots.reserve(entry_count);
  for (std::uint32_t i = 0; i < entry_count; ++i) {
    if (flags & kTypeSparse) {
      const auto idx = chunk.u16();
      const auto off = chunk.u16();
      slots.emplace_back(idx, static_cast<std::uint32_t>(off) * 4u);
    } else if (flags & kTypeOffset16) {
      const auto off = chunk.u16();
      if (off != kNoEntry16) slots.emplace_back(i, static_cast<std::uint32_t>(off) * 4u);
    } else {
      const auto off = chunk.u32();
      if (off != kNoEntry) slots.emplace_back(i, off);
    }
  }

  for (const auto& [index, off] : slots) {
    chunk.seek(static_cast<std::size_t>(entries_start) + off);
    const auto entry_pos = chunk.pos();
    const auto size = chunk.u16();
    const auto eflags = chunk.u16();
    std::uint32_t key = 0;
    std::optional<std::pair<std::uint8_t, std::uint32_t>> value;
    if (eflags & kEntryCompact) {
      // Compact entries carry the key in `size` and the value data inline.
      key = size;
      value.emplace(static_cast<std::uint8_t>(eflags >> 8), chunk.u32());
    } else {
      key = chunk.u32();
      if (!(eflags & kEntryComplex)) {
        chunk.seek(entry_pos + size);
        chunk.u16();
        chunk.u8();
        const auto dt = chunk.u8();
        value.emplace(dt, chunk.u32());
      }
    }
    const std::uint32_t id = (static_cast<std::uint32_t>(pkg.id) << 24) |
                             (static_cast<std::uint32_t>(type_id) << 16) | (index & 0xffff);
    table.add(id, ResourceName{type_name, pkg.key_strings->at(key)});
    if (value && value->first == kValueString) {
      table.set_file_path(id, global.at(value->second));
    }
  }
}

void parse_package(ByteReader chunk, const ChunkHeader& h, const StringPool& global,
                   ResourceTable& table) {
  chunk.seek(8);
  PackageContext pkg;
  const auto raw_id = chunk.u32();
  if (raw_id > 0xff) chunk.fail(ParseError::Kind::malformed, 8, "package id exceeds one byte");
  pkg.id = static_cast<std::uint8_t>(raw_id);
  auto name = read_utf16_fixed(chunk, 128);
  const auto type_strings_off = chunk.u32();
  chunk.u32();
  const auto key_strings_off = chunk.u32();
  if (table.package_name().empty()) table.set_package(pkg.id, std::move(name));

  if (type_strings_off != 0) pkg.type_strings = StringPool::parse(chunk.sub(type_strings_off, chunk.size() - type_strings_off));
  if (key_strings_off != 0) pkg.key_strings = StringPool::parse(chunk.sub(key_strings_off, chunk.size() - key_strings_off));

  chunk.seek(h.header_size);
  while (chunk.remaining() > 0) {
    const auto start = chunk.pos();
    const auto ch = read_chunk_header(chunk);
    ByteReader sub = chunk.sub(start, ch.size);
    chunk.seek(start + ch.size);
    if (ch.type == kChunkType) {
      parse_type_chunk(sub, ch, pkg, global, table);
    } else if (ch.type == kChunkTypeSpec || ch.type == kChunkStringPool) {
      // Spec flags and the package pools (already read by offset) carry nothing else we need.
    }
  }
}

}  // namespace

std::optional<ResourceName> ResourceTable::lookup(std::uint32_t id) const {
  const auto it = entries_.find(id);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint32_t> ResourceTable::lookup(const std::string& type,
                                                   const std::string& name) const {
  const auto it = reverse_.find(ResourceName{type, name});
  if (it == reverse_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> ResourceTable::file_path(std::uint32_t id) const {
  const auto it = files_.find(id);
  if (it == files_.end()) return std::nullopt;
  return it->second;
}

void ResourceTable::add(std::uint32_t id, ResourceName name) {
  if (entries_.count(id) || reverse_.count(name)) return;
  reverse_.emplace(name, id);
  entries_.emplace(id, std::move(name));
}

void ResourceTable::set_file_path(std::uint32_t id, std::string path) {
  files_.emplace(id, std::move(path));
}

ResourceTable parse_resource_table(Bytes data) {
  ByteReader top(data, kModule);
  if (data.size() < 2 || (data[0] | (data[1] << 8)) != kChunkTable) {
    top.fail(ParseError::Kind::bad_magic, 0, "not a resource table");
  }
  const auto h = read_chunk_header(top);
  ByteReader table_chunk = top.sub(0, h.size);
  table_chunk.seek(h.header_size);

  ResourceTable table;
  std::optional<StringPool> global;
  while (table_chunk.remaining() > 0) {
    const auto start = table_chunk.pos();
    const auto ch = read_chunk_header(table_chunk);
    ByteReader sub = table_chunk.sub(start, ch.size);
    table_chunk.seek(start + ch.size);
    if (ch.type == kChunkStringPool) {
      if (!global) global = StringPool::parse(sub);
    } else if (ch.type == kChunkPackage) {
      if (!global) table_chunk.fail(ParseError::Kind::malformed, start, "package before global string pool");
      parse_package(sub, ch, *global, table);
    }
  }
  return table;
}

}  // namespace pribom::apk
