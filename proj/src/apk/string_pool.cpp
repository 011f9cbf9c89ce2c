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

#include "pribom/apk/string_pool.hpp"

namespace pribom::apk {
namespace {

constexpr std::uint32_t kUtf8Flag = 0x100;

std::string decode_utf16(ByteReader& r) {
  std::uint32_t len = r.u16();
  if (len & 0x8000) len = ((len & 0x7fff) << 16) | r.u16();
  if (static_cast<std::uint64_t>(len) * 2 > r.remaining()) {
    r.fail(ParseError::Kind::truncated, r.pos(), "string length exceeds pool");
  }
  std::string out;
  out.reserve(len);
  for (std::uint32_t i = 0; i < len; ++i) {
    std::uint32_t cu = r.u16();
    if (cu >= 0xd800 && cu < 0xdc00 && i + 1 < len) {
      const auto save = r.pos();
      const std::uint32_t lo = r.u16();
      if (lo >= 0xdc00 && lo < 0xe000) {
        cu = 0x10000 + ((cu - 0xd800) << 10) + (lo - 0xdc00);
        ++i;
      } else {
        r.seek(save);
      }
    }
    append_utf8(out, cu);
  }
  return out;
}

std::string decode_utf8(ByteReader& r) {
  std::uint32_t chars = r.u8();
  if (chars & 0x80) chars = ((chars & 0x7f) << 8) | r.u8();
  std::uint32_t len = r.u8();
  if (len & 0x80) len = ((len & 0x7f) << 8) | r.u8();
  const auto b = r.bytes(len);
  return std::string(b.begin(), b.end());
}

}  // namespace

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else {
    out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  }
}

ChunkHeader read_chunk_header(ByteReader& r) {
  const auto start = r.pos();
  ChunkHeader h;
  h.type = r.u16();
  h.header_size = r.u16();
  h.size = r.u32();
  if (h.header_size < 8 || h.size < h.header_size) {
    r.fail(ParseError::Kind::malformed, start, "chunk header sizes inconsistent");
  }
  if (h.size > r.size() - start) {
    r.fail(ParseError::Kind::truncated, start,
           "chunk of " + std::to_string(h.size) + " bytes exceeds input");
  }
  return h;
}

StringPool StringPool::parse(ByteReader chunk) {
  StringPool pool;
  pool.module_ = chunk.module();
  pool.base_ = chunk.absolute(0);
  const auto h = read_chunk_header(chunk);
  if (h.type != kChunkStringPool) {
    chunk.fail(ParseError::Kind::malformed, 0, "expected string pool chunk");
  }
  if (h.header_size < 28) chunk.fail(ParseError::Kind::malformed, 2, "string pool header too small");
  const auto count = chunk.u32();
  chunk.u32();  // style count
  const auto flags = chunk.u32();
  const auto strings_start = chunk.u32();
  chunk.u32();  // styles start
  pool.utf8_ = (flags & kUtf8Flag) != 0;

  chunk.seek(h.header_size);
  if (count > (h.size - h.header_size) / 4) {
    chunk.fail(ParseError::Kind::malformed, 8, "string count exceeds chunk");
  }
  std::vector<std::uint32_t> offsets(count);
  for (auto& off : offsets) off = chunk.u32();

  ByteReader data = chunk.sub(0, h.size);
  pool.strings_.reserve(count);
  for (const auto off : offsets) {
    const std::size_t at = static_cast<std::size_t>(strings_start) + off;
    data.seek(at);
    pool.strings_.push_back(pool.utf8_ ? decode_utf8(data) : decode_utf16(data));
  }
  return pool;
}

const std::string& StringPool::at(std::uint32_t index) const {
  if (index >= strings_.size()) {
    throw ParseError(module_, ParseError::Kind::out_of_range, base_,
                     "string pool index " + std::to_string(index) + " out of range (pool has " +
                         std::to_string(strings_.size()) + ")");
  }
  return strings_[index];
}

std::string StringPool::get_or_empty(std::uint32_t index) const {
  return index == kNone ? std::string() : at(index);
}

}  // namespace pribom::apk
