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
#include <string>
#include <vector>

#include "pribom/apk/byte_reader.hpp"

namespace pribom::apk {

// Resource chunk header shared by AXML and ARSC.
struct ChunkHeader {
  std::uint16_t type = 0;
  std::uint16_t header_size = 0;
  std::uint32_t size = 0;
};

inline constexpr std::uint16_t kChunkStringPool = 0x0001;
inline constexpr std::uint16_t kChunkTable = 0x0002;
inline constexpr std::uint16_t kChunkXml = 0x0003;

// Reads a chunk header at the reader's position and checks that the chunk
// fits in the remaining input. The reader is left after the 8-byte header.
ChunkHeader read_chunk_header(ByteReader& r);

// Decoded ResStringPool. Strings are stored as UTF-8 regardless of the
// on-disk encoding.
class StringPool {
 public:
  static constexpr std::uint32_t kNone = 0xffffffff;

  // `chunk` spans exactly one string-pool chunk, header included.
  static StringPool parse(ByteReader chunk);

  std::size_t size() const noexcept { return strings_.size(); }
  bool utf8() const noexcept { return utf8_; }

  // Throws ParseError(out_of_range) for indices past the pool.
  const std::string& at(std::uint32_t index) const;

  // Empty for kNone, else at().
  std::string get_or_empty(std::uint32_t index) const;

 private:
  std::vector<std::string> strings_;
  bool utf8_ = false;
  std::string module_;
  std::size_t base_ = 0;
};

// Appends the UTF-8 encoding of `cp`.
void append_utf8(std::string& out, std::uint32_t cp);

}  // namespace pribom::apk
