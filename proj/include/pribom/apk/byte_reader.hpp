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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

#include "pribom/error.hpp"

namespace pribom::apk {

using Bytes = std::span<const std::uint8_t>;

// Bounds-checked little-endian cursor. Every read either succeeds or
// throws ParseError(truncated) naming the absolute offset; nothing reads
// past the span.
class ByteReader {
 public:
  ByteReader(Bytes data, std::string module, std::size_t base = 0)
      : data_(data), module_(std::move(module)), base_(base) {}

  std::size_t pos() const noexcept { return pos_; }
  std::size_t size() const noexcept { return data_.size(); }
  std::size_t remaining() const noexcept { return data_.size() - pos_; }
  std::size_t absolute(std::size_t rel) const noexcept { return base_ + rel; }
  Bytes data() const noexcept { return data_; }
  const std::string& module() const noexcept { return module_; }

  void seek(std::size_t pos) {
    if (pos > data_.size()) fail(ParseError::Kind::out_of_range, pos, "seek past end");
    pos_ = pos;
  }
  void skip(std::size_t n) {
    require(n);
    pos_ += n;
  }

  std::uint8_t u8() {
    require(1);
    return data_[pos_++];
  }
  std::uint16_t u16() {
    require(2);
    const auto v = static_cast<std::uint16_t>(data_[pos_] | (data_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }
  std::uint32_t u32() {
    require(4);
    const std::uint32_t v = static_cast<std::uint32_t>(data_[pos_]) |
                            (static_cast<std::uint32_t>(data_[pos_ + 1]) << 8) |
                            (static_cast<std::uint32_t>(data_[pos_ + 2]) << 16) |
                            (static_cast<std::uint32_t>(data_[pos_ + 3]) << 24);
    pos_ += 4;
    return v;
  }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }

  std::uint32_t uleb128() {
    std::uint32_t result = 0;
    for (int shift = 0; shift < 35; shift += 7) {
      const auto b = u8();
      result |= static_cast<std::uint32_t>(b & 0x7f) << shift;
      if (!(b & 0x80)) return result;
    }
    fail(ParseError::Kind::malformed, pos_, "uleb128 longer than 5 bytes");
  }

  Bytes bytes(std::size_t n) {
    require(n);
    auto out = data_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

  // A reader over [offset, offset + len) of this one.
  ByteReader sub(std::size_t offset, std::size_t len) const {
    if (offset > data_.size() || len > data_.size() - offset) {
      fail(ParseError::Kind::out_of_range, offset,
           "region of " + std::to_string(len) + " bytes exceeds input");
    }
    return ByteReader(data_.subspan(offset, len), module_, base_ + offset);
  }

  [[noreturn]] void fail(ParseError::Kind kind, std::size_t rel_offset,
                         const std::string& reason) const {
    throw ParseError(module_, kind, base_ + rel_offset, reason);
  }

 private:
  void require(std::size_t n) const {
    if (n > data_.size() - pos_) {
      fail(ParseError::Kind::truncated, pos_,
           "need " + std::to_string(n) + " bytes, " + std::to_string(data_.size() - pos_) +
               " available");
    }
  }

  Bytes data_;
  std::string module_;
  std::size_t base_ = 0;
  std::size_t pos_ = 0;
};

}  // namespace pribom::apk
