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
#include <stdexcept>
#include <string>

namespace pribom {

// Base for every failure raised by the library. `module()` names the
// pipeline stage that failed so the CLI can attribute errors.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& what)
      : std::runtime_error(module + ": " + what), module_(std::move(module)) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

// Structured decode failure at a byte offset within the input.
class ParseError : public Error {
 public:
  enum class Kind {
    bad_magic,
    truncated,
    out_of_range,
    unsupported_version,
    malformed,
  };

  ParseError(std::string module, Kind kind, std::size_t offset,
             const std::string& reason)
      : Error(std::move(module),
              reason + " (at byte offset " + std::to_string(offset) + ")"),
        kind_(kind),
        offset_(offset),
        reason_(reason) {}

  Kind kind() const noexcept { return kind_; }
  std::size_t offset() const noexcept { return offset_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  Kind kind_;
  std::size_t offset_;
  std::string reason_;
};

}  // namespace pribom
