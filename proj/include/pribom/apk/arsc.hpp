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

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "pribom/apk/byte_reader.hpp"

namespace pribom::apk {

struct ResourceName {
  std::string type;
  std::string name;

  auto operator<=>(const ResourceName&) const = default;
  bool operator==(const ResourceName&) const = default;
};

struct ResourceIdParts {
  std::uint8_t package = 0;
  std::uint8_t type = 0;
  std::uint16_t entry = 0;

  auto operator<=>(const ResourceIdParts&) const = default;
  bool operator==(const ResourceIdParts&) const = default;
};

// 0xPPTTEEEE.
constexpr ResourceIdParts resolve_resource_id(std::uint32_t id) {
  return {static_cast<std::uint8_t>(id >> 24), static_cast<std::uint8_t>((id >> 16) & 0xff),
          static_cast<std::uint16_t>(id & 0xffff)};
}

constexpr std::uint32_t compose_resource_id(ResourceIdParts p) {
  return (static_cast<std::uint32_t>(p.package) << 24) |
         (static_cast<std::uint32_t>(p.type) << 16) | p.entry;
}

class ResourceTable {
 public:
  std::uint8_t package_id() const noexcept { return package_id_; }
  const std::string& package_name() const noexcept { return package_name_; }
  const std::map<std::uint32_t, ResourceName>& entries() const noexcept { return entries_; }

  // Absent for undefined ids.
  std::optional<ResourceName> lookup(std::uint32_t id) const;
  std::optional<std::uint32_t> lookup(const std::string& type, const std::string& name) const;

  // File path of a file-backed resource (drawable, layout, menu), taken from
  // the first configuration that defines one.
  std::optional<std::string> file_path(std::uint32_t id) const;

  // Registers an entry; the first definition of an id or name wins.
  void add(std::uint32_t id, ResourceName name);
  void set_file_path(std::uint32_t id, std::string path);
  void set_package(std::uint8_t id, std::string name) {
    package_id_ = id;
    package_name_ = std::move(name);
  }

 private:
  std::uint8_t package_id_ = 0;
  std::string package_name_;
  std::map<std::uint32_t, ResourceName> entries_;
  std::map<ResourceName, std::uint32_t> reverse_;
  std::map<std::uint32_t, std::string> files_;
};

// Decodes resources.arsc. Throws ParseError on malformed input.
ResourceTable parse_resource_table(Bytes data);

}  // namespace pribom::apk
