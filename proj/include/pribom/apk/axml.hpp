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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pribom/apk/byte_reader.hpp"

namespace pribom::apk {

inline constexpr std::string_view kAndroidNs = "http://schemas.android.com/apk/res/android";
inline constexpr std::string_view kAppNs = "http://schemas.android.com/apk/res-auto";

enum class ValueKind { string, integer, boolean, reference, floating };

struct XmlValue {
  ValueKind kind = ValueKind::string;
  std::string string;       // kind == string
  std::int64_t integer = 0; // integer / boolean (0/1) / reference id
  float floating = 0.0f;
  std::uint8_t raw_type = 0;

  std::uint32_t reference() const { return static_cast<std::uint32_t>(integer); }
  // Human-readable form: strings verbatim, references as "@0x7f090037".
  std::string to_string() const;
};

struct XmlAttribute {
  std::string ns;      // namespace URI, empty when none
  std::string prefix;  // declared prefix for `ns`, e.g. "android"
  std::string name;    // local name
  std::uint32_t resource_id = 0;  // attribute resource id from the resource map
  XmlValue value;

  // "android:onClick" or the bare name when unqualified.
  std::string qualified_name() const;
};

struct XmlElement {
  std::string ns;
  std::string name;
  std::uint32_t line = 0;
  std::uint16_t declared_attribute_count = 0;
  std::vector<XmlAttribute> attributes;
  std::vector<XmlElement> children;

  // Finds an attribute by local name and namespace URI.
  const XmlAttribute* attribute(std::string_view local,
                                std::string_view ns_uri = kAndroidNs) const;
  // Finds by "prefix:name" as reported by qualified_name().
  const XmlAttribute* attribute_qualified(std::string_view qualified) const;
};

struct BinaryXmlDocument {
  XmlElement root;

  // Pre-order traversal.
  template <typename F>
  void visit(F&& fn) const {
    visit_impl(root, fn, 0);
  }

 private:
  template <typename F>
  static void visit_impl(const XmlElement& e, F& fn, int depth) {
    fn(e, depth);
    for (const auto& c : e.children) visit_impl(c, fn, depth + 1);
  }
};

// Decodes compiled Android XML. Throws ParseError on any malformed input.
BinaryXmlDocument decode_binary_xml(Bytes data);

// Framework attribute name for a resource id in the 0x0101xxxx range,
// used when the compiled name string is empty.
std::optional<std::string_view> framework_attribute_name(std::uint32_t resource_id);

}  // namespace pribom::apk
