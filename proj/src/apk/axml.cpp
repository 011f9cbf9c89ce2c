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

#include "pribom/apk/axml.hpp"

#include <cstdio>
#include <cstring>
#include <map>

#include "pribom/apk/string_pool.hpp"

namespace pribom::apk {
namespace {

constexpr const char* kModule = "apk-parser";

constexpr std::uint16_t kResourceMap = 0x0180;
constexpr std::uint16_t kStartNamespace = 0x0100;
constexpr std::uint16_t kEndNamespace = 0x0101;
constexpr std::uint16_t kStartElement = 0x0102;
constexpr std::uint16_t kEndElement = 0x0103;
constexpr std::uint16_t kCdata = 0x0104;

constexpr std::uint8_t kTypeReference = 0x01;
constexpr std::uint8_t kTypeAttribute = 0x02;
constexpr std::uint8_t kTypeString = 0x03;
constexpr std::uint8_t kTypeFloat = 0x04;
constexpr std::uint8_t kTypeDynamicReference = 0x07;
constexpr std::uint8_t kTypeBoolean = 0x12;

struct KnownAttribute {
  std::uint32_t id;
  std::string_view name;
};

constexpr KnownAttribute kFrameworkAttributes[] = {
    {0x01010001, "label"},          {0x01010002, "icon"},
    {0x01010003, "name"},           {0x010100d0, "id"},
    {0x010100d4, "background"},     {0x010100f4, "layout_width"},
    {0x010100f5, "layout_height"},  {0x01010119, "src"},
    {0x0101014f, "text"},           {0x0101016d, "drawableTop"},
    {0x0101016e, "drawableBottom"}, {0x0101016f, "drawableLeft"},
    {0x01010170, "drawableRight"},  {0x010101e1, "title"},
    {0x0101020c, "minSdkVersion"},  {0x0101021b, "versionCode"},
    {0x0101021c, "versionName"},    {0x0101026f, "onClick"},
    {0x01010270, "targetSdkVersion"}, {0x01010392, "drawableStart"},
    {0x01010393, "drawableEnd"},
};

XmlValue decode_value(ByteReader& r, std::uint32_t raw_index, const StringPool& pool) {
  const auto start = r.pos();
  const auto size = r.u16();
  if (size < 8) r.fail(ParseError::Kind::malformed, start, "typed value size below 8");
  r.u8();
  XmlValue v;
  v.raw_type = r.u8();
  const auto data = r.u32();
  switch (v.raw_type) {
    case kTypeString:
      v.kind = ValueKind::string;
      v.string = pool.at(data);
      break;
    case kTypeReference:
    case kTypeAttribute:
    case kTypeDynamicReference:
      v.kind = ValueKind::reference;
      v.integer = data;
      break;
    case kTypeFloat: {
      v.kind = ValueKind::floating;
      std::memcpy(&v.floating, &data, sizeof v.floating);
      break;
    }
    case kTypeBoolean:
      v.kind = ValueKind::boolean;
      v.integer = data != 0 ? 1 : 0;
      break;
    case 0x00:
      // TYPE_NULL: fall back to the raw string when present.
      v.kind = ValueKind::string;
      v.string = pool.get_or_empty(raw_index);
      break;
    default:
      v.kind = ValueKind::integer;
      v.integer = static_cast<std::int32_t>(data);
      break;
  }
  return v;
}

}  // namespace

std::string XmlValue::to_string() const {
  char buf[32];
  switch (kind) {
    case ValueKind::string:
      return string;
    case ValueKind::reference:
      std::snprintf(buf, sizeof buf, "@0x%08x", reference());
      return buf;
    case ValueKind::boolean:
      return integer ? "true" : "false";
    case ValueKind::floating:
      std::snprintf(buf, sizeof buf, "%g", static_cast<double>(floating));
      return buf;
    case ValueKind::integer:
      return std::to_string(integer);
  }
  return {};
}

std::string XmlAttribute::qualified_name() const {
  if (!prefix.empty()) return prefix + ":" + name;
  return name;
}

const XmlAttribute* XmlElement::attribute(std::string_view local, std::string_view ns_uri) const {
  for (const auto& a : attributes) {
    if (a.name == local && a.ns == ns_uri) return &a;
  }
  return nullptr;
}

const XmlAttribute* XmlElement::attribute_qualified(std::string_view qualified) const {
  for (const auto& a : attributes) {
    if (a.qualified_name() == qualified) return &a;
  }
  return nullptr;
}

std::optional<std::string_view> framework_attribute_name(std::uint32_t resource_id) {
  for (const auto& k : kFrameworkAttributes) {
    if (k.id == resource_id) return k.name;
  }
  return std::nullopt;
}

BinaryXmlDocument decode_binary_xml(Bytes data) {
  ByteReader top(data, kModule);
  if (data.size() < 2 || (data[0] | (data[1] << 8)) != kChunkXml) {
    top.fail(ParseError::Kind::bad_magic, 0, "not a binary XML document");
  }
  const auto doc_header = read_chunk_header(top);
  ByteReader doc = top.sub(0, doc_header.size);
  doc.seek(doc_header.header_size);

  std::optional<StringPool> pool;
  std::vector<std::uint32_t> resource_map;
  std::map<std::string, std::vector<std::string>> prefixes;  // uri -> prefix stack
  std::vector<XmlElement> stack;
  std::optional<XmlElement> root;

  const auto need_pool = [&](std::size_t at) -> const StringPool& {
    if (!pool) doc.fail(ParseError::Kind::malformed, at, "node before string pool");
    return *pool;
  };

  while (doc.remaining() > 0) {
    const auto chunk_start = doc.pos();
    const auto h = read_chunk_header(doc);
    ByteReader chunk = doc.sub(chunk_start, h.size);
    doc.seek(chunk_start + h.size);

    switch (h.type) {
      case kChunkStringPool:
        pool = StringPool::parse(chunk);
        break;
      case kResourceMap: {
        chunk.seek(h.header_size);
        resource_map.clear();
        while (chunk.remaining() >= 4) resource_map.push_back(chunk.u32());
        break;
      }
      case kStartNamespace:
      case kEndNamespace: {
        const auto& sp = need_pool(chunk_start);
        chunk.seek(h.header_size);
        const auto prefix = sp.get_or_empty(chunk.u32());
        const auto uri = sp.get_or_empty(chunk.u32());
        auto& st = prefixes[uri];
        if (h.type == kStartNamespace) {
          st.push_back(prefix);
        } else if (!st.empty()) {
          st.pop_back();
        }
        break;
      }
      case kStartElement: {
        const auto& sp = need_pool(chunk_start);
        if (h.header_size < 16) chunk.fail(ParseError::Kind::malformed, 2, "node header too small");
        chunk.seek(8);
        XmlElement e;
        e.line = chunk.u32();
        chunk.seek(h.header_size);
        const auto ext = chunk.pos();
        e.ns = sp.get_or_empty(chunk.u32());
        e.name = sp.at(chunk.u32());
        const auto attr_start = chunk.u16();
        const auto attr_size = chunk.u16();
        e.declared_attribute_count = chunk.u16();
        if (attr_size < 20) {
          chunk.fail(ParseError::Kind::malformed, ext + 10, "attribute record smaller than 20 bytes");
        }
        chunk.seek(ext + attr_start);
        if (static_cast<std::size_t>(e.declared_attribute_count) * attr_size > chunk.remaining()) {
          chunk.fail(ParseError::Kind::truncated, ext + 12,
                     "declared attribute count exceeds element chunk");
        }
        for (std::uint16_t i = 0; i < e.declared_attribute_count; ++i) {
          const auto rec = chunk.pos();
          XmlAttribute a;
          a.ns = sp.get_or_empty(chunk.u32());
          const auto name_index = chunk.u32();
          a.name = sp.at(name_index);
          if (name_index < resource_map.size()) a.resource_id = resource_map[name_index];
          if (a.name.empty() && a.resource_id != 0) {
            if (auto n = framework_attribute_name(a.resource_id)) a.name = std::string(*n);
          }
          const auto raw = chunk.u32();
          a.value = decode_value(chunk, raw, sp);
          if (const auto it = prefixes.find(a.ns); it != prefixes.end() && !it->second.empty()) {
            a.prefix = it->second.back();
          }
          e.attributes.push_back(std::move(a));
          chunk.seek(rec + attr_size);
        }
        if (e.attributes.size() != e.declared_attribute_count) {
          chunk.fail(ParseError::Kind::malformed, ext + 12, "attribute count mismatch");
        }
        stack.push_back(std::move(e));
        break;
      }
      case kEndElement: {
        if (stack.empty()) doc.fail(ParseError::Kind::malformed, chunk_start, "unbalanced end element");
        XmlElement done = std::move(stack.back());
        stack.pop_back();
        if (!stack.empty()) {
          stack.back().children.push_back(std::move(done));
        } else if (root) {
          doc.fail(ParseError::Kind::malformed, chunk_start, "multiple root elements");
        } else {
          root = std::move(done);
        }
        break;
      }
      case kCdata:
      default:
        break;
    }
  }
  if (!stack.empty()) doc.fail(ParseError::Kind::truncated, doc.pos(), "unclosed element");
  if (!root) doc.fail(ParseError::Kind::malformed, doc.pos(), "document has no root element");
  return BinaryXmlDocument{std::move(*root)};
}

}  // namespace pribom::apk
