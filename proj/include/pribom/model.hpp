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

// The PriBOM document: a privacy inventory indexed by UI widget. Each
// entry carries four sections (widget identifier, codebase and
// permission, third-party libraries, privacy notice disclosure).

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pribom/error.hpp"
#include "pribom/method_ref.hpp"

namespace pribom {

inline constexpr int kSchemaVersion = 1;

// Data-type categories partitioning the dangerous permissions, in the
// fixed catalog order.
inline constexpr std::array<std::string_view, 10> kDataTypes = {
    "Location", "Contacts", "Calendar", "Camera",  "Microphone",
    "Phone",    "SMS",      "Storage",  "Sensors", "CallLog",
};

bool is_data_type(std::string_view name);

// Canonical event vocabulary. The UI extractor may be configured with
// extra events; pass those to validate() so it accepts them.
inline constexpr std::array<std::string_view, 8> kCanonicalEvents = {
    "click",         "long_click",      "touch",        "item_selected",
    "item_click",    "checked_change",  "text_changed", "focus_change",
};

// Sentinel widget type for ids bound only from code.
inline constexpr std::string_view kUnknownWidgetType = "unknown";

struct WidgetIdentifier {
  std::string widget_type;
  std::uint32_t widget_id = 0;
  std::optional<std::string> widget_name;
  std::vector<std::string> widget_src;

  bool operator==(const WidgetIdentifier&) const = default;
};

enum class EventOrigin { xml_attribute, programmatic, framework_callback };

std::string_view to_string(EventOrigin o);
std::optional<EventOrigin> parse_event_origin(std::string_view s);

struct EventBinding {
  std::string event;
  MethodRef handler;
  EventOrigin origin = EventOrigin::xml_attribute;

  bool operator==(const EventBinding&) const = default;
};

struct PermissionFinding {
  std::string permission;
  std::string data_type;
  std::string method_path;
  int min_api_level = 1;

  bool operator==(const PermissionFinding&) const = default;
};

struct TplRecord {
  std::string name;
  std::string version;
  std::optional<std::string> latest_version;
  std::optional<std::string> publish_date_current;  // ISO yyyy-mm-dd
  std::optional<std::string> publish_date_latest;
  double confidence = 0.0;

  bool operator==(const TplRecord&) const = default;
};

struct PolicySegment {
  std::string data_type;
  std::string text;
  int paragraph_index = 0;
  int sentence_index = 0;
  std::vector<std::string> evidence;

  bool operator==(const PolicySegment&) const = default;
};

struct LabelDeclaration {
  std::string label_name;
  std::string data_type;
  bool optional_flag = false;
  std::vector<std::string> purposes;

  bool operator==(const LabelDeclaration&) const = default;
};

struct WidgetEntry {
  WidgetIdentifier identifier;
  std::vector<EventBinding> bindings;
  std::vector<PermissionFinding> findings;
  int widget_min_api = 1;
  std::vector<TplRecord> tpls;
  std::vector<PolicySegment> policy_segments;
  std::vector<LabelDeclaration> label_declarations;

  bool operator==(const WidgetEntry&) const = default;

  // Distinct finding data types, sorted.
  std::vector<std::string> data_types() const;
};

struct PriBomDocument {
  std::string app_package;
  std::string app_version_name;
  std::int64_t app_version_code = 0;
  std::string generated_at;  // UTC, "YYYY-MM-DDTHH:MM:SSZ"
  std::string tool_version;
  std::map<std::string, std::string> analysis;  // tool metadata
  std::vector<WidgetEntry> entries;
  std::vector<std::string> data_type_catalog;
  // Every disclosure found in the notices, attached or not. Entries hold
  // copies of the ones matching their data types.
  std::vector<PolicySegment> policy_segments;
  std::vector<LabelDeclaration> label_declarations;

  bool operator==(const PriBomDocument&) const = default;

  const WidgetEntry* find(std::uint32_t widget_id) const;
  WidgetEntry* find(std::uint32_t widget_id);
  const WidgetEntry* find_by_name(std::string_view name) const;
};

// A document with the standard catalog and no entries.
PriBomDocument make_document(std::string app_package);

std::vector<std::string> default_data_type_catalog();

// Sorts every list into canonical order: entries by widget_id, findings by
// (data_type, permission, method_path), segments by (data_type, paragraph,
// sentence), and so on. encode() always emits canonical order.
PriBomDocument normalize(PriBomDocument doc);

// Human-readable violations, one per broken invariant; empty when valid.
std::vector<std::string> validate(const PriBomDocument& doc,
                                  const std::vector<std::string>& extra_events = {});

// Malformed input to decode(). Syntax errors carry the byte offset;
// schema errors carry the JSON pointer of the offending value.
class DecodeError : public Error {
 public:
  DecodeError(std::optional<std::size_t> byte_offset, std::string path,
              const std::string& reason)
      : Error("pribom-model", describe(byte_offset, path, reason)),
        byte_offset_(byte_offset),
        path_(std::move(path)) {}

  std::optional<std::size_t> byte_offset() const noexcept { return byte_offset_; }
  const std::string& path() const noexcept { return path_; }

 private:
  static std::string describe(std::optional<std::size_t> offset,
                              const std::string& path, const std::string& reason) {
    std::string out = reason;
    if (!path.empty()) out += " at " + path;
    if (offset) out += " (byte offset " + std::to_string(*offset) + ")";
    return out;
  }

  std::optional<std::size_t> byte_offset_;
  std::string path_;
};

// Canonical JSON bytes (sorted keys, two-space indent, trailing newline).
std::string encode(const PriBomDocument& doc);
PriBomDocument decode(std::string_view bytes);

// Flattened spreadsheet export; see kCsvHeader for the columns.
inline constexpr std::array<std::string_view, 16> kCsvHeader = {
    "widget_type", "widget_id",        "widget_name",   "widget_src",
    "events",      "handlers",         "widget_min_api", "permission",
    "data_type",   "method_path",      "permission_min_api", "tpl_names",
    "policy_excerpt", "label_name",    "label_optional", "label_purposes",
};
std::string export_csv(const PriBomDocument& doc);

struct MergeResult {
  PriBomDocument document;
  std::vector<std::string> warnings;
};

// Carries human-edited fields (widget_name, policy_segments,
// label_declarations) from `overlay` onto the machine-derived `base`.
// Throws pribom::Error when the packages differ.
MergeResult merge(const PriBomDocument& base, const PriBomDocument& overlay);

}  // namespace pribom
