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

#include "pribom/model.hpp"

#include <algorithm>
#include <regex>
#include <set>
#include <sstream>
#include <tuple>

#include "pribom/model_json.hpp"

namespace pribom {

using nlohmann::json;

bool is_data_type(std::string_view name) {
  return std::find(kDataTypes.begin(), kDataTypes.end(), name) != kDataTypes.end();
}

std::string_view to_string(EventOrigin o) {
  switch (o) {
    case EventOrigin::xml_attribute:
      return "xml_attribute";
    case EventOrigin::programmatic:
      return "programmatic";
    case EventOrigin::framework_callback:
      return "framework_callback";
  }
  return "xml_attribute";
}

std::optional<EventOrigin> parse_event_origin(std::string_view s) {
  for (auto o : {EventOrigin::xml_attribute, EventOrigin::programmatic,
                 EventOrigin::framework_callback}) {
    if (to_string(o) == s) return o;
  }
  return std::nullopt;
}

std::vector<std::string> WidgetEntry::data_types() const {
  std::set<std::string> types;
  for (const auto& f : findings) types.insert(f.data_type);
  return {types.begin(), types.end()};
}

const WidgetEntry* PriBomDocument::find(std::uint32_t widget_id) const {
  for (const auto& e : entries) {
    if (e.identifier.widget_id == widget_id) return &e;
  }
  return nullptr;
}

WidgetEntry* PriBomDocument::find(std::uint32_t widget_id) {
  for (auto& e : entries) {
    if (e.identifier.widget_id == widget_id) return &e;
  }
  return nullptr;
}

const WidgetEntry* PriBomDocument::find_by_name(std::string_view name) const {
  for (const auto& e : entries) {
    if (e.identifier.widget_name && *e.identifier.widget_name == name) return &e;
  }
  return nullptr;
}

std::vector<std::string> default_data_type_catalog() {
  return {kDataTypes.begin(), kDataTypes.end()};
}

PriBomDocument make_document(std::string app_package) {
  PriBomDocument doc;
  doc.app_package = std::move(app_package);
  doc.tool_version = "0.1.0";
  doc.generated_at = "1970-01-01T00:00:00Z";
  doc.data_type_catalog = default_data_type_catalog();
  return doc;
}

// ---------------------------------------------------------------------------
// Canonical order

namespace {

auto binding_key(const EventBinding& b) {
  return std::make_tuple(b.event, b.handler.render(), static_cast<int>(b.origin));
}

void sort_segments(std::vector<PolicySegment>& v) {
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
    return std::tie(a.data_type, a.paragraph_index, a.sentence_index, a.text) <
           std::tie(b.data_type, b.paragraph_index, b.sentence_index, b.text);
  });
}

void sort_labels(std::vector<LabelDeclaration>& v) {
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
    return std::tie(a.data_type, a.label_name) < std::tie(b.data_type, b.label_name);
  });
}

}  // namespace

PriBomDocument normalize(PriBomDocument doc) {
  std::sort(doc.entries.begin(), doc.entries.end(), [](const auto& a, const auto& b) {
    return a.identifier.widget_id < b.identifier.widget_id;
  });
  for (auto& e : doc.entries) {
    std::sort(e.bindings.begin(), e.bindings.end(),
              [](const auto& a, const auto& b) { return binding_key(a) < binding_key(b); });
    std::sort(e.findings.begin(), e.findings.end(), [](const auto& a, const auto& b) {
      return std::tie(a.data_type, a.permission, a.method_path, a.min_api_level) <
             std::tie(b.data_type, b.permission, b.method_path, b.min_api_level);
    });
    std::sort(e.tpls.begin(), e.tpls.end(), [](const auto& a, const auto& b) {
      return std::tie(a.name, a.version) < std::tie(b.name, b.version);
    });
    sort_segments(e.policy_segments);
    sort_labels(e.label_declarations);
  }
  sort_segments(doc.policy_segments);
  sort_labels(doc.label_declarations);
  return doc;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

const std::regex& package_re() {
  static const std::regex re(R"(^[A-Za-z][A-Za-z0-9_]*(\.[A-Za-z][A-Za-z0-9_]*)+$)");
  return re;
}

const std::regex& semver_re() {
  static const std::regex re(
      R"(^(0|[1-9]\d*)\.(0|[1-9]\d*)\.(0|[1-9]\d*)(-[0-9A-Za-z.-]+)?(\+[0-9A-Za-z.-]+)?$)");
  return re;
}

const std::regex& timestamp_re() {
  static const std::regex re(R"(^\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}Z$)");
  return re;
}

const std::regex& date_re() {
  static const std::regex re(R"(^\d{4}-\d{2}-\d{2}$)");
  return re;
}

class Violations {
 public:
  void doc(const std::string& msg) { out_.push_back("document: " + msg); }
  void entry(std::uint32_t id, const std::string& msg) {
    out_.push_back("entry " + std::to_string(id) + ": " + msg);
  }
  std::vector<std::string> take() { return std::move(out_); }

 private:
  std::vector<std::string> out_;
};

bool method_path_ok(const std::string& path) {
  try {
    return MethodRef::parse_method_path(path).method_path() == path;
  } catch (const Error&) {
    return false;
  }
}

bool handler_ok(const MethodRef& ref) {
  if (ref.class_name.empty() || ref.method_name.empty()) return false;
  if (!descriptor::is_valid(ref.return_descriptor)) return false;
  for (const auto& p : ref.param_descriptors) {
    if (!descriptor::is_valid(p) || p == "V") return false;
  }
  try {
    return MethodRef::parse(ref.render()) == ref;
  } catch (const Error&) {
    return false;
  }
}

void check_segment(Violations& v, std::uint32_t id, bool in_entry, std::size_t i,
                   const PolicySegment& s, const std::set<std::string>& catalog) {
  const std::string where = "policy_segments[" + std::to_string(i) + "]";
  auto report = [&](const std::string& msg) {
    if (in_entry) v.entry(id, where + " " + msg);
    else v.doc(where + " " + msg);
  };
  if (!catalog.count(s.data_type)) report("data_type '" + s.data_type + "' not in catalog");
  if (s.text.empty()) report("empty text");
  if (s.evidence.empty()) report("empty evidence");
  if (s.paragraph_index < 0 || s.sentence_index < 0) report("negative index");
}

void check_label(Violations& v, std::uint32_t id, bool in_entry, std::size_t i,
                 const LabelDeclaration& d, const std::set<std::string>& catalog) {
  const std::string where = "label_declarations[" + std::to_string(i) + "]";
  auto report = [&](const std::string& msg) {
    if (in_entry) v.entry(id, where + " " + msg);
    else v.doc(where + " " + msg);
  };
  if (d.label_name.empty()) report("empty label_name");
  if (!catalog.count(d.data_type)) report("data_type '" + d.data_type + "' not in catalog");
  if (d.purposes.empty()) report("no purposes declared");
}

}  // namespace

std::vector<std::string> validate(const PriBomDocument& doc,
                                  const std::vector<std::string>& extra_events) {
  Violations v;
  if (!std::regex_match(doc.app_package, package_re())) {
    v.doc("app_package '" + doc.app_package + "' is not a reverse-domain name");
  }
  if (!std::regex_match(doc.tool_version, semver_re())) {
    v.doc("tool_version '" + doc.tool_version + "' is not semver");
  }
  if (!std::regex_match(doc.generated_at, timestamp_re())) {
    v.doc("generated_at '" + doc.generated_at + "' is not a UTC timestamp");
  }
  if (doc.app_version_code < 0) v.doc("negative app_version_code");
  if (doc.data_type_catalog != default_data_type_catalog()) {
    v.doc("data_type_catalog must list the ten categories in fixed order");
  }
  const std::set<std::string> catalog(doc.data_type_catalog.begin(),
                                      doc.data_type_catalog.end());
  std::set<std::string> events(kCanonicalEvents.begin(), kCanonicalEvents.end());
  events.insert(extra_events.begin(), extra_events.end());

  std::set<std::uint32_t> seen;
  for (const auto& e : doc.entries) {
    const auto& ident = e.identifier;
    const auto id = ident.widget_id;
    if (!seen.insert(id).second) v.entry(id, "duplicate widget_id");
    if (id == 0) v.entry(id, "widget_id must be non-zero");
    if (ident.widget_type != kUnknownWidgetType &&
        (ident.widget_type.empty() || ident.widget_type.find('.') == std::string::npos)) {
      v.entry(id, "widget_type '" + ident.widget_type + "' is not fully qualified");
    }
    if (e.widget_min_api < 1) v.entry(id, "widget_min_api must be positive");

    for (std::size_t i = 0; i < e.bindings.size(); ++i) {
      const auto& b = e.bindings[i];
      const std::string where = "bindings[" + std::to_string(i) + "]";
      if (!events.count(b.event)) v.entry(id, where + " unknown event '" + b.event + "'");
      if (!handler_ok(b.handler)) v.entry(id, where + " malformed handler");
    }
    for (std::size_t i = 0; i < e.findings.size(); ++i) {
      const auto& f = e.findings[i];
      const std::string where = "findings[" + std::to_string(i) + "]";
      if (f.permission.find('.') == std::string::npos) {
        v.entry(id, where + " permission '" + f.permission + "' is not fully qualified");
      }
      if (!is_data_type(f.data_type)) {
        v.entry(id, where + " data_type '" + f.data_type + "' is not a category");
      } else if (!catalog.count(f.data_type)) {
        v.entry(id, where + " data_type '" + f.data_type + "' not in catalog");
      }
      if (!method_path_ok(f.method_path)) {
        v.entry(id, where + " malformed method_path '" + f.method_path + "'");
      }
      if (f.min_api_level < 1) v.entry(id, where + " min_api_level must be positive");
    }
    for (std::size_t i = 0; i < e.tpls.size(); ++i) {
      const auto& t = e.tpls[i];
      const std::string where = "tpls[" + std::to_string(i) + "]";
      if (t.name.empty()) v.entry(id, where + " empty name");
      if (!(t.confidence >= 0.0 && t.confidence <= 1.0)) {
        v.entry(id, where + " confidence outside [0,1]");
      }
      for (const auto* d : {&t.publish_date_current, &t.publish_date_latest}) {
        if (*d && !std::regex_match(**d, date_re())) {
          v.entry(id, where + " date '" + **d + "' is not ISO yyyy-mm-dd");
        }
      }
      if (t.latest_version && t.publish_date_current && t.publish_date_latest &&
          *t.publish_date_latest < *t.publish_date_current) {
        v.entry(id, where + " latest publish date precedes current publish date");
      }
    }
    for (std::size_t i = 0; i < e.policy_segments.size(); ++i) {
      check_segment(v, id, true, i, e.policy_segments[i], catalog);
    }
    const auto types = e.data_types();
    for (std::size_t i = 0; i < e.label_declarations.size(); ++i) {
      const auto& d = e.label_declarations[i];
      check_label(v, id, true, i, d, catalog);
      if (std::find(types.begin(), types.end(), d.data_type) == types.end()) {
        v.entry(id, "label_declarations[" + std::to_string(i) +
                        "] label without matching finding (data_type " + d.data_type + ")");
      }
    }
  }
  for (std::size_t i = 0; i < doc.policy_segments.size(); ++i) {
    check_segment(v, 0, false, i, doc.policy_segments[i], catalog);
  }
  for (std::size_t i = 0; i < doc.label_declarations.size(); ++i) {
    check_label(v, 0, false, i, doc.label_declarations[i], catalog);
  }
  return v.take();
}

// ---------------------------------------------------------------------------
// JSON

namespace {

json optional_json(const std::optional<std::string>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

void to_json(json& j, const WidgetIdentifier& v) {
  j = json{{"widget_type", v.widget_type},
           {"widget_id", v.widget_id},
           {"widget_name", optional_json(v.widget_name)},
           {"widget_src", v.widget_src}};
}

void to_json(json& j, const EventBinding& v) {
  j = json{{"event", v.event},
           {"handler", v.handler.render()},
           {"origin", std::string(to_string(v.origin))}};
}

void to_json(json& j, const PermissionFinding& v) {
  j = json{{"permission", v.permission},
           {"data_type", v.data_type},
           {"method_path", v.method_path},
           {"min_api_level", v.min_api_level}};
}

void to_json(json& j, const TplRecord& v) {
  j = json{{"name", v.name},
           {"version", v.version},
           {"latest_version", optional_json(v.latest_version)},
           {"publish_date_current", optional_json(v.publish_date_current)},
           {"publish_date_latest", optional_json(v.publish_date_latest)},
           {"confidence", v.confidence}};
}

void to_json(json& j, const PolicySegment& v) {
  j = json{{"data_type", v.data_type},
           {"text", v.text},
           {"paragraph_index", v.paragraph_index},
           {"sentence_index", v.sentence_index},
           {"evidence", v.evidence}};
}

void to_json(json& j, const LabelDeclaration& v) {
  j = json{{"label_name", v.label_name},
           {"data_type", v.data_type},
           {"optional", v.optional_flag},
           {"purposes", v.purposes}};
}

void to_json(json& j, const WidgetEntry& v) {
  j = json{{"identifier", v.identifier},
           {"codebase",
            {{"bindings", v.bindings},
             {"widget_min_api", v.widget_min_api},
             {"findings", v.findings}}},
           {"third_party_libraries", v.tpls},
           {"privacy_notice",
            {{"policy_segments", v.policy_segments},
             {"label_declarations", v.label_declarations}}}};
}

void to_json(json& j, const PriBomDocument& v) {
  j = json{{"schema_version", kSchemaVersion},
           {"app",
            {{"package", v.app_package},
             {"version_name", v.app_version_name},
             {"version_code", v.app_version_code}}},
           {"generated_at", v.generated_at},
           {"tool", {{"name", "pribom"}, {"version", v.tool_version}, {"analysis", v.analysis}}},
           {"data_type_catalog", v.data_type_catalog},
           {"entries", v.entries},
           {"privacy_notice",
            {{"policy_segments", v.policy_segments},
             {"label_declarations", v.label_declarations}}}};
}

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& reason) {
  throw DecodeError(std::nullopt, path, reason);
}

const json& member(const json& j, const std::string& path, const char* key) {
  if (!j.is_object()) schema_error(path, "expected object");
  const auto it = j.find(key);
  if (it == j.end()) schema_error(path, std::string("missing field '") + key + "'");
  return *it;
}

std::string str(const json& j, const std::string& path, const char* key) {
  const auto& v = member(j, path, key);
  if (!v.is_string()) schema_error(path + "/" + key, "expected string");
  return v.get<std::string>();
}

std::optional<std::string> opt_str(const json& j, const std::string& path,
                                   const char* key) {
  if (!j.is_object()) schema_error(path, "expected object");
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) schema_error(path + "/" + key, "expected string or null");
  return it->get<std::string>();
}

std::int64_t integer(const json& j, const std::string& path, const char* key) {
  const auto& v = member(j, path, key);
  if (!v.is_number_integer()) schema_error(path + "/" + key, "expected integer");
  return v.get<std::int64_t>();
}

int small_int(const json& j, const std::string& path, const char* key) {
  const auto v = integer(j, path, key);
  if (v < INT32_MIN || v > INT32_MAX) schema_error(path + "/" + key, "integer out of range");
  return static_cast<int>(v);
}

bool boolean(const json& j, const std::string& path, const char* key) {
  const auto& v = member(j, path, key);
  if (!v.is_boolean()) schema_error(path + "/" + key, "expected boolean");
  return v.get<bool>();
}

const json& array(const json& j, const std::string& path, const char* key) {
  const auto& v = member(j, path, key);
  if (!v.is_array()) schema_error(path + "/" + key, "expected array");
  return v;
}

std::vector<std::string> strings(const json& j, const std::string& path, const char* key) {
  const auto& a = array(j, path, key);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_string()) {
      schema_error(path + "/" + key + "/" + std::to_string(i), "expected string");
    }
    out.push_back(a[i].get<std::string>());
  }
  return out;
}

template <typename Fn>
auto list(const json& j, const std::string& path, const char* key, Fn&& fn) {
  const auto& a = array(j, path, key);
  std::vector<decltype(fn(a[0], path))> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.push_back(fn(a[i], path + "/" + key + "/" + std::to_string(i)));
  }
  return out;
}

EventBinding binding_from_json(const json& j, const std::string& path) {
  EventBinding b;
  b.event = str(j, path, "event");
  try {
    b.handler = MethodRef::parse(str(j, path, "handler"));
  } catch (const DecodeError&) {
    throw;
  } catch (const Error& e) {
    schema_error(path + "/handler", e.what());
  }
  const auto origin = parse_event_origin(str(j, path, "origin"));
  if (!origin) schema_error(path + "/origin", "unknown origin");
  b.origin = *origin;
  return b;
}

PermissionFinding finding_from_json(const json& j, const std::string& path) {
  return {str(j, path, "permission"), str(j, path, "data_type"),
          str(j, path, "method_path"), small_int(j, path, "min_api_level")};
}

TplRecord tpl_from_json(const json& j, const std::string& path) {
  TplRecord t;
  t.name = str(j, path, "name");
  t.version = str(j, path, "version");
  t.latest_version = opt_str(j, path, "latest_version");
  t.publish_date_current = opt_str(j, path, "publish_date_current");
  t.publish_date_latest = opt_str(j, path, "publish_date_latest");
  const auto& c = member(j, path, "confidence");
  if (!c.is_number()) schema_error(path + "/confidence", "expected number");
  t.confidence = c.get<double>();
  return t;
}

}  // namespace

PolicySegment policy_segment_from_json(const json& j, const std::string& path) {
  PolicySegment s;
  s.data_type = str(j, path, "data_type");
  s.text = str(j, path, "text");
  s.paragraph_index = small_int(j, path, "paragraph_index");
  s.sentence_index = small_int(j, path, "sentence_index");
  s.evidence = strings(j, path, "evidence");
  return s;
}

LabelDeclaration label_declaration_from_json(const json& j, const std::string& path) {
  LabelDeclaration d;
  d.label_name = str(j, path, "label_name");
  d.data_type = str(j, path, "data_type");
  d.optional_flag = boolean(j, path, "optional");
  d.purposes = strings(j, path, "purposes");
  return d;
}

WidgetEntry widget_entry_from_json(const json& j, const std::string& path) {
  WidgetEntry e;
  const auto ipath = path + "/identifier";
  const auto& ident = member(j, path, "identifier");
  e.identifier.widget_type = str(ident, ipath, "widget_type");
  const auto id = integer(ident, ipath, "widget_id");
  if (id < 0 || id > UINT32_MAX) schema_error(ipath + "/widget_id", "not a 32-bit unsigned id");
  e.identifier.widget_id = static_cast<std::uint32_t>(id);
  e.identifier.widget_name = opt_str(ident, ipath, "widget_name");
  e.identifier.widget_src = strings(ident, ipath, "widget_src");

  const auto cpath = path + "/codebase";
  const auto& code = member(j, path, "codebase");
  e.bindings = list(code, cpath, "bindings", binding_from_json);
  e.widget_min_api = small_int(code, cpath, "widget_min_api");
  e.findings = list(code, cpath, "findings", finding_from_json);

  e.tpls = list(j, path, "third_party_libraries", tpl_from_json);

  const auto npath = path + "/privacy_notice";
  const auto& notice = member(j, path, "privacy_notice");
  e.policy_segments = list(notice, npath, "policy_segments", policy_segment_from_json);
  e.label_declarations =
      list(notice, npath, "label_declarations", label_declaration_from_json);
  return e;
}

PriBomDocument document_from_json(const json& j) {
  const std::string root;
  const auto version = integer(j, root, "schema_version");
  if (version != kSchemaVersion) {
    schema_error("/schema_version", "unsupported schema_version " + std::to_string(version));
  }
  PriBomDocument doc;
  const auto& app = member(j, root, "app");
  doc.app_package = str(app, "/app", "package");
  doc.app_version_name = str(app, "/app", "version_name");
  doc.app_version_code = integer(app, "/app", "version_code");
  doc.generated_at = str(j, root, "generated_at");
  const auto& tool = member(j, root, "tool");
  doc.tool_version = str(tool, "/tool", "version");
  const auto& analysis = member(tool, "/tool", "analysis");
  if (!analysis.is_object()) schema_error("/tool/analysis", "expected object");
  for (const auto& [k, v] : analysis.items()) {
    if (!v.is_string()) schema_error("/tool/analysis/" + k, "expected string");
    doc.analysis[k] = v.get<std::string>();
  }
  doc.data_type_catalog = strings(j, root, "data_type_catalog");
  doc.entries = list(j, root, "entries", widget_entry_from_json);
  const auto& notice = member(j, root, "privacy_notice");
  doc.policy_segments =
      list(notice, "/privacy_notice", "policy_segments", policy_segment_from_json);
  doc.label_declarations =
      list(notice, "/privacy_notice", "label_declarations", label_declaration_from_json);
  return doc;
}

std::string encode(const PriBomDocument& doc) {
  return json(normalize(doc)).dump(2) + "\n";
}

PriBomDocument decode(std::string_view bytes) {
  json j;
  try {
    j = json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    throw DecodeError(e.byte, "", "malformed JSON: " + std::string(e.what()));
  }
  return document_from_json(j);
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string join(const std::vector<std::string>& items, std::string_view sep = "; ") {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

}  // namespace

std::string export_csv(const PriBomDocument& doc) {
  std::ostringstream out;
  auto row = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      out << csv_field(cells[i]);
    }
    out << "\r\n";
  };
  row({kCsvHeader.begin(), kCsvHeader.end()});

  for (const auto& e : normalize(doc).entries) {
    const auto& ident = e.identifier;
    std::vector<std::string> events, handlers, tpl_names;
    for (const auto& b : e.bindings) {
      events.push_back(b.event);
      handlers.push_back(b.handler.render());
    }
    for (const auto& t : e.tpls) tpl_names.push_back(t.name);
    const std::vector<std::string> widget_cells = {
        ident.widget_type,
        std::to_string(ident.widget_id),
        ident.widget_name.value_or(""),
        ident.widget_src.empty() ? "none" : join(ident.widget_src),
        join(events),
        join(handlers),
        std::to_string(e.widget_min_api),
    };

    auto types = e.data_types();
    if (types.empty()) types.emplace_back();
    for (const auto& type : types) {
      std::vector<std::string> perms, paths, levels, excerpts, labels, optional, purposes;
      for (const auto& f : e.findings) {
        if (f.data_type != type) continue;
        perms.push_back(f.permission);
        paths.push_back(f.method_path);
        levels.push_back(std::to_string(f.min_api_level));
      }
      if (!type.empty()) {
        for (const auto& s : e.policy_segments) {
          if (s.data_type == type) excerpts.push_back(s.text);
        }
        for (const auto& d : e.label_declarations) {
          if (d.data_type != type) continue;
          labels.push_back(d.label_name);
          optional.push_back(d.optional_flag ? "Yes" : "No");
          purposes.push_back(join(d.purposes));
        }
      }
      auto cells = widget_cells;
      cells.insert(cells.end(), {join(perms), type, join(paths), join(levels),
                                 join(tpl_names), join(excerpts), join(labels),
                                 join(optional), join(purposes)});
      row(cells);
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Merge

MergeResult merge(const PriBomDocument& base, const PriBomDocument& overlay) {
  if (base.app_package != overlay.app_package) {
    throw Error("pribom-model", "package mismatch: '" + base.app_package + "' vs '" +
                                    overlay.app_package + "'");
  }
  MergeResult result{base, {}};
  for (const auto& o : overlay.entries) {
    auto* e = result.document.find(o.identifier.widget_id);
    if (!e) {
      result.warnings.push_back("overlay widget " + std::to_string(o.identifier.widget_id) +
                                " not present in base; dropped");
      continue;
    }
    if (o.identifier.widget_name && !o.identifier.widget_name->empty()) {
      e->identifier.widget_name = o.identifier.widget_name;
    }
    if (!o.policy_segments.empty()) e->policy_segments = o.policy_segments;
    if (!o.label_declarations.empty()) e->label_declarations = o.label_declarations;
  }
  result.document = normalize(std::move(result.document));
  return result;
}

}  // namespace pribom
