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

#include "pribom/query.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "pribom/model_json.hpp"

namespace pribom {
namespace {

using nlohmann::json;

constexpr std::string_view kChannels[] = {"policy", "label"};

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::optional<std::uint32_t> parse_id(std::string_view s) {
  if (s.empty()) return std::nullopt;
  int base = 10;
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    s.remove_prefix(2);
    base = 16;
  }
  std::uint64_t v = 0;
  for (const char c : s) {
    int d;
    if (c >= '0' && c <= '9') d = c - '0';
    else if (base == 16 && c >= 'a' && c <= 'f') d = c - 'a' + 10;
    else if (base == 16 && c >= 'A' && c <= 'F') d = c - 'A' + 10;
    else return std::nullopt;
    v = v * static_cast<std::uint64_t>(base) + static_cast<std::uint64_t>(d);
    if (v > 0xFFFFFFFFULL) return std::nullopt;
  }
  return static_cast<std::uint32_t>(v);
}

std::string hex_id(std::uint32_t id) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "0x%08x", id);
  return buf;
}

std::string join(const std::vector<std::string>& items, std::string_view sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::string str_or(const json& j, const char* key, const std::string& fallback) {
  return j.contains(key) && j.at(key).is_string() ? j.at(key).get<std::string>() : fallback;
}

json widget_summary(const WidgetEntry& e) {
  return json{{"widget_id", e.identifier.widget_id},
              {"widget_name", e.identifier.widget_name ? json(*e.identifier.widget_name) : json(nullptr)},
              {"widget_type", e.identifier.widget_type},
              {"data_types", e.data_types()}};
}

// Document-level disclosures for a set of data types, in canonical order.
json notice_for(const PriBomDocument& doc, const std::set<std::string>& types) {
  std::vector<PolicySegment> segs;
  std::vector<LabelDeclaration> decls;
  for (const auto& s : doc.policy_segments) {
    if (types.count(s.data_type)) segs.push_back(s);
  }
  for (const auto& d : doc.label_declarations) {
    if (types.count(d.data_type)) decls.push_back(d);
  }
  return json{{"policy_segments", segs}, {"label_declarations", decls}};
}

std::string render_segment(const json& s) {
  return "[" + s.at("data_type").get<std::string>() + "] \"" + s.at("text").get<std::string>() + "\"";
}

std::string render_label(const json& d) {
  std::vector<std::string> purposes = d.at("purposes").get<std::vector<std::string>>();
  return "[" + d.at("label_name").get<std::string>() + "] Optional: " + (d.at("optional").get<bool>() ? "Yes" : "No") +
         "; Purpose: " + (purposes.empty() ? std::string("none") : join(purposes)) + " (" +
         d.at("data_type").get<std::string>() + ")";
}

std::string render_tpl(const json& t) {
  char conf[16];
  std::snprintf(conf, sizeof conf, "%.2f", t.at("confidence").get<double>());
  std::string out = t.at("name").get<std::string>() + " " + t.at("version").get<std::string>() + " (confidence " +
                    conf + ")";
  std::vector<std::string> meta;
  if (!t.at("latest_version").is_null()) meta.push_back("latest " + t.at("latest_version").get<std::string>());
  if (!t.at("publish_date_current").is_null()) {
    meta.push_back("published " + t.at("publish_date_current").get<std::string>());
  }
  if (!t.at("publish_date_latest").is_null()) {
    meta.push_back("latest published " + t.at("publish_date_latest").get<std::string>());
  }
  if (!meta.empty()) out += "\n    " + join(meta);
  return out;
}

std::string render_finding(const json& f) {
  return f.at("permission").get<std::string>() + " -> " + f.at("data_type").get<std::string>() + "\n    via " +
         f.at("method_path").get<std::string>() + " (api " + std::to_string(f.at("min_api_level").get<int>()) + ")";
}

std::string render_binding(const json& b) {
  return b.at("event").get<std::string>() + " -> " + b.at("handler").get<std::string>() + " (" +
         b.at("origin").get<std::string>() + ")";
}

template <typename T>
std::pair<std::vector<T>, std::vector<T>> set_delta(std::vector<T> before, std::vector<T> after) {
  auto less = [](const T& a, const T& b) { return json(a).dump() < json(b).dump(); };
  std::sort(before.begin(), before.end(), less);
  std::sort(after.begin(), after.end(), less);
  std::vector<T> added, removed;
  std::set_difference(after.begin(), after.end(), before.begin(), before.end(), std::back_inserter(added), less);
  std::set_difference(before.begin(), before.end(), after.begin(), after.end(), std::back_inserter(removed), less);
  return {added, removed};
}

}  // namespace

const WidgetEntry& select_widget(const PriBomDocument& doc, std::string_view selector) {
  if (selector.empty()) throw BadRequest("empty widget selector");
  if (const auto id = parse_id(selector)) {
    if (const auto* e = doc.find(*id)) return *e;
  }
  if (const auto* e = doc.find_by_name(selector)) return *e;
  throw NotFound("no widget matches \"" + std::string(selector) + "\"");
}

json trace(const PriBomDocument& raw, std::string_view selector) {
  const auto doc = normalize(raw);
  const auto& e = select_widget(doc, selector);
  json chain = json::array();
  chain.push_back({{"hop", "identifier"}, {"value", e.identifier}});
  chain.push_back({{"hop", "bindings"}, {"value", e.bindings}});
  json notes = json::array();
  if (e.findings.empty()) {
    notes.push_back("no data practices detected");
  } else {
    chain.push_back({{"hop", "findings"}, {"value", e.findings}});
    chain.push_back({{"hop", "third_party_libraries"}, {"value", e.tpls}});
    chain.push_back({{"hop", "disclosures"},
                     {"value", {{"policy_segments", e.policy_segments}, {"label_declarations", e.label_declarations}}}});
    if (e.policy_segments.empty() && e.label_declarations.empty()) notes.push_back("no disclosures attached");
  }
  return json{{"widget_id", e.identifier.widget_id},
              {"widget_min_api", e.widget_min_api},
              {"chain", chain},
              {"notes", notes}};
}

std::string render_trace(const json& report) {
  std::ostringstream out;
  for (const auto& hop : report.at("chain")) {
    const auto name = hop.at("hop").get<std::string>();
    const auto& v = hop.at("value");
    if (name == "identifier") {
      const auto id = v.at("widget_id").get<std::uint32_t>();
      const auto src = v.at("widget_src").get<std::vector<std::string>>();
      out << "widget " << id << " (" << hex_id(id) << ")\n"
          << "  type: " << v.at("widget_type").get<std::string>() << "\n"
          << "  name: " << str_or(v, "widget_name", "(none)") << "\n"
          << "  src: " << (src.empty() ? std::string("none") : join(src)) << "\n"
          << "  min api level: " << report.at("widget_min_api").get<int>() << "\n";
    } else if (name == "bindings") {
      out << "bindings\n";
      for (const auto& b : v) out << "  " << render_binding(b) << "\n";
      if (v.empty()) out << "  (none)\n";
    } else if (name == "findings") {
      out << "findings\n";
      for (const auto& f : v) out << "  " << render_finding(f) << "\n";
    } else if (name == "third_party_libraries") {
      out << "libraries\n";
      for (const auto& t : v) out << "  " << render_tpl(t) << "\n";
      if (v.empty()) out << "  (none)\n";
    } else if (name == "disclosures") {
      out << "policy\n";
      for (const auto& s : v.at("policy_segments")) out << "  " << render_segment(s) << "\n";
      if (v.at("policy_segments").empty()) out << "  (none)\n";
      out << "label\n";
      for (const auto& d : v.at("label_declarations")) out << "  " << render_label(d) << "\n";
      if (v.at("label_declarations").empty()) out << "  (none)\n";
    }
  }
  for (const auto& n : report.at("notes")) out << "note: " << n.get<std::string>() << "\n";
  return out.str();
}

std::optional<TrackKind> parse_track_kind(std::string_view s) {
  if (s == "permission") return TrackKind::permission;
  if (s == "data_type") return TrackKind::data_type;
  if (s == "tpl") return TrackKind::tpl;
  if (s == "policy") return TrackKind::policy;
  return std::nullopt;
}

std::string_view to_string(TrackKind k) {
  switch (k) {
    case TrackKind::permission: return "permission";
    case TrackKind::data_type: return "data_type";
    case TrackKind::tpl: return "tpl";
    case TrackKind::policy: return "policy";
  }
  return "";
}

json track(const PriBomDocument& raw, TrackKind kind, std::string_view value) {
  if (value.empty()) throw BadRequest("empty track selector");
  const auto doc = normalize(raw);
  const std::string v(value);
  const auto needle = lower(value);
  json widgets = json::array(), ids = json::array();
  std::set<std::string> types;
  std::vector<PolicySegment> segs;
  std::vector<LabelDeclaration> decls;
  for (const auto& e : doc.entries) {
    std::vector<std::string> matches;
    switch (kind) {
      case TrackKind::permission:
      case TrackKind::data_type:
        for (const auto& f : e.findings) {
          if ((kind == TrackKind::permission ? f.permission : f.data_type) != v) continue;
          matches.push_back(f.permission + " " + f.data_type + " " + f.method_path);
          types.insert(f.data_type);
        }
        break;
      case TrackKind::tpl:
        for (const auto& t : e.tpls) {
          if (t.name == v) matches.push_back(t.name + " " + t.version);
        }
        if (!matches.empty()) {
          segs.insert(segs.end(), e.policy_segments.begin(), e.policy_segments.end());
          decls.insert(decls.end(), e.label_declarations.begin(), e.label_declarations.end());
        }
        break;
      case TrackKind::policy:
        for (const auto& s : e.policy_segments) {
          if (lower(s.text).find(needle) != std::string::npos) matches.push_back(s.data_type + " " + s.text);
        }
        break;
    }
    if (matches.empty()) continue;
    auto w = widget_summary(e);
    w["matches"] = matches;
    widgets.push_back(std::move(w));
    ids.push_back(e.identifier.widget_id);
  }
  json notice;
  if (kind == TrackKind::policy) {
    for (const auto& s : doc.policy_segments) {
      if (lower(s.text).find(needle) != std::string::npos) segs.push_back(s);
    }
    notice = json{{"policy_segments", segs}, {"label_declarations", json::array()}};
  } else if (kind == TrackKind::tpl) {
    auto tmp = normalize([&] {
      PriBomDocument d;
      d.policy_segments = segs;
      d.label_declarations = decls;
      return d;
    }());
    tmp.policy_segments.erase(std::unique(tmp.policy_segments.begin(), tmp.policy_segments.end()),
                              tmp.policy_segments.end());
    tmp.label_declarations.erase(std::unique(tmp.label_declarations.begin(), tmp.label_declarations.end()),
                                 tmp.label_declarations.end());
    notice = json{{"policy_segments", tmp.policy_segments}, {"label_declarations", tmp.label_declarations}};
  } else {
    if (kind == TrackKind::data_type) types.insert(v);
    notice = notice_for(doc, types);
  }
  return json{{"selector", {{"kind", to_string(kind)}, {"value", v}}},
              {"widget_ids", ids},
              {"widgets", widgets},
              {"notice", notice}};
}

std::string render_track(const json& report) {
  std::ostringstream out;
  const auto& sel = report.at("selector");
  out << "track " << sel.at("kind").get<std::string>() << " = " << sel.at("value").get<std::string>() << "\n";
  out << "widgets\n";
  for (const auto& w : report.at("widgets")) {
    const auto id = w.at("widget_id").get<std::uint32_t>();
    out << "  " << id << " (" << hex_id(id) << ") " << str_or(w, "widget_name", "(unnamed)") << " "
        << w.at("widget_type").get<std::string>() << "\n";
    for (const auto& m : w.at("matches")) out << "    " << m.get<std::string>() << "\n";
  }
  if (report.at("widgets").empty()) out << "  (no widgets)\n";
  const auto& notice = report.at("notice");
  out << "policy\n";
  for (const auto& s : notice.at("policy_segments")) out << "  " << render_segment(s) << "\n";
  if (notice.at("policy_segments").empty()) out << "  (none)\n";
  out << "label\n";
  for (const auto& d : notice.at("label_declarations")) out << "  " << render_label(d) << "\n";
  if (notice.at("label_declarations").empty()) out << "  (none)\n";
  return out.str();
}

json check(const PriBomDocument& raw) {
  const auto doc = normalize(raw);
  std::map<std::string, std::set<std::uint32_t>> collected;
  std::map<std::string, std::set<std::string>> disclosed;  // channel -> data types
  for (const auto& e : doc.entries) {
    for (const auto& f : e.findings) collected[f.data_type].insert(e.identifier.widget_id);
    for (const auto& s : e.policy_segments) disclosed["policy"].insert(s.data_type);
    for (const auto& d : e.label_declarations) disclosed["label"].insert(d.data_type);
  }
  for (const auto& s : doc.policy_segments) disclosed["policy"].insert(s.data_type);
  for (const auto& d : doc.label_declarations) disclosed["label"].insert(d.data_type);

  std::map<std::string, std::vector<std::string>> undisclosed_channels;
  json over = json::array(), channels = json::object();
  for (const auto ch : kChannels) {
    const std::string c(ch);
    json undis = json::array(), overd = json::array();
    for (const auto& [dt, _] : collected) {
      if (!disclosed[c].count(dt)) {
        undis.push_back(dt);
        undisclosed_channels[dt].push_back(c);
      }
    }
    for (const auto& dt : disclosed[c]) {
      if (!collected.count(dt)) {
        overd.push_back(dt);
        over.push_back({{"data_type", dt}, {"source", c}});
      }
    }
    channels[c] = {{"disclosed", disclosed[c]}, {"undisclosed", undis}, {"over_disclosed", overd}};
  }
  json undisclosed = json::array();
  for (const auto& [dt, chans] : undisclosed_channels) {
    undisclosed.push_back({{"data_type", dt}, {"widget_ids", collected.at(dt)}, {"channels", chans}});
  }
  json coll = json::object();
  for (const auto& [dt, ids] : collected) coll[dt] = ids;
  std::sort(over.begin(), over.end(), [](const json& a, const json& b) {
    return std::tie(a.at("data_type"), a.at("source")) < std::tie(b.at("data_type"), b.at("source"));
  });
  return json{{"app_package", doc.app_package},
              {"collected", coll},
              {"undisclosed", undisclosed},
              {"over_disclosed", over},
              {"channels", channels},
              {"consistent", undisclosed.empty() && over.empty()}};
}

int check_exit_status(const json& report) { return report.at("undisclosed").empty() ? 0 : 1; }

std::string render_check(const json& report) {
  std::ostringstream out;
  out << "consistency check for " << report.at("app_package").get<std::string>() << "\n";
  out << "undisclosed\n";
  for (const auto& u : report.at("undisclosed")) {
    std::vector<std::string> ids;
    for (const auto& id : u.at("widget_ids")) ids.push_back(std::to_string(id.get<std::uint32_t>()));
    out << "  " << u.at("data_type").get<std::string>() << " in "
        << join(u.at("channels").get<std::vector<std::string>>()) << " (widgets " << join(ids) << ")\n";
  }
  if (report.at("undisclosed").empty()) out << "  (none)\n";
  out << "over-disclosed\n";
  for (const auto& o : report.at("over_disclosed")) {
    out << "  " << o.at("data_type").get<std::string>() << " in " << o.at("source").get<std::string>() << "\n";
  }
  if (report.at("over_disclosed").empty()) out << "  (none)\n";
  return out.str();
}

json diff(const PriBomDocument& raw_before, const PriBomDocument& raw_after) {
  if (raw_before.app_package != raw_after.app_package) {
    throw Error("pribom-query", "package mismatch: '" + raw_before.app_package + "' vs '" + raw_after.app_package + "'");
  }
  const auto before = normalize(raw_before);
  const auto after = normalize(raw_after);
  std::set<std::uint32_t> all;
  for (const auto& e : before.entries) all.insert(e.identifier.widget_id);
  for (const auto& e : after.entries) all.insert(e.identifier.widget_id);
  PriBomDocument notices;  // disclosures from both builds
  notices.policy_segments = before.policy_segments;
  notices.policy_segments.insert(notices.policy_segments.end(), after.policy_segments.begin(),
                                 after.policy_segments.end());
  notices.label_declarations = before.label_declarations;
  notices.label_declarations.insert(notices.label_declarations.end(), after.label_declarations.begin(),
                                    after.label_declarations.end());
  notices = normalize(notices);
  notices.policy_segments.erase(std::unique(notices.policy_segments.begin(), notices.policy_segments.end()),
                                notices.policy_segments.end());
  notices.label_declarations.erase(
      std::unique(notices.label_declarations.begin(), notices.label_declarations.end()),
      notices.label_declarations.end());
  std::set<std::string> policy_after, label_after;
  for (const auto& s : after.policy_segments) policy_after.insert(s.data_type);
  for (const auto& d : after.label_declarations) label_after.insert(d.data_type);

  const WidgetEntry empty_entry;
  json added_ids = json::array(), removed_ids = json::array(), widgets = json::array();
  for (const auto id : all) {
    const auto* b = before.find(id);
    const auto* a = after.find(id);
    const auto& eb = b ? *b : empty_entry;
    const auto& ea = a ? *a : empty_entry;
    const auto [fa, fr] = set_delta(eb.findings, ea.findings);
    const auto [ta, tr] = set_delta(eb.tpls, ea.tpls);
    const auto [ba, br] = set_delta(eb.bindings, ea.bindings);
    const std::string status = !b ? "added" : !a ? "removed" : "changed";
    if (status == "changed" && fa.empty() && fr.empty() && ta.empty() && tr.empty() && ba.empty() && br.empty()) {
      continue;
    }
    if (status == "added") added_ids.push_back(id);
    if (status == "removed") removed_ids.push_back(id);
    std::set<std::string> types;
    for (const auto& f : fa) types.insert(f.data_type);
    for (const auto& f : fr) types.insert(f.data_type);
    json hints = json::array();
    std::set<std::string> added_types;
    for (const auto& f : fa) added_types.insert(f.data_type);
    for (const auto& dt : added_types) {
      if (!policy_after.count(dt)) hints.push_back(dt + " is collected but not disclosed in the privacy policy");
      if (!label_after.count(dt)) hints.push_back(dt + " is collected but not declared in the privacy label");
    }
    const auto& ident = a ? a->identifier : b->identifier;
    widgets.push_back({{"widget_id", id},
                       {"widget_name", ident.widget_name ? json(*ident.widget_name) : json(nullptr)},
                       {"status", status},
                       {"added_findings", fa},
                       {"removed_findings", fr},
                       {"added_tpls", ta},
                       {"removed_tpls", tr},
                       {"added_bindings", ba},
                       {"removed_bindings", br},
                       {"affected_notice", notice_for(notices, types)},
                       {"hints", hints}});
  }
  return json{{"app_package", after.app_package},
              {"added_widgets", added_ids},
              {"removed_widgets", removed_ids},
              {"widgets", widgets}};
}

bool diff_is_empty(const json& report) { return report.at("widgets").empty(); }

std::string render_diff(const json& report) {
  std::ostringstream out;
  out << "diff for " << report.at("app_package").get<std::string>() << "\n";
  if (diff_is_empty(report)) {
    out << "  (no changes)\n";
    return out.str();
  }
  for (const auto& w : report.at("widgets")) {
    const auto id = w.at("widget_id").get<std::uint32_t>();
    out << w.at("status").get<std::string>() << " widget " << id << " (" << hex_id(id) << ") "
        << str_or(w, "widget_name", "(unnamed)") << "\n";
    auto list = [&](const char* key, const char* sign, auto render) {
      for (const auto& item : w.at(key)) out << "  " << sign << " " << render(item) << "\n";
    };
    list("added_bindings", "+", render_binding);
    list("removed_bindings", "-", render_binding);
    list("added_findings", "+", render_finding);
    list("removed_findings", "-", render_finding);
    list("added_tpls", "+", render_tpl);
    list("removed_tpls", "-", render_tpl);
    const auto& n = w.at("affected_notice");
    for (const auto& s : n.at("policy_segments")) out << "  affected policy " << render_segment(s) << "\n";
    for (const auto& d : n.at("label_declarations")) out << "  affected label " << render_label(d) << "\n";
    for (const auto& h : w.at("hints")) out << "  hint: " << h.get<std::string>() << "\n";
  }
  return out.str();
}

}  // namespace pribom
