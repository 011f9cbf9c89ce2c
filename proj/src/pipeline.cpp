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

#include "pribom/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <memory>
#include <sstream>

#include "pribom/apk/apk.hpp"
#include "pribom/callgraph/call_graph.hpp"
#include "pribom/callgraph/hierarchy.hpp"
#include "pribom/io.hpp"
#include "pribom/notice/label.hpp"
#include "pribom/permission/mapper.hpp"
#include "pribom/tpl/metadata.hpp"
#include "pribom/ui/extractor.hpp"

namespace pribom {
namespace {

constexpr const char* kModule = "pribom-cli";

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string format_utc(std::time_t t) {
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

void RunConfig::check() const {
  if (apk.empty()) throw Error(kModule, "--apk is required");
  if (!(tpl_threshold > 0.0 && tpl_threshold <= 1.0)) throw Error(kModule, "--tpl-threshold must be in (0, 1]");
  if (!(similarity_threshold > 0.0 && similarity_threshold <= 1.0)) {
    throw Error(kModule, "--similarity-threshold must be in (0, 1]");
  }
  if (fetch_metadata && metadata_url.empty()) throw Error(kModule, "--fetch-metadata needs --metadata-url");
  if (out.empty()) throw Error(kModule, "--out must not be empty");
}

std::filesystem::path RunConfig::asset(const std::filesystem::path& explicit_path, std::string_view name) {
  return explicit_path.empty() ? asset_path(name) : explicit_path;
}

std::string build_timestamp() {
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) {
    char* end = nullptr;
    const long long v = std::strtoll(epoch, &end, 10);
    if (*end != '\0' || v < 0) throw Error(kModule, "SOURCE_DATE_EPOCH must be a non-negative integer");
    return format_utc(static_cast<std::time_t>(v));
  }
  return format_utc(std::chrono::system_clock::to_time_t(std::chrono::system_clock::now()));
}

GenerateResult run_pipeline(const RunConfig& config) {
  config.check();
  GenerateResult result;
  auto& diags = result.diagnostics;

  const auto apk = apk::load_apk(config.apk, diags);

  auto ui_config = ui::UiConfig::defaults();
  if (!config.ui_config.empty()) ui_config = ui::UiConfig::from_json(read_json_file(config.ui_config, "ui-extractor"));
  ui_config.check();
  const auto widgets = ui::extract_ui(apk, ui_config, diags);

  const auto hierarchy = callgraph::build_class_hierarchy(apk.dex);
  const auto graph = callgraph::build_call_graph(apk.dex, hierarchy, &diags);
  if (!config.dump_callgraph.empty()) {
    std::ostringstream os;
    graph.dump(os);
    result.callgraph_dump = os.str();
  }

  const auto catalog = permission::PermissionCatalog::load(RunConfig::asset(config.permission_catalog,
                                                                            "permission_catalog.json"));
  const auto api_map = permission::ApiPermissionMap::load(RunConfig::asset(config.api_map, "api_permission_map.json"));
  api_map.check_against(catalog);
  const auto widget_table =
      permission::WidgetApiTable::load(RunConfig::asset(config.widget_api_table, "widget_api_table.json"));

  auto doc = make_document(apk.manifest.package);
  doc.app_version_name = apk.manifest.version_name;
  doc.app_version_code = apk.manifest.version_code;
  doc.generated_at = config.generated_at ? *config.generated_at : build_timestamp();
  doc.tool_version = std::string(kToolVersion);

  std::map<std::uint32_t, std::set<MethodRef>> reachable;
  for (const auto& w : widgets) {
    auto& methods = reachable[w.identifier.widget_id];
    for (const auto& b : w.bindings) {
      const auto r = callgraph::reachable_methods(graph, b.handler, &diags);
      methods.insert(r.begin(), r.end());
    }
    WidgetEntry e;
    e.identifier = w.identifier;
    e.bindings = w.bindings;
    e.widget_min_api = permission::widget_min_api(w.identifier.widget_type, widget_table, diags);
    for (auto& f : permission::map_apis(methods, api_map, catalog)) {
      if (permission::is_data_finding(f)) {
        e.findings.push_back(std::move(f));
      } else {
        diags.info("permission-mapper", "widget " + std::to_string(w.identifier.widget_id) + " reaches " +
                                            f.method_path + " needing non-dangerous " + f.permission);
      }
    }
    doc.entries.push_back(std::move(e));
  }

  const auto signatures = tpl::load_signatures(RunConfig::asset(config.tpl_signatures, "tpl_signatures.json"));
  const auto detected = tpl::detect(apk.dex, signatures, config.tpl_threshold);
  auto per_widget = tpl::attribute_to_widget(detected, reachable);
  std::unique_ptr<tpl::MetadataSource> source;
  if (config.fetch_metadata) {
    source = std::make_unique<tpl::RemoteMetadata>(config.metadata_url, config.metadata_cache);
  } else {
    source = std::make_unique<tpl::OfflineMetadata>(
        tpl::OfflineMetadata::load(RunConfig::asset(config.tpl_metadata, "tpl_metadata.json")));
  }
  {
    // Enrich each library once so diagnostics are not repeated per widget.
    std::vector<TplRecord> records;
    for (const auto& d : detected) records.push_back(d.record);
    const auto enriched = tpl::enrich(records, *source, diags);
    std::map<std::string, TplRecord> by_name;
    for (const auto& r : enriched) by_name[r.name] = r;
    for (auto& e : doc.entries) {
      for (const auto& r : per_widget[e.identifier.widget_id]) e.tpls.push_back(by_name.at(r.name));
    }
  }

  if (!config.policy.empty()) {
    const auto lexicon = notice::KeywordLexicon::load(RunConfig::asset(config.lexicon, "lexicon.json"));
    const auto policy = notice::split_policy(read_file(config.policy, "notice-analyzer"));
    notice::check_language(policy, diags);
    doc.policy_segments = notice::segment(policy, lexicon, config.similarity_threshold);
  } else {
    diags.warn("notice-analyzer", "no privacy policy given; policy disclosures are empty");
  }
  if (!config.label.empty()) {
    const auto taxonomy = notice::TaxonomyMap::load(RunConfig::asset(config.taxonomy_map, "taxonomy_map.json"));
    doc.label_declarations = notice::parse_label(notice::load_data_safety(config.label), taxonomy, diags);
  } else {
    diags.warn("notice-analyzer", "no Data Safety label given; label declarations are empty");
  }
  doc.entries = notice::attach(std::move(doc.entries), doc.policy_segments, doc.label_declarations);

  doc.analysis = {
      {"callgraph", "cha"},
      {"callgraph_edges", std::to_string(graph.edge_count())},
      {"callgraph_nodes", std::to_string(graph.node_count())},
      {"metadata_source", config.fetch_metadata ? "remote" : "offline"},
      {"similarity_threshold", format_number(config.similarity_threshold)},
      {"tpl_threshold", format_number(config.tpl_threshold)},
  };
  doc = normalize(std::move(doc));
  const auto violations = validate(doc, ui_config.extra_events());
  if (!violations.empty()) throw Error(kModule, "assembled document is invalid: " + violations.front());
  result.document = std::move(doc);
  return result;
}

std::filesystem::path diagnostics_path(const std::filesystem::path& out) {
  auto p = out;
  p.replace_filename(out.stem().string() + ".diagnostics.json");
  return p;
}

nlohmann::json diagnostics_to_json(const Diagnostics& diags) {
  nlohmann::json items = nlohmann::json::array();
  for (const auto& d : diags.items()) {
    items.push_back({{"module", d.module}, {"severity", std::string(to_string(d.severity))}, {"message", d.message}});
  }
  return {{"schema_version", 1}, {"diagnostics", items}};
}

void write_outputs(const RunConfig& config, const GenerateResult& result) {
  for (const auto* p : {&config.out, &config.csv, &config.dump_callgraph}) {
    if (!p->empty() && p->has_parent_path()) std::filesystem::create_directories(p->parent_path());
  }
  write_file_atomic(config.out, encode(result.document));
  write_file_atomic(diagnostics_path(config.out), diagnostics_to_json(result.diagnostics).dump(2) + "\n");
  if (!config.csv.empty()) write_file_atomic(config.csv, export_csv(result.document));
  if (!config.dump_callgraph.empty()) write_file_atomic(config.dump_callgraph, result.callgraph_dump);
}

}  // namespace pribom
