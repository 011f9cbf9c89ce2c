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

#include "pribom/cli.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <filesystem>

#include "pribom/apk/dex.hpp"
#include "pribom/io.hpp"
#include "pribom/pipeline.hpp"
#include "pribom/query.hpp"
#include "pribom/server.hpp"
#include "pribom/tpl/detector.hpp"

namespace pribom {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kModule = "pribom-cli";

PriBomDocument load_document(const fs::path& path) { return decode(read_file(path, kModule)); }

void emit(std::ostream& out, const json& report, bool as_json, std::string (*render)(const json&)) {
  if (as_json) {
    out << to_payload(report);
  } else {
    out << render(report);
  }
}

void add_generate_options(CLI::App& cmd, RunConfig& c) {
  cmd.add_option("--apk", c.apk, "APK to analyze");
  cmd.add_option("--policy", c.policy, "privacy policy, plain text or HTML");
  cmd.add_option("--label", c.label, "Data Safety label JSON");
  cmd.add_option("--csv", c.csv, "also write the CSV export here");
  cmd.add_option("--api-map", c.api_map, "API-to-permission rules");
  cmd.add_option("--permission-catalog", c.permission_catalog, "permission catalog");
  cmd.add_option("--widget-api-table", c.widget_api_table, "widget class API levels");
  cmd.add_option("--tpl-signatures", c.tpl_signatures, "library signature database");
  cmd.add_option("--tpl-metadata", c.tpl_metadata, "offline library metadata");
  cmd.add_option("--lexicon", c.lexicon, "policy keyword lexicon");
  cmd.add_option("--taxonomy-map", c.taxonomy_map, "Data Safety taxonomy map");
  cmd.add_option("--ui-config", c.ui_config, "listener and callback vocabulary overlay");
  cmd.add_option("--tpl-threshold", c.tpl_threshold, "library match threshold in (0, 1]");
  cmd.add_option("--similarity-threshold", c.similarity_threshold, "policy phrase threshold in (0, 1]");
  cmd.add_flag("--fetch-metadata", c.fetch_metadata, "query a metadata repository instead of the bundled file");
  cmd.add_option("--metadata-url", c.metadata_url, "repository base URL for --fetch-metadata");
  cmd.add_option("--metadata-cache", c.metadata_cache, "cache file for fetched metadata");
  cmd.add_option("--dump-callgraph", c.dump_callgraph, "write the call graph as tab-separated edges");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Privacy bill of materials for Android apps", "pribom"};
  app.set_config("--config", "", "TOML or INI file with option defaults; flags win");
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  RunConfig config;
  fs::path doc_path = "pribom.json";
  bool as_json = false;

  auto* gen = app.add_subcommand("generate", "analyze an APK and write pribom.json");
  add_generate_options(*gen, config);
  gen->add_option("--out", config.out, "document path")->capture_default_str();

  std::string selector;
  auto* tr = app.add_subcommand("trace", "follow one widget to its code, libraries and disclosures");
  tr->add_option("widget", selector, "widget id (decimal or 0x hex) or name")->required();
  tr->add_option("--doc", doc_path, "document path")->capture_default_str();
  tr->add_flag("--json", as_json, "print the machine-readable report");

  std::string track_type, track_value;
  auto* tk = app.add_subcommand("track", "find widgets and notice entries for a data practice");
  tk->add_option("--type", track_type, "permission, data_type, tpl or policy")
      ->required()
      ->check(CLI::IsMember({"permission", "data_type", "tpl", "policy"}));
  tk->add_option("--value", track_value, "value to match; policy matches substrings")->required();
  tk->add_option("--doc", doc_path, "document path")->capture_default_str();
  tk->add_flag("--json", as_json, "print the machine-readable report");

  auto* ck = app.add_subcommand("check", "compare collected data types with the disclosures; exit 1 if undisclosed");
  ck->add_option("--doc", doc_path, "document path")->capture_default_str();
  ck->add_flag("--json", as_json, "print the machine-readable report");

  fs::path before_path, after_path;
  auto* df = app.add_subcommand("diff", "compare two documents of the same app");
  df->add_option("before", before_path, "older document")->required();
  df->add_option("after", after_path, "newer document")->required();
  df->add_flag("--json", as_json, "print the machine-readable report");

  fs::path web_root = PRIBOM_DEFAULT_WEB_ROOT;
  auto* sv = app.add_subcommand("serve", "serve a document over HTTP; with --apk, generate it first");
  add_generate_options(*sv, config);
  sv->add_option("--out,--doc", config.out, "document path, read or generated")->capture_default_str();
  sv->add_option("--addr", config.addr, "listen address [host:]port")->capture_default_str();
  sv->add_option("--web-root", web_root, "static UI directory")->capture_default_str();

  fs::path dex_path, sig_out;
  std::string sig_name, sig_version;
  std::vector<std::string> sig_prefixes;
  auto* sg = app.add_subcommand("signature", "add a library's dex to a signature database");
  sg->add_option("--dex", dex_path, "library classes.dex")->required()->check(CLI::ExistingFile);
  sg->add_option("--name", sig_name, "library name")->required();
  sg->add_option("--version", sig_version, "library version")->required();
  sg->add_option("--prefix", sig_prefixes, "package prefix, e.g. javax.inject. (repeatable)");
  sg->add_option("--out", sig_out, "database to create or update")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (gen->parsed()) {
      if (config.apk.empty()) {
        err << "pribom: generate needs --apk\n";
        return kExitUsage;
      }
      const auto result = run_pipeline(config);
      write_outputs(config, result);
      out << "wrote " << config.out.string() << " (" << result.document.entries.size() << " widgets, "
          << result.diagnostics.size() << " diagnostics in " << diagnostics_path(config.out).string() << ")\n";
      return 0;
    }
    if (tr->parsed()) {
      emit(out, trace(load_document(doc_path), selector), as_json, render_trace);
      return 0;
    }
    if (tk->parsed()) {
      emit(out, track(load_document(doc_path), *parse_track_kind(track_type), track_value), as_json, render_track);
      return 0;
    }
    if (ck->parsed()) {
      const auto report = check(load_document(doc_path));
      emit(out, report, as_json, render_check);
      return check_exit_status(report);
    }
    if (df->parsed()) {
      emit(out, diff(load_document(before_path), load_document(after_path)), as_json, render_diff);
      return 0;
    }
    if (sv->parsed()) {
      if (!config.apk.empty()) {
        write_outputs(config, run_pipeline(config));
      } else if (!fs::exists(config.out)) {
        err << "pribom: serve needs an existing document or --apk to generate one\n";
        return kExitUsage;
      }
      auto store = DocumentStore::load(config.out);
      HttpService service(store, web_root);
      const auto [host, port] = parse_address(config.addr);
      const int bound = service.bind(host, port);
      out << "serving " << config.out.string() << " on http://" << host << ":" << bound << "\n" << std::flush;
      service.listen();
      return 0;
    }
    if (sg->parsed()) {
      const auto bytes = read_file(dex_path, kModule);
      const auto dex = apk::parse_dex(apk::Bytes(reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()),
                                      dex_path.filename().string());
      const auto sig = tpl::build_signature(dex, sig_name, sig_version, sig_prefixes);
      std::vector<tpl::LibrarySignature> db;
      if (fs::exists(sig_out)) db = tpl::load_signatures(sig_out);
      std::erase_if(db, [&](const auto& s) { return s.name == sig.name && s.version == sig.version; });
      db.push_back(sig);
      std::sort(db.begin(), db.end(), [](const auto& a, const auto& b) {
        return std::tie(a.name, a.version) < std::tie(b.name, b.version);
      });
      write_file_atomic(sig_out, to_payload(tpl::signatures_to_json(db)));
      out << "wrote " << sig.class_profiles.size() << " class profiles for " << sig.name << " " << sig.version
          << " to " << sig_out.string() << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    err << "pribom: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace pribom
