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

// The generate pipeline: APK, UI, call graph, permissions, libraries and
// notices assembled into one document.

#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"

#include "pribom/diagnostics.hpp"
#include "pribom/model.hpp"
#include "pribom/notice/policy.hpp"
#include "pribom/tpl/detector.hpp"

namespace pribom {

inline constexpr std::string_view kToolVersion = "0.1.0";

struct RunConfig {
  // Inputs. Only the APK is required.
  std::filesystem::path apk;
  std::filesystem::path policy;
  std::filesystem::path label;

  // Data asset overrides; empty means the bundled file in data_dir().
  std::filesystem::path api_map;
  std::filesystem::path permission_catalog;
  std::filesystem::path widget_api_table;
  std::filesystem::path tpl_signatures;
  std::filesystem::path tpl_metadata;
  std::filesystem::path lexicon;
  std::filesystem::path taxonomy_map;
  std::filesystem::path ui_config;

  double tpl_threshold = tpl::kDefaultThreshold;
  double similarity_threshold = notice::kDefaultSimilarityThreshold;

  // Remote metadata: GET <metadata_url>/<library>, cached in metadata_cache.
  bool fetch_metadata = false;
  std::string metadata_url;
  std::filesystem::path metadata_cache = ".pribom-metadata-cache.json";

  // Outputs. The diagnostics sidecar sits next to `out`.
  std::filesystem::path out = "pribom.json";
  std::filesystem::path csv;
  std::filesystem::path dump_callgraph;

  std::string addr = "127.0.0.1:8080";

  // Overrides SOURCE_DATE_EPOCH and the clock when set.
  std::optional<std::string> generated_at;

  // Throws pribom::Error naming the first unusable setting.
  void check() const;
  // `explicit_path` when set, else the bundled asset `name`.
  static std::filesystem::path asset(const std::filesystem::path& explicit_path, std::string_view name);
};

struct GenerateResult {
  PriBomDocument document;
  Diagnostics diagnostics;
  std::string callgraph_dump;  // filled when dump_callgraph is set
};

// Runs every stage without touching the output paths. Stage failures
// propagate as pribom::Error naming their module.
GenerateResult run_pipeline(const RunConfig& config);

// Writes the document, the optional CSV and call-graph dump, and the
// diagnostics sidecar, each atomically.
void write_outputs(const RunConfig& config, const GenerateResult& result);

// "<out stem>.diagnostics.json" beside `out`.
std::filesystem::path diagnostics_path(const std::filesystem::path& out);

nlohmann::json diagnostics_to_json(const Diagnostics& diags);

// UTC timestamp from SOURCE_DATE_EPOCH, or from the clock when unset.
std::string build_timestamp();

}  // namespace pribom
