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
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "pribom/apk/archive.hpp"
#include "pribom/apk/arsc.hpp"
#include "pribom/apk/axml.hpp"
#include "pribom/apk/dex.hpp"
#include "pribom/diagnostics.hpp"

namespace pribom::apk {

struct ManifestInfo {
  std::string package;
  std::int64_t version_code = 0;
  std::string version_name;
  int min_sdk = 1;
  int target_sdk = 0;
  std::vector<std::string> permissions;  // uses-permission, declaration order
  std::vector<std::string> activities;   // fully qualified
};

// Reads package, version, sdk levels, permissions and activities. Relative
// component names (".Main", "Main") are qualified with the package.
ManifestInfo read_manifest(const BinaryXmlDocument& manifest);

// Everything downstream stages need from one APK.
struct LoadedApk {
  ApkArchive archive;
  BinaryXmlDocument manifest_xml;
  ManifestInfo manifest;
  ResourceTable resources;
  std::map<std::string, BinaryXmlDocument> layouts;  // res/layout*/...
  std::map<std::string, BinaryXmlDocument> menus;    // res/menu*/...
  DexModel dex;
};

// Opens the archive and decodes every member the analysis consumes.
// Layout or menu members that fail to decode are skipped with a warning.
LoadedApk load_apk(const std::filesystem::path& path, Diagnostics& diags);

}  // namespace pribom::apk
