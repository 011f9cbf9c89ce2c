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

#include "pribom/apk/apk.hpp"

namespace pribom::apk {
namespace {

constexpr const char* kModule = "apk-parser";

std::string qualify(const std::string& package, const std::string& name) {
  if (name.empty()) return name;
  if (name[0] == '.') return package + name;
  if (name.find('.') == std::string::npos) return package + "." + name;
  return name;
}

int int_attr(const XmlElement& e, std::string_view name, int fallback) {
  const auto* a = e.attribute(name);
  if (!a) return fallback;
  if (a->value.kind == ValueKind::integer) return static_cast<int>(a->value.integer);
  if (a->value.kind == ValueKind::string) {
    try {
      return std::stoi(a->value.string);
    } catch (const std::exception&) {
      return fallback;
    }
  }
  return fallback;
}

bool is_resource_dir(const std::string& name, const std::string& type) {
  // res/<type>/ or res/<type>-<qualifiers>/
  const std::string prefix = "res/" + type;
  if (name.compare(0, prefix.size(), prefix) != 0) return false;
  const char next = name.size() > prefix.size() ? name[prefix.size()] : '\0';
  return (next == '/' || next == '-') && name.size() > 4 && name.substr(name.size() - 4) == ".xml";
}

}  // namespace

ManifestInfo read_manifest(const BinaryXmlDocument& doc) {
  ManifestInfo info;
  const auto& root = doc.root;
  if (root.name != "manifest") {
    throw Error(kModule, "manifest root element is '" + root.name + "', expected 'manifest'");
  }
  if (const auto* p = root.attribute("package", "")) info.package = p->value.to_string();
  if (const auto* v = root.attribute("versionCode")) info.version_code = v->value.integer;
  if (const auto* v = root.attribute("versionName")) info.version_name = v->value.to_string();
  for (const auto& child : root.children) {
    if (child.name == "uses-sdk") {
      info.min_sdk = int_attr(child, "minSdkVersion", info.min_sdk);
      info.target_sdk = int_attr(child, "targetSdkVersion", info.target_sdk);
    } else if (child.name == "uses-permission" || child.name == "uses-permission-sdk-23") {
      if (const auto* n = child.attribute("name")) info.permissions.push_back(n->value.to_string());
    } else if (child.name == "application") {
      for (const auto& comp : child.children) {
        if (comp.name != "activity" && comp.name != "activity-alias") continue;
        if (const auto* n = comp.attribute("name")) {
          info.activities.push_back(qualify(info.package, n->value.to_string()));
        }
      }
    }
  }
  if (info.target_sdk == 0) info.target_sdk = info.min_sdk;
  return info;
}

LoadedApk load_apk(const std::filesystem::path& path, Diagnostics& diags) {
  auto archive = ApkArchive::open(path);
  auto manifest_bytes = archive.read("AndroidManifest.xml");
  auto manifest_xml = decode_binary_xml(manifest_bytes);
  auto manifest = read_manifest(manifest_xml);

  ResourceTable resources;
  if (archive.contains("resources.arsc")) {
    resources = parse_resource_table(archive.read("resources.arsc"));
  } else {
    diags.warn(kModule, "archive has no resources.arsc; widget names will be empty");
  }

  std::map<std::string, BinaryXmlDocument> layouts;
  std::map<std::string, BinaryXmlDocument> menus;
  for (const auto& [name, _] : archive.entries()) {
    const bool is_layout = is_resource_dir(name, "layout");
    const bool is_menu = is_resource_dir(name, "menu");
    if (!is_layout && !is_menu) continue;
    try {
      auto doc = decode_binary_xml(archive.read(name));
      (is_layout ? layouts : menus).emplace(name, std::move(doc));
    } catch (const Error& e) {
      diags.warn(kModule, "skipping " + name + ": " + e.what());
    }
  }

  std::vector<std::pair<std::string, std::vector<std::uint8_t>>> dexes;
  for (const auto& name : archive.dex_members()) dexes.emplace_back(name, archive.read(name));
  auto dex = parse_multidex(dexes);

  return LoadedApk{std::move(archive), std::move(manifest_xml), std::move(manifest),
                   std::move(resources), std::move(layouts), std::move(menus), std::move(dex)};
}

}  // namespace pribom::apk
