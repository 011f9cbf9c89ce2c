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

#include "pribom/tpl/detector.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

#include "pribom/io.hpp"

namespace pribom::tpl {
namespace {

constexpr const char* kModule = "tpl-detector";

char return_category(const std::string& desc) {
  if (desc.empty()) return 'V';
  switch (desc[0]) {
    case 'V': return 'V';
    case 'Z': return 'Z';
    case 'B':
    case 'S':
    case 'C':
    case 'I': return 'I';
    case 'J': return 'J';
    case 'F':
    case 'D': return 'F';
    case '[': return '[';
    default: return 'L';
  }
}

std::string class_kind(const apk::ClassDef& c) {
  if (c.access_flags & apk::access::kAnnotation) return "annotation";
  if (c.is_interface()) return "interface";
  if (c.access_flags & apk::access::kEnum) return "enum";
  if (c.is_abstract()) return "abstract";
  return "class";
}

std::string strip_counter(const std::string& key) {
  const auto hash = key.rfind('#');
  return hash == std::string::npos ? key : key.substr(0, hash);
}

bool has_prefix(const std::string& cls, const std::vector<std::string>& prefixes) {
  return std::any_of(prefixes.begin(), prefixes.end(),
                     [&](const std::string& p) { return cls.compare(0, p.size(), p) == 0; });
}

std::string package_of(const std::string& cls) {
  const auto dot = cls.rfind('.');
  return dot == std::string::npos ? std::string() : cls.substr(0, dot + 1);
}

}  // namespace

std::string MethodShape::render() const {
  return std::to_string(arity) + ":" + return_category + ":" + access;
}

MethodShape method_shape(const apk::MethodDef& m) {
  MethodShape s;
  s.arity = static_cast<int>(m.ref.param_descriptors.size());
  s.return_category = return_category(m.ref.return_descriptor);
  if (m.ref.method_name == "<init>") s.access = "ctor";
  else if (m.ref.method_name == "<clinit>") s.access = "clinit";
  else if (m.is_static()) s.access = "static";
  else if (m.is_abstract()) s.access = "abstract";
  else if (m.is_private()) s.access = "private";
  else s.access = "virtual";
  return s;
}

std::string profile_hash(std::vector<MethodShape> shapes) {
  std::sort(shapes.begin(), shapes.end());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& s : shapes) feed(s.render() + ";");
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<ClassProfile> profile_classes(const apk::DexModel& dex) {
  auto norm = [&](const std::string& type) { return dex.find_class(type) != nullptr ? std::string("*") : type; };
  std::vector<ClassProfile> out;
  for (const auto& c : dex.classes()) {
    ClassProfile p;
    p.class_name = c.name;
    std::vector<std::string> ifaces;
    for (const auto& i : c.interfaces) ifaces.push_back(norm(i));
    std::sort(ifaces.begin(), ifaces.end());
    p.key = class_kind(c) + "|" + norm(c.superclass) + "|";
    for (std::size_t i = 0; i < ifaces.size(); ++i) p.key += (i ? "," : "") + ifaces[i];
    std::vector<MethodShape> shapes;
    for (const auto* m : dex.methods_of(c.name)) shapes.push_back(method_shape(*m));
    p.hash = profile_hash(std::move(shapes));
    out.push_back(std::move(p));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.class_name < b.class_name; });
  return out;
}

void LibrarySignature::check() const {
  if (name.empty()) throw Error(kModule, "signature without a name");
  if (version.empty()) throw Error(kModule, "signature " + name + " has no version");
  if (package_prefixes.empty()) throw Error(kModule, "signature " + name + " has no package prefixes");
  if (class_profiles.empty()) throw Error(kModule, "signature " + name + " has no class profiles");
}

void to_json(nlohmann::json& j, const LibrarySignature& s) {
  j = nlohmann::json{{"name", s.name},
                     {"version", s.version},
                     {"package_prefixes", s.package_prefixes},
                     {"class_profiles", s.class_profiles}};
}

LibrarySignature signature_from_json(const nlohmann::json& j) {
  LibrarySignature s;
  try {
    s.name = j.at("name").get<std::string>();
    s.version = j.at("version").get<std::string>();
    s.package_prefixes = j.at("package_prefixes").get<std::vector<std::string>>();
    s.class_profiles = j.at("class_profiles").get<std::map<std::string, std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(kModule, std::string("malformed signature: ") + e.what());
  }
  s.check();
  return s;
}

std::vector<LibrarySignature> signatures_from_json(const nlohmann::json& j) {
  const nlohmann::json* list = &j;
  if (j.is_object()) {
    if (!j.contains("signatures")) throw Error(kModule, "signature file lacks \"signatures\"");
    list = &j.at("signatures");
  }
  if (!list->is_array()) throw Error(kModule, "signatures must be an array");
  std::vector<LibrarySignature> out;
  for (const auto& s : *list) out.push_back(signature_from_json(s));
  return out;
}

std::vector<LibrarySignature> load_signatures(const std::filesystem::path& path) {
  return signatures_from_json(read_json_file(path, kModule));
}

nlohmann::json signatures_to_json(const std::vector<LibrarySignature>& sigs) {
  return nlohmann::json{{"schema_version", 1}, {"signatures", sigs}};
}

LibrarySignature build_signature(const apk::DexModel& library, const std::string& name, const std::string& version,
                                 std::vector<std::string> prefixes) {
  LibrarySignature s;
  s.name = name;
  s.version = version;
  const auto profiles = profile_classes(library);
  if (prefixes.empty() && !profiles.empty()) {
    std::string common = package_of(profiles.front().class_name);
    for (const auto& p : profiles) {
      const auto pkg = package_of(p.class_name);
      std::size_t n = 0;
      while (n < common.size() && n < pkg.size() && common[n] == pkg[n]) ++n;
      common.resize(n);
    }
    // Cut back to a whole package segment.
    const auto dot = common.rfind('.');
    common = dot == std::string::npos ? std::string() : common.substr(0, dot + 1);
    if (!common.empty()) prefixes.push_back(common);
  }
  for (auto& p : prefixes) {
    if (!p.empty() && p.back() != '.') p += '.';
  }
  s.package_prefixes = std::move(prefixes);
  std::map<std::string, int> seen;
  for (const auto& p : profiles) {
    const int n = seen[p.key]++;
    s.class_profiles.emplace(p.key + "#" + std::to_string(n), p.hash);
  }
  s.check();
  return s;
}

DetectionResult match_signature(const std::vector<ClassProfile>& app, const LibrarySignature& sig) {
  // Candidate app classes per (key, hash), prefixed classes first.
  std::map<std::pair<std::string, std::string>, std::vector<const ClassProfile*>> pool;
  for (const auto& p : app) pool[{p.key, p.hash}].push_back(&p);
  for (auto& [_, v] : pool) {
    std::stable_sort(v.begin(), v.end(), [&](const ClassProfile* a, const ClassProfile* b) {
      return has_prefix(a->class_name, sig.package_prefixes) > has_prefix(b->class_name, sig.package_prefixes);
    });
  }
  std::map<std::pair<std::string, std::string>, std::size_t> used;
  DetectionResult r;
  for (const auto& [key, hash] : sig.class_profiles) {
    const std::pair<std::string, std::string> k{strip_counter(key), hash};
    const auto it = pool.find(k);
    if (it == pool.end()) continue;
    auto& n = used[k];
    if (n >= it->second.size()) continue;
    r.matched_classes.push_back(it->second[n++]->class_name);
  }
  std::sort(r.matched_classes.begin(), r.matched_classes.end());
  r.record.name = sig.name;
  r.record.version = sig.version;
  r.record.confidence =
      std::clamp(static_cast<double>(r.matched_classes.size()) / static_cast<double>(sig.class_profiles.size()),
                 0.0, 1.0);
  return r;
}

int compare_versions(const std::string& a, const std::string& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const bool da = std::isdigit(static_cast<unsigned char>(a[i])) != 0;
    const bool db = std::isdigit(static_cast<unsigned char>(b[j])) != 0;
    if (da && db) {
      std::size_t ei = i, ej = j;
      while (ei < a.size() && std::isdigit(static_cast<unsigned char>(a[ei]))) ++ei;
      while (ej < b.size() && std::isdigit(static_cast<unsigned char>(b[ej]))) ++ej;
      auto na = a.substr(i, ei - i), nb = b.substr(j, ej - j);
      na.erase(0, std::min(na.find_first_not_of('0'), na.size()));
      nb.erase(0, std::min(nb.find_first_not_of('0'), nb.size()));
      if (na.size() != nb.size()) return na.size() < nb.size() ? -1 : 1;
      if (const int c = na.compare(nb); c != 0) return c < 0 ? -1 : 1;
      i = ei;
      j = ej;
    } else {
      if (a[i] != b[j]) return a[i] < b[j] ? -1 : 1;
      ++i;
      ++j;
    }
  }
  if (i < a.size()) return 1;
  if (j < b.size()) return -1;
  return 0;
}

std::vector<DetectionResult> detect(const apk::DexModel& dex, const std::vector<LibrarySignature>& db,
                                    double threshold) {
  if (db.empty()) throw Error(kModule, "the signature database is empty");
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw Error(kModule, "threshold must be in (0, 1], got " + std::to_string(threshold));
  }
  const auto app = profile_classes(dex);
  std::map<std::string, DetectionResult> best;
  for (const auto& sig : db) {
    auto r = match_signature(app, sig);
    if (r.record.confidence < threshold) continue;
    auto it = best.find(sig.name);
    if (it == best.end()) {
      best.emplace(sig.name, std::move(r));
      continue;
    }
    const auto& cur = it->second.record;
    if (r.record.confidence > cur.confidence ||
        (r.record.confidence == cur.confidence && compare_versions(r.record.version, cur.version) > 0)) {
      it->second = std::move(r);
    }
  }
  std::vector<DetectionResult> out;
  for (auto& [_, r] : best) out.push_back(std::move(r));
  return out;
}

std::map<std::uint32_t, std::vector<TplRecord>> attribute_to_widget(
    const std::vector<DetectionResult>& results, const std::map<std::uint32_t, std::set<MethodRef>>& reachable) {
  std::map<std::uint32_t, std::vector<TplRecord>> out;
  for (const auto& [widget, methods] : reachable) {
    std::set<std::string> owners;
    for (const auto& m : methods) owners.insert(m.class_name);
    auto& list = out[widget];
    for (const auto& r : results) {
      const bool hit = std::any_of(r.matched_classes.begin(), r.matched_classes.end(),
                                   [&](const std::string& c) { return owners.count(c) != 0; });
      if (hit) list.push_back(r.record);
    }
  }
  return out;
}

}  // namespace pribom::tpl
