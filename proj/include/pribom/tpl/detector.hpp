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

// Third-party library detection by structural class profiles. A class is
// summarized by a key (its kind plus supertypes, with library-internal
// names erased) and a hash of its methods' shapes, so renaming classes or
// packages leaves both unchanged.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "pribom/apk/dex.hpp"
#include "pribom/model.hpp"

namespace pribom::tpl {

inline constexpr double kDefaultThreshold = 0.8;

// Shape of one method: parameter count, return category and access kind.
struct MethodShape {
  int arity = 0;
  char return_category = 'V';  // V Z I J F L [
  std::string access;          // ctor clinit static abstract private virtual

  auto operator<=>(const MethodShape&) const = default;
  std::string render() const;
};

MethodShape method_shape(const apk::MethodDef& m);

struct ClassProfile {
  std::string class_name;
  std::string key;   // e.g. "interface|java.lang.Object|*"
  std::string hash;  // 16 hex digits over the sorted method shapes
};

// One profile per class in `dex`, ordered by class name. Supertypes that
// `dex` defines are written as "*".
std::vector<ClassProfile> profile_classes(const apk::DexModel& dex);

// FNV-1a 64 over the sorted shapes, as 16 lowercase hex digits.
std::string profile_hash(std::vector<MethodShape> shapes);

struct LibrarySignature {
  std::string name;
  std::string version;
  std::vector<std::string> package_prefixes;        // dotted, ending in '.'
  std::map<std::string, std::string> class_profiles;  // "<key>#<n>" -> hash

  // Throws pribom::Error if a required field is empty.
  void check() const;
};

void to_json(nlohmann::json& j, const LibrarySignature& s);
LibrarySignature signature_from_json(const nlohmann::json& j);

// Accepts {"signatures": [...]} or a bare array.
std::vector<LibrarySignature> signatures_from_json(const nlohmann::json& j);
std::vector<LibrarySignature> load_signatures(const std::filesystem::path& path);
nlohmann::json signatures_to_json(const std::vector<LibrarySignature>& sigs);

// Signature of a library's own dex. Without explicit prefixes, the longest
// package prefix shared by all classes is used.
LibrarySignature build_signature(const apk::DexModel& library, const std::string& name,
                                 const std::string& version, std::vector<std::string> prefixes = {});

struct DetectionResult {
  TplRecord record;
  std::vector<std::string> matched_classes;  // sorted

  bool operator==(const DetectionResult&) const = default;
};

// Matched signature profiles over the whole app, classes under the
// signature's prefixes preferred; confidence is matched / total.
DetectionResult match_signature(const std::vector<ClassProfile>& app, const LibrarySignature& sig);

// Libraries whose confidence reaches `threshold`, one version per library
// (highest confidence, then newest version), ordered by name. Throws
// pribom::Error on an empty database or a threshold outside (0, 1].
std::vector<DetectionResult> detect(const apk::DexModel& dex, const std::vector<LibrarySignature>& db,
                                    double threshold = kDefaultThreshold);

// Negative, zero or positive as `a` is older, equal or newer than `b`.
// Digit runs compare numerically, everything else lexicographically.
int compare_versions(const std::string& a, const std::string& b);

// Libraries per widget: a result attaches when one of its matched classes
// owns a method in the widget's reachable set.
std::map<std::uint32_t, std::vector<TplRecord>> attribute_to_widget(
    const std::vector<DetectionResult>& results, const std::map<std::uint32_t, std::set<MethodRef>>& reachable);

}  // namespace pribom::tpl
