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

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pribom {

// Type descriptor helpers. Descriptors follow the DEX grammar:
// V Z B S C I J F D, L<binary/name>;, and [ prefixes for arrays.
namespace descriptor {

bool is_valid(std::string_view desc);

// "Ljava/lang/String;" -> "java.lang.String", "[I" -> "int[]".
std::string pretty(std::string_view desc);

// Inverse of pretty(). Throws pribom::Error on unknown primitive names.
std::string from_pretty(std::string_view pretty_name);

// "Lcom/example/Foo;" -> "com.example.Foo". Non-class descriptors are
// returned unchanged.
std::string class_name(std::string_view desc);

// "com.example.Foo" -> "Lcom/example/Foo;".
std::string from_class_name(std::string_view dotted);

// Splits a concatenated parameter list ("ILjava/lang/String;[J") into
// single descriptors. Returns nullopt if any element is malformed.
std::optional<std::vector<std::string>> split_list(std::string_view list);

}  // namespace descriptor

// A method reference. Ordering is lexicographic over all fields, which is
// the deterministic iteration order used by every graph and report.
struct MethodRef {
  std::string class_name;  // dotted, e.g. "android.location.LocationManager"
  std::string method_name;
  std::vector<std::string> param_descriptors;
  std::string return_descriptor;

  auto operator<=>(const MethodRef&) const = default;
  bool operator==(const MethodRef&) const = default;

  // "<class>: <ret> <name>(<p1>,<p2>)", e.g.
  // "com.example.Loc$1: void onClick(android.view.View)".
  std::string render() const;
  static MethodRef parse(std::string_view rendered);

  // Handler-style signature without the owner: "void onClick(android.view.View)".
  std::string signature() const;

  // "L<cls>;-<name>-(<params>)<ret>", the smali-like permission path form.
  std::string method_path() const;
  static MethodRef parse_method_path(std::string_view path);

  // "(<params>)<ret>".
  std::string proto() const;

  // Same name and proto; the owner is ignored.
  bool same_signature(const MethodRef& other) const {
    return method_name == other.method_name &&
           param_descriptors == other.param_descriptors &&
           return_descriptor == other.return_descriptor;
  }
};

}  // namespace pribom
