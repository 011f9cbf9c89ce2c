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

#include "pribom/method_ref.hpp"

#include <algorithm>

#include "pribom/diagnostics.hpp"
#include "pribom/error.hpp"

namespace pribom {

std::string_view to_string(Severity s) {
  switch (s) {
    case Severity::info:
      return "info";
    case Severity::warning:
      return "warning";
    case Severity::error:
      return "error";
  }
  return "warning";
}

std::size_t Diagnostics::count_containing(std::string_view needle) const {
  return static_cast<std::size_t>(
      std::count_if(items_.begin(), items_.end(), [&](const Diagnostic& d) {
        return d.message.find(needle) != std::string::npos;
      }));
}

namespace descriptor {
namespace {

struct Primitive {
  char code;
  std::string_view name;
};

constexpr Primitive kPrimitives[] = {
    {'V', "void"}, {'Z', "boolean"}, {'B', "byte"},  {'S', "short"},
    {'C', "char"}, {'I', "int"},     {'J', "long"},  {'F', "float"},
    {'D', "double"},
};

// Length of the single descriptor starting at `s[0]`, or 0 if malformed.
std::size_t descriptor_length(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size() && s[i] == '[') ++i;
  if (i == s.size()) return 0;
  const char c = s[i];
  if (c == 'L') {
    const auto end = s.find(';', i);
    if (end == std::string_view::npos || end == i + 1) return 0;
    return end + 1;
  }
  for (const auto& p : kPrimitives) {
    if (p.code == c) {
      // void is only legal as a bare return type
      if (c == 'V' && i != 0) return 0;
      return i + 1;
    }
  }
  return 0;
}

}  // namespace

bool is_valid(std::string_view desc) {
  return !desc.empty() && descriptor_length(desc) == desc.size();
}

std::string pretty(std::string_view desc) {
  std::size_t dims = 0;
  while (dims < desc.size() && desc[dims] == '[') ++dims;
  std::string base;
  std::string_view rest = desc.substr(dims);
  if (!rest.empty() && rest.front() == 'L' && rest.back() == ';') {
    base = std::string(rest.substr(1, rest.size() - 2));
    std::replace(base.begin(), base.end(), '/', '.');
  } else if (rest.size() == 1) {
    for (const auto& p : kPrimitives) {
      if (p.code == rest[0]) base = std::string(p.name);
    }
  }
  if (base.empty()) base = std::string(rest);
  for (std::size_t i = 0; i < dims; ++i) base += "[]";
  return base;
}

std::string from_pretty(std::string_view name) {
  std::size_t dims = 0;
  while (name.size() >= 2 && name.substr(name.size() - 2) == "[]") {
    name.remove_suffix(2);
    ++dims;
  }
  if (name.empty()) throw Error("descriptor", "empty type name");
  std::string out(dims, '[');
  for (const auto& p : kPrimitives) {
    if (p.name == name) return out + p.code;
  }
  if (name.find_first_of(" ;()") != std::string_view::npos) {
    throw Error("descriptor", "invalid type name '" + std::string(name) + "'");
  }
  std::string cls(name);
  std::replace(cls.begin(), cls.end(), '.', '/');
  return out + "L" + cls + ";";
}

std::string class_name(std::string_view desc) {
  if (desc.size() >= 2 && desc.front() == 'L' && desc.back() == ';') {
    std::string out(desc.substr(1, desc.size() - 2));
    std::replace(out.begin(), out.end(), '/', '.');
    return out;
  }
  return std::string(desc);
}

std::string from_class_name(std::string_view dotted) {
  std::string out(dotted);
  std::replace(out.begin(), out.end(), '.', '/');
  return "L" + out + ";";
}

std::optional<std::vector<std::string>> split_list(std::string_view list) {
  std::vector<std::string> out;
  while (!list.empty()) {
    const auto n = descriptor_length(list);
    if (n == 0 || list[0] == 'V') return std::nullopt;
    out.emplace_back(list.substr(0, n));
    list.remove_prefix(n);
  }
  return out;
}

}  // namespace descriptor

std::string MethodRef::signature() const {
  std::string out = descriptor::pretty(return_descriptor) + " " + method_name + "(";
  for (std::size_t i = 0; i < param_descriptors.size(); ++i) {
    if (i) out += ",";
    out += descriptor::pretty(param_descriptors[i]);
  }
  return out + ")";
}

std::string MethodRef::render() const { return class_name + ": " + signature(); }

MethodRef MethodRef::parse(std::string_view s) {
  auto fail = [&](const char* why) -> MethodRef {
    throw Error("method-ref", std::string(why) + ": '" + std::string(s) + "'");
  };
  const auto colon = s.find(": ");
  if (colon == std::string_view::npos || colon == 0) return fail("missing owner");
  MethodRef ref;
  ref.class_name = std::string(s.substr(0, colon));
  std::string_view rest = s.substr(colon + 2);
  const auto space = rest.find(' ');
  const auto open = rest.find('(');
  if (space == std::string_view::npos || open == std::string_view::npos ||
      open < space || rest.back() != ')') {
    return fail("malformed signature");
  }
  ref.return_descriptor = descriptor::from_pretty(rest.substr(0, space));
  ref.method_name = std::string(rest.substr(space + 1, open - space - 1));
  if (ref.method_name.empty()) return fail("missing method name");
  std::string_view params = rest.substr(open + 1, rest.size() - open - 2);
  while (!params.empty()) {
    const auto comma = params.find(',');
    ref.param_descriptors.push_back(descriptor::from_pretty(params.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    params.remove_prefix(comma + 1);
  }
  return ref;
}

std::string MethodRef::proto() const {
  std::string out = "(";
  for (const auto& p : param_descriptors) out += p;
  return out + ")" + return_descriptor;
}

std::string MethodRef::method_path() const {
  return descriptor::from_class_name(class_name) + "-" + method_name + "-" + proto();
}

MethodRef MethodRef::parse_method_path(std::string_view path) {
  auto fail = [&]() -> MethodRef {
    throw Error("method-ref", "malformed method path '" + std::string(path) + "'");
  };
  const auto semi = path.find(";-");
  if (path.empty() || path[0] != 'L' || semi == std::string_view::npos) return fail();
  MethodRef ref;
  ref.class_name = descriptor::class_name(path.substr(0, semi + 1));
  std::string_view rest = path.substr(semi + 2);
  const auto dash = rest.find("-(");
  if (dash == std::string_view::npos || dash == 0) return fail();
  ref.method_name = std::string(rest.substr(0, dash));
  rest.remove_prefix(dash + 2);
  const auto close = rest.find(')');
  if (close == std::string_view::npos) return fail();
  auto params = descriptor::split_list(rest.substr(0, close));
  const auto ret = rest.substr(close + 1);
  if (!params || !descriptor::is_valid(ret)) return fail();
  ref.param_descriptors = std::move(*params);
  ref.return_descriptor = std::string(ret);
  return ref;
}

}  // namespace pribom
