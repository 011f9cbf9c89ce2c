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
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pribom/apk/byte_reader.hpp"
#include "pribom/method_ref.hpp"

namespace pribom::apk {

namespace access {
inline constexpr std::uint32_t kPublic = 0x0001;
inline constexpr std::uint32_t kPrivate = 0x0002;
inline constexpr std::uint32_t kProtected = 0x0004;
inline constexpr std::uint32_t kStatic = 0x0008;
inline constexpr std::uint32_t kFinal = 0x0010;
inline constexpr std::uint32_t kInterface = 0x0200;
inline constexpr std::uint32_t kAbstract = 0x0400;
inline constexpr std::uint32_t kSynthetic = 0x1000;
inline constexpr std::uint32_t kAnnotation = 0x2000;
inline constexpr std::uint32_t kEnum = 0x4000;
inline constexpr std::uint32_t kConstructor = 0x10000;
}  // namespace access

struct ClassDef {
  std::string name;        // dotted
  std::string superclass;  // dotted; empty for java.lang.Object itself
  std::vector<std::string> interfaces;
  std::uint32_t access_flags = 0;
  std::string source;      // dex member the class came from

  bool is_interface() const { return access_flags & access::kInterface; }
  bool is_abstract() const { return access_flags & access::kAbstract; }
};

enum class InvokeKind { virtual_call, super_call, direct, static_call, interface_call };

const char* to_string(InvokeKind k);

// Abstract register contents tracked by a linear scan of one method body.
struct RegValue {
  enum class Kind { unknown, int_const, string_const, class_const, new_instance, invoke_result, this_ref };
  Kind kind = Kind::unknown;
  std::int64_t number = 0;  // int_const value or invoke_result index
  std::string text;         // string_const text, or dotted type name

  static RegValue make_int(std::int64_t v) { return {Kind::int_const, v, {}}; }
  static RegValue make_text(Kind k, std::string t) { return {k, 0, std::move(t)}; }
  bool operator==(const RegValue&) const = default;
};

struct Invocation {
  MethodRef target;
  InvokeKind kind = InvokeKind::virtual_call;
  std::uint32_t pc = 0;  // code-unit offset in the body
  std::vector<std::uint16_t> registers;
  std::vector<RegValue> args;  // value of each register at the call site
};

struct MethodBody {
  std::uint16_t registers_size = 0;
  std::uint16_t ins_size = 0;
  std::uint32_t insns_size = 0;
  std::vector<Invocation> invocations;       // bytecode order
  std::vector<std::int32_t> int_constants;   // const/* literals in order
  std::vector<std::string> string_constants; // const-string operands in order
  std::vector<std::string> new_instances;    // new-instance types (dotted) in order
};

struct MethodDef {
  MethodRef ref;
  std::uint32_t access_flags = 0;
  std::optional<MethodBody> body;

  bool is_static() const { return access_flags & access::kStatic; }
  bool is_abstract() const { return access_flags & access::kAbstract; }
  bool is_private() const { return access_flags & access::kPrivate; }
  bool is_constructor() const { return access_flags & access::kConstructor; }
};

class DexModel {
 public:
  const std::vector<ClassDef>& classes() const noexcept { return classes_; }
  const std::vector<MethodDef>& methods() const noexcept { return methods_; }

  const ClassDef* find_class(const std::string& dotted) const;
  const MethodDef* find_method(const MethodRef& ref) const;
  std::vector<const MethodDef*> methods_of(const std::string& dotted) const;

  // Appends; throws pribom::Error on a duplicate class name.
  void add_class(ClassDef c);
  void add_method(MethodDef m);
  // Unions `other` into this model; duplicate class names are an error.
  void merge(DexModel other);

 private:
  std::vector<ClassDef> classes_;
  std::vector<MethodDef> methods_;
  std::map<std::string, std::size_t> class_index_;
  std::map<MethodRef, std::size_t> method_index_;
};

struct DexOptions {
  bool verify_checksum = true;
};

// Decodes one DEX file. Throws ParseError on malformed input.
DexModel parse_dex(Bytes data, const std::string& source = "classes.dex",
                   const DexOptions& options = {});

// Parses and unions several dex members (name, bytes) in order.
DexModel parse_multidex(const std::vector<std::pair<std::string, std::vector<std::uint8_t>>>& dexes,
                        const DexOptions& options = {});

// Code units of the instruction starting at insns[pc], payloads included.
// Returns 0 if the instruction does not fit.
std::size_t instruction_width(std::span<const std::uint16_t> insns, std::size_t pc);

}  // namespace pribom::apk
