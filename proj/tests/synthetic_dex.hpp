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

// Builders for in-memory DexModels used by tests that need class shapes
// the fixture APK does not have.

#pragma once

#include <string>
#include <vector>

#include "pribom/apk/dex.hpp"

namespace pribom::testing {

struct SynthCall {
  MethodRef target;
  apk::InvokeKind kind = apk::InvokeKind::virtual_call;
  std::vector<apk::RegValue> args;
};

inline MethodRef mref(const std::string& cls, const std::string& name,
                      std::vector<std::string> params = {}, const std::string& ret = "V") {
  return MethodRef{cls, name, std::move(params), ret};
}

class SynthDex {
 public:
  SynthDex& cls(const std::string& name, const std::string& super = "java.lang.Object",
                std::vector<std::string> interfaces = {}, std::uint32_t flags = apk::access::kPublic) {
    apk::ClassDef c;
    c.name = name;
    c.superclass = super;
    c.interfaces = std::move(interfaces);
    c.access_flags = flags;
    c.source = "synthetic.dex";
    model_.add_class(std::move(c));
    return *this;
  }

  SynthDex& method(const MethodRef& ref, std::vector<SynthCall> calls = {},
                   std::uint32_t flags = apk::access::kPublic) {
    apk::MethodDef m;
    m.ref = ref;
    m.access_flags = flags;
    if (!(flags & apk::access::kAbstract)) {
      apk::MethodBody body;
      std::uint32_t pc = 0;
      for (auto& c : calls) {
        apk::Invocation inv;
        inv.target = c.target;
        inv.kind = c.kind;
        inv.pc = pc;
        pc += 3;
        inv.args = c.args;
        body.invocations.push_back(std::move(inv));
      }
      m.body = std::move(body);
    }
    model_.add_method(std::move(m));
    return *this;
  }

  SynthDex& abstract_method(const MethodRef& ref) {
    return method(ref, {}, apk::access::kPublic | apk::access::kAbstract);
  }

  const apk::DexModel& model() const { return model_; }
  apk::DexModel take() { return std::move(model_); }

 private:
  apk::DexModel model_;
};

}  // namespace pribom::testing
