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

#include "pribom/callgraph/hierarchy.hpp"

#include <algorithm>
#include <deque>

namespace pribom::callgraph {
namespace {

const std::set<std::string> kEmpty;

std::string join_cycle(const std::vector<std::string>& cycle) {
  std::string out;
  for (const auto& c : cycle) {
    if (!out.empty()) out += " -> ";
    out += c;
  }
  return out;
}

std::string sig_key(const MethodRef& m) { return m.method_name + m.proto(); }

}  // namespace

HierarchyError::HierarchyError(std::vector<std::string> cycle)
    : Error("callgraph", "inheritance cycle: " + join_cycle(cycle)), cycle_(std::move(cycle)) {}

const apk::ClassDef* ClassHierarchy::class_def(const std::string& name) const {
  const auto it = classes_.find(name);
  return it == classes_.end() ? nullptr : it->second;
}

const std::set<std::string>& ClassHierarchy::subclasses(const std::string& name) const {
  const auto it = subclasses_.find(name);
  return it == subclasses_.end() ? kEmpty : it->second;
}

const std::set<std::string>& ClassHierarchy::implementors(const std::string& name) const {
  const auto it = implementors_.find(name);
  return it == implementors_.end() ? kEmpty : it->second;
}

std::set<std::string> ClassHierarchy::subtypes(const std::string& name) const {
  std::set<std::string> out;
  if (is_app_class(name)) out.insert(name);
  std::deque<std::string> work{name};
  while (!work.empty()) {
    const auto cur = std::move(work.front());
    work.pop_front();
    for (const auto* rel : {&subclasses(cur), &implementors(cur)}) {
      for (const auto& s : *rel) {
        if (out.insert(s).second) work.push_back(s);
      }
    }
  }
  return out;
}

std::vector<std::string> ClassHierarchy::superclass_chain(const std::string& name) const {
  std::vector<std::string> chain{name};
  const apk::ClassDef* c = class_def(name);
  while (c != nullptr && !c->superclass.empty()) {
    chain.push_back(c->superclass);
    c = class_def(c->superclass);
  }
  return chain;
}

std::set<std::string> ClassHierarchy::roots() const {
  std::set<std::string> out;
  for (const auto& [name, def] : classes_) {
    if (!def->is_interface() && !is_app_class(def->superclass)) out.insert(name);
  }
  return out;
}

const apk::MethodDef* ClassHierarchy::declared(const std::string& cls, const MethodRef& sig) const {
  const auto it = methods_.find({cls, sig_key(sig)});
  return it == methods_.end() ? nullptr : it->second;
}

std::optional<MethodRef> ClassHierarchy::resolve(const std::string& cls, const MethodRef& sig) const {
  for (const auto& c : superclass_chain(cls)) {
    MethodRef at = sig;
    at.class_name = c;
    if (!is_app_class(c)) return at;
    if (const auto* m = declared(c, sig)) {
      if (m->is_abstract()) return std::nullopt;
      return at;
    }
  }
  return std::nullopt;
}

ClassHierarchy build_class_hierarchy(const apk::DexModel& dex) {
  ClassHierarchy h;
  for (const auto& c : dex.classes()) h.classes_[c.name] = &c;
  for (const auto& c : dex.classes()) {
    if (!c.superclass.empty()) h.subclasses_[c.superclass].insert(c.name);
    for (const auto& i : c.interfaces) h.implementors_[i].insert(c.name);
  }
  for (const auto& m : dex.methods()) h.methods_[{m.ref.class_name, sig_key(m.ref)}] = &m;

  // Depth-first search over extends and implements edges between app types.
  enum class Mark { none, active, done };
  std::map<std::string, Mark> mark;
  std::vector<std::string> path;
  auto parents = [&](const std::string& n) {
    std::vector<std::string> out;
    const auto* def = h.class_def(n);
    if (def == nullptr) return out;
    if (h.is_app_class(def->superclass)) out.push_back(def->superclass);
    for (const auto& i : def->interfaces) {
      if (h.is_app_class(i)) out.push_back(i);
    }
    return out;
  };
  for (const auto& [start, _] : h.classes_) {
    if (mark[start] != Mark::none) continue;
    std::vector<std::pair<std::string, std::vector<std::string>>> stack;
    stack.emplace_back(start, parents(start));
    mark[start] = Mark::active;
    path.push_back(start);
    while (!stack.empty()) {
      auto& [node, pending] = stack.back();
      if (pending.empty()) {
        mark[node] = Mark::done;
        path.pop_back();
        stack.pop_back();
        continue;
      }
      const auto next = pending.back();
      pending.pop_back();
      const auto m = mark[next];
      if (m == Mark::active) {
        auto from = std::find(path.begin(), path.end(), next);
        std::vector<std::string> cycle(from, path.end());
        cycle.push_back(next);
        throw HierarchyError(std::move(cycle));
      }
      if (m == Mark::done) continue;
      mark[next] = Mark::active;
      path.push_back(next);
      stack.emplace_back(next, parents(next));
    }
  }
  return h;
}

}  // namespace pribom::callgraph
