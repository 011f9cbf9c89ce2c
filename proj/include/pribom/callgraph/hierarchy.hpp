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

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pribom/apk/dex.hpp"
#include "pribom/error.hpp"

namespace pribom::callgraph {

// Raised when app classes inherit from each other in a loop.
class HierarchyError : public Error {
 public:
  explicit HierarchyError(std::vector<std::string> cycle);
  const std::vector<std::string>& cycle() const noexcept { return cycle_; }

 private:
  std::vector<std::string> cycle_;
};

// Type relations over the app's classes. Types the app references but does
// not define (framework, platform libraries) are opaque: they appear as
// parents but have no parents of their own.
class ClassHierarchy {
 public:
  ClassHierarchy() = default;

  bool is_app_class(const std::string& name) const { return classes_.count(name) != 0; }
  const apk::ClassDef* class_def(const std::string& name) const;

  // Direct app subclasses of `name`, which may itself be a framework class.
  const std::set<std::string>& subclasses(const std::string& name) const;
  // App classes and interfaces that list `name` among their interfaces.
  const std::set<std::string>& implementors(const std::string& name) const;

  // `name` (when an app class) plus every app type below it through
  // extends and implements edges.
  std::set<std::string> subtypes(const std::string& name) const;

  // `name`, its superclass, and so on, ending at the first class that is
  // not part of the app. The first element is always `name`.
  std::vector<std::string> superclass_chain(const std::string& name) const;

  // App classes whose superclass is not an app class.
  std::set<std::string> roots() const;

  // The method that runs when `sig` is invoked on an object of class `cls`:
  // the first declaration found walking up the superclass chain. A
  // framework ancestor is assumed to define it. Returns nullopt if the
  // first declaration found is abstract or the chain ends without one.
  std::optional<MethodRef> resolve(const std::string& cls, const MethodRef& sig) const;

  // The method `cls` itself declares with `sig`'s name and proto.
  const apk::MethodDef* declared(const std::string& cls, const MethodRef& sig) const;

  friend ClassHierarchy build_class_hierarchy(const apk::DexModel& dex);

 private:
  std::map<std::string, const apk::ClassDef*> classes_;
  std::map<std::string, std::set<std::string>> subclasses_;
  std::map<std::string, std::set<std::string>> implementors_;
  // (class, name + proto) -> declaration
  std::map<std::pair<std::string, std::string>, const apk::MethodDef*> methods_;
};

// The returned hierarchy points into `dex`, which must outlive it.
// Throws HierarchyError on an inheritance cycle among app classes.
ClassHierarchy build_class_hierarchy(const apk::DexModel& dex);

}  // namespace pribom::callgraph
