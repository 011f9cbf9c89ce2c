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
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pribom/callgraph/hierarchy.hpp"
#include "pribom/diagnostics.hpp"

namespace pribom::callgraph {

// invoke-super is recorded as direct: it has exactly one target.
enum class EdgeKind { virtual_call, static_call, direct, interface_call };

std::string_view to_string(EdgeKind k);
EdgeKind edge_kind_of(apk::InvokeKind k);

struct CallEdge {
  MethodRef caller;
  MethodRef callee;
  EdgeKind kind = EdgeKind::virtual_call;

  bool operator==(const CallEdge&) const = default;
};

// Method-invocation graph. Nodes and edges iterate in MethodRef order.
// Immutable once built; queries are safe from several threads.
class CallGraph {
 public:
  using NodeId = std::uint32_t;

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept;

  const std::vector<MethodRef>& nodes() const noexcept { return nodes_; }
  bool contains(const MethodRef& m) const { return index_.count(m) != 0; }
  std::optional<NodeId> id_of(const MethodRef& m) const;
  const MethodRef& node(NodeId id) const { return nodes_.at(id); }

  // Successors of `id` with the call-site kind, ordered by callee.
  const std::vector<std::pair<NodeId, EdgeKind>>& out_edges(NodeId id) const { return adj_.at(id); }
  std::vector<MethodRef> callees(const MethodRef& m) const;

  // Every (caller, callee) pair once, ordered by caller then callee.
  std::vector<CallEdge> edges() const;

  // True for nodes outside the app (framework and platform methods).
  bool is_leaf(NodeId id) const { return leaf_.at(id); }

  // Reflective call sites per method, as "<api> <argument>" strings.
  const std::map<MethodRef, std::vector<std::string>>& reflection() const noexcept { return reflection_; }

  // "caller\tcallee\tkind" per edge, methods in rendered form.
  void dump(std::ostream& os) const;

  class Builder;

 private:
  std::vector<MethodRef> nodes_;
  std::map<MethodRef, NodeId> index_;
  std::vector<std::vector<std::pair<NodeId, EdgeKind>>> adj_;
  std::vector<bool> leaf_;
  std::map<MethodRef, std::vector<std::string>> reflection_;
};

// Accumulates nodes and edges in any order and freezes them into a sorted
// CallGraph. A repeated (caller, callee) pair keeps the lowest EdgeKind.
class CallGraph::Builder {
 public:
  void add_node(const MethodRef& m, bool leaf = false);
  void add_edge(const MethodRef& caller, const MethodRef& callee, EdgeKind kind, bool callee_is_leaf);
  void add_reflection(const MethodRef& m, std::string note);
  CallGraph build() &&;

 private:
  std::map<MethodRef, bool> nodes_;
  std::map<std::pair<MethodRef, MethodRef>, EdgeKind> edges_;
  std::map<MethodRef, std::vector<std::string>> reflection_;
};

// Methods a call site of `kind` on `target` may dispatch to. Virtual and
// interface calls get class hierarchy analysis: the implementation each
// app subtype of the target's class would run. Other kinds, and targets
// outside the app, have a single callee.
std::set<MethodRef> dispatch_targets(const ClassHierarchy& h, const MethodRef& target, apk::InvokeKind kind);

// Whole-app graph: every app method is a node; each invocation adds edges
// to its dispatch targets. Reflective calls are noted on the caller and
// reported to `diags`.
CallGraph build_call_graph(const apk::DexModel& dex, const ClassHierarchy& h, Diagnostics* diags = nullptr);

// `entry` and everything reachable from it. Empty, with a diagnostic, when
// `entry` is not a node.
std::set<MethodRef> reachable_methods(const CallGraph& g, const MethodRef& entry, Diagnostics* diags = nullptr);

// The subgraph induced by `keep`.
CallGraph induced_subgraph(const CallGraph& g, const std::set<MethodRef>& keep);

}  // namespace pribom::callgraph
