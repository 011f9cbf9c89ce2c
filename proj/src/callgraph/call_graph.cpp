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

#include "pribom/callgraph/call_graph.hpp"

#include <algorithm>
#include <array>
#include <deque>

namespace pribom::callgraph {
namespace {

constexpr const char* kModule = "callgraph";

struct ReflectiveApi {
  const char* cls;
  const char* name;
};

constexpr std::array<ReflectiveApi, 7> kReflectiveApis = {{
    {"java.lang.Class", "forName"},
    {"java.lang.Class", "newInstance"},
    {"java.lang.Class", "getMethod"},
    {"java.lang.Class", "getDeclaredMethod"},
    {"java.lang.ClassLoader", "loadClass"},
    {"java.lang.reflect.Method", "invoke"},
    {"java.lang.reflect.Constructor", "newInstance"},
}};

bool is_reflective(const MethodRef& m) {
  return std::any_of(kReflectiveApis.begin(), kReflectiveApis.end(), [&](const ReflectiveApi& api) {
    return m.class_name == api.cls && m.method_name == api.name;
  });
}

std::string reflection_note(const apk::Invocation& inv) {
  std::string note = inv.target.class_name + "." + inv.target.method_name;
  for (const auto& a : inv.args) {
    if (a.kind == apk::RegValue::Kind::string_const) return note + " \"" + a.text + "\"";
  }
  return note + " <unknown>";
}

// Subtype sets are shared by every call site naming the same class.
class SubtypeCache {
 public:
  explicit SubtypeCache(const ClassHierarchy& h) : h_(h) {}
  const std::set<std::string>& get(const std::string& cls) {
    auto it = cache_.find(cls);
    if (it == cache_.end()) it = cache_.emplace(cls, h_.subtypes(cls)).first;
    return it->second;
  }

 private:
  const ClassHierarchy& h_;
  std::map<std::string, std::set<std::string>> cache_;
};

std::set<MethodRef> targets_with(const ClassHierarchy& h, SubtypeCache& cache, const MethodRef& target,
                                 apk::InvokeKind kind) {
  if (!h.is_app_class(target.class_name)) return {target};
  std::set<MethodRef> out;
  const bool dispatch = kind == apk::InvokeKind::virtual_call || kind == apk::InvokeKind::interface_call;
  if (dispatch) {
    for (const auto& s : cache.get(target.class_name)) {
      const auto* def = h.class_def(s);
      if (def != nullptr && def->is_interface()) continue;
      if (auto r = h.resolve(s, target)) out.insert(std::move(*r));
    }
  } else if (auto r = h.resolve(target.class_name, target)) {
    out.insert(std::move(*r));
  }
  if (out.empty()) out.insert(target);
  return out;
}

}  // namespace

std::string_view to_string(EdgeKind k) {
  switch (k) {
    case EdgeKind::virtual_call: return "virtual";
    case EdgeKind::static_call: return "static";
    case EdgeKind::direct: return "direct";
    case EdgeKind::interface_call: return "interface";
  }
  return "virtual";
}

EdgeKind edge_kind_of(apk::InvokeKind k) {
  switch (k) {
    case apk::InvokeKind::virtual_call: return EdgeKind::virtual_call;
    case apk::InvokeKind::static_call: return EdgeKind::static_call;
    case apk::InvokeKind::interface_call: return EdgeKind::interface_call;
    case apk::InvokeKind::direct:
    case apk::InvokeKind::super_call: return EdgeKind::direct;
  }
  return EdgeKind::virtual_call;
}

std::size_t CallGraph::edge_count() const noexcept {
  std::size_t n = 0;
  for (const auto& a : adj_) n += a.size();
  return n;
}

std::optional<CallGraph::NodeId> CallGraph::id_of(const MethodRef& m) const {
  const auto it = index_.find(m);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<MethodRef> CallGraph::callees(const MethodRef& m) const {
  std::vector<MethodRef> out;
  if (const auto id = id_of(m)) {
    for (const auto& [to, _] : adj_[*id]) out.push_back(nodes_[to]);
  }
  return out;
}

std::vector<CallEdge> CallGraph::edges() const {
  std::vector<CallEdge> out;
  for (NodeId from = 0; from < nodes_.size(); ++from) {
    for (const auto& [to, kind] : adj_[from]) out.push_back({nodes_[from], nodes_[to], kind});
  }
  return out;
}

void CallGraph::dump(std::ostream& os) const {
  for (NodeId from = 0; from < nodes_.size(); ++from) {
    const auto caller = nodes_[from].render();
    for (const auto& [to, kind] : adj_[from]) {
      os << caller << '\t' << nodes_[to].render() << '\t' << to_string(kind) << '\n';
    }
  }
}

void CallGraph::Builder::add_node(const MethodRef& m, bool leaf) {
  auto [it, inserted] = nodes_.emplace(m, leaf);
  // A method known to be in the app is never downgraded to a leaf.
  if (!inserted && !leaf) it->second = false;
}

void CallGraph::Builder::add_edge(const MethodRef& caller, const MethodRef& callee, EdgeKind kind,
                                  bool callee_is_leaf) {
  nodes_.emplace(caller, false);
  add_node(callee, callee_is_leaf);
  auto [it, inserted] = edges_.emplace(std::make_pair(caller, callee), kind);
  if (!inserted) it->second = std::min(it->second, kind);
}

void CallGraph::Builder::add_reflection(const MethodRef& m, std::string note) {
  reflection_[m].push_back(std::move(note));
}

CallGraph CallGraph::Builder::build() && {
  CallGraph g;
  g.nodes_.reserve(nodes_.size());
  for (const auto& [m, leaf] : nodes_) {
    g.index_.emplace(m, static_cast<NodeId>(g.nodes_.size()));
    g.nodes_.push_back(m);
    g.leaf_.push_back(leaf);
  }
  g.adj_.resize(g.nodes_.size());
  // edges_ is ordered by (caller, callee), so each list comes out sorted.
  for (const auto& [pair, kind] : edges_) {
    g.adj_[g.index_.at(pair.first)].emplace_back(g.index_.at(pair.second), kind);
  }
  g.reflection_ = std::move(reflection_);
  return g;
}

std::set<MethodRef> dispatch_targets(const ClassHierarchy& h, const MethodRef& target, apk::InvokeKind kind) {
  SubtypeCache cache(h);
  return targets_with(h, cache, target, kind);
}

CallGraph build_call_graph(const apk::DexModel& dex, const ClassHierarchy& h, Diagnostics* diags) {
  CallGraph::Builder b;
  SubtypeCache cache(h);
  for (const auto& m : dex.methods()) b.add_node(m.ref, false);
  for (const auto& m : dex.methods()) {
    if (!m.body) continue;
    for (const auto& inv : m.body->invocations) {
      if (is_reflective(inv.target)) {
        auto note = reflection_note(inv);
        if (diags != nullptr) {
          diags->info(kModule, "reflective call " + note + " in " + m.ref.render() + " is not resolved");
        }
        b.add_reflection(m.ref, std::move(note));
      }
      const auto kind = edge_kind_of(inv.kind);
      for (const auto& t : targets_with(h, cache, inv.target, inv.kind)) {
        b.add_edge(m.ref, t, kind, dex.find_method(t) == nullptr);
      }
    }
  }
  return std::move(b).build();
}

std::set<MethodRef> reachable_methods(const CallGraph& g, const MethodRef& entry, Diagnostics* diags) {
  std::set<MethodRef> out;
  const auto start = g.id_of(entry);
  if (!start) {
    if (diags != nullptr) diags->warn(kModule, "entry point " + entry.render() + " is not in the call graph");
    return out;
  }
  std::vector<bool> seen(g.node_count(), false);
  std::deque<CallGraph::NodeId> work{*start};
  seen[*start] = true;
  while (!work.empty()) {
    const auto cur = work.front();
    work.pop_front();
    out.insert(g.node(cur));
    for (const auto& [to, _] : g.out_edges(cur)) {
      if (!seen[to]) {
        seen[to] = true;
        work.push_back(to);
      }
    }
  }
  return out;
}

CallGraph induced_subgraph(const CallGraph& g, const std::set<MethodRef>& keep) {
  CallGraph::Builder b;
  for (const auto& m : keep) {
    const auto id = g.id_of(m);
    if (!id) continue;
    b.add_node(m, g.is_leaf(*id));
    for (const auto& [to, kind] : g.out_edges(*id)) {
      if (keep.count(g.node(to))) b.add_edge(m, g.node(to), kind, g.is_leaf(to));
    }
  }
  for (const auto& [m, notes] : g.reflection()) {
    if (!keep.count(m)) continue;
    for (const auto& n : notes) b.add_reflection(m, n);
  }
  return std::move(b).build();
}

}  // namespace pribom::callgraph
