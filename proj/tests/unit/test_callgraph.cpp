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

#include <gtest/gtest.h>

#include <sstream>

#include "cha_oracle.hpp"
#include "pribom/apk/apk.hpp"
#include "pribom/callgraph/call_graph.hpp"
#include "test_support.hpp"

namespace pribom::callgraph {
namespace {

using pribom::testing::ChaOracle;
using pribom::testing::mref;
using pribom::testing::SynthDex;

const apk::DexModel& fixture_dex() {
  static const apk::LoadedApk apk = [] {
    Diagnostics d;
    return apk::load_apk(pribom::testing::fixture("fixture.apk"), d);
  }();
  return apk.dex;
}

std::set<std::pair<MethodRef, MethodRef>> pairs(const CallGraph& g) {
  std::set<std::pair<MethodRef, MethodRef>> out;
  for (const auto& e : g.edges()) out.emplace(e.caller, e.callee);
  return out;
}

TEST(Hierarchy, DirectSubclasses) {
  SynthDex s;
  s.cls("A").cls("B", "A").cls("C", "A");
  const auto h = build_class_hierarchy(s.model());
  EXPECT_EQ(h.subclasses("A"), (std::set<std::string>{"B", "C"}));
  EXPECT_EQ(h.subtypes("A"), (std::set<std::string>{"A", "B", "C"}));
  EXPECT_EQ(h.roots(), std::set<std::string>{"A"});
}

TEST(Hierarchy, CycleIsRejected) {
  SynthDex s;
  s.cls("A", "B").cls("B", "A");
  try {
    build_class_hierarchy(s.model());
    FAIL() << "expected HierarchyError";
  } catch (const HierarchyError& e) {
    EXPECT_EQ(e.cycle().front(), e.cycle().back());
    EXPECT_EQ(e.cycle().size(), 3u);
  }
}

TEST(Hierarchy, InterfaceCycleIsRejected) {
  SynthDex s;
  const auto iface = apk::access::kPublic | apk::access::kInterface | apk::access::kAbstract;
  s.cls("I", "java.lang.Object", {"J"}, iface).cls("J", "java.lang.Object", {"I"}, iface);
  EXPECT_THROW(build_class_hierarchy(s.model()), HierarchyError);
}

TEST(Hierarchy, FixtureActivityRootsAtFramework) {
  const auto h = build_class_hierarchy(fixture_dex());
  const auto chain = h.superclass_chain("com.example.MainActivity");
  const std::vector<std::string> expected = {"com.example.MainActivity", "com.example.BaseActivity",
                                             "android.app.Activity"};
  EXPECT_EQ(chain, expected);
  EXPECT_FALSE(h.is_app_class(chain.back()));
  EXPECT_TRUE(h.roots().count("com.example.BaseActivity"));
  EXPECT_EQ(h.implementors("android.view.View$OnClickListener"),
            (std::set<std::string>{"com.example.Loc$1", "com.example.MainActivity"}));
}

TEST(Hierarchy, ResolveWalksUpAndStopsAtAbstract) {
  SynthDex s;
  s.cls("A", "android.app.Activity").method(mref("A", "m"));
  s.cls("B", "A", {}, apk::access::kPublic | apk::access::kAbstract).abstract_method(mref("B", "m"));
  s.cls("C", "B");
  s.cls("D", "A");
  const auto h = build_class_hierarchy(s.model());
  EXPECT_EQ(h.resolve("D", mref("D", "m")), mref("A", "m"));
  EXPECT_EQ(h.resolve("C", mref("C", "m")), std::nullopt);
  EXPECT_EQ(h.resolve("D", mref("D", "finish")), mref("android.app.Activity", "finish"));
}

TEST(CallGraph, VirtualCallReachesOverrides) {
  SynthDex s;
  s.cls("A").method(mref("A", "m"));
  s.cls("B", "A").method(mref("B", "m"));
  s.cls("C", "A").method(mref("C", "m"));
  s.cls("X").method(mref("X", "caller"), {{mref("A", "m"), apk::InvokeKind::virtual_call, {}}});
  const auto g = build_call_graph(s.model(), build_class_hierarchy(s.model()));
  EXPECT_EQ(g.callees(mref("X", "caller")),
            (std::vector<MethodRef>{mref("A", "m"), mref("B", "m"), mref("C", "m")}));
}

TEST(CallGraph, StaticCallHasOneEdge) {
  SynthDex s;
  s.cls("A").method(mref("A", "m"), {}, apk::access::kPublic | apk::access::kStatic);
  s.cls("B", "A").method(mref("B", "m"), {}, apk::access::kPublic | apk::access::kStatic);
  s.cls("C", "A");
  s.cls("X").method(mref("X", "caller"), {{mref("A", "m"), apk::InvokeKind::static_call, {}}});
  const auto g = build_call_graph(s.model(), build_class_hierarchy(s.model()));
  EXPECT_EQ(g.callees(mref("X", "caller")), std::vector<MethodRef>{mref("A", "m")});
}

TEST(CallGraph, InterfaceCallAndInheritedImplementation) {
  SynthDex s;
  const auto iface = apk::access::kPublic | apk::access::kInterface | apk::access::kAbstract;
  s.cls("I", "java.lang.Object", {}, iface).abstract_method(mref("I", "run"));
  s.cls("Base").method(mref("Base", "run"));
  s.cls("Impl", "Base", {"I"});
  s.cls("X").method(mref("X", "caller"), {{mref("I", "run"), apk::InvokeKind::interface_call, {}}});
  const auto g = build_call_graph(s.model(), build_class_hierarchy(s.model()));
  EXPECT_EQ(g.callees(mref("X", "caller")), std::vector<MethodRef>{mref("Base", "run")});
}

TEST(CallGraph, NoInvocationsMeansNoOutEdges) {
  SynthDex s;
  s.cls("A").method(mref("A", "quiet"));
  const auto g = build_call_graph(s.model(), build_class_hierarchy(s.model()));
  ASSERT_TRUE(g.contains(mref("A", "quiet")));
  EXPECT_TRUE(g.callees(mref("A", "quiet")).empty());
  EXPECT_EQ(g.edge_count(), 0u);
}

TEST(CallGraph, FrameworkCallsAreLeaves) {
  const auto& dex = fixture_dex();
  const auto g = build_call_graph(dex, build_class_hierarchy(dex));
  const auto glk = MethodRef::parse_method_path(
      "Landroid/location/LocationManager;-getLastKnownLocation-(Ljava/lang/String;)Landroid/location/Location;");
  const auto id = g.id_of(glk);
  ASSERT_TRUE(id.has_value());
  EXPECT_TRUE(g.is_leaf(*id));
  EXPECT_TRUE(g.out_edges(*id).empty());
  // Inherited framework method resolves to the first framework ancestor.
  const auto on_click = mref("com.example.MainActivity", "onClick", {"Landroid/view/View;"});
  const auto callees = g.callees(on_click);
  EXPECT_NE(std::find(callees.begin(), callees.end(),
                      mref("android.app.Activity", "getSystemService", {"Ljava/lang/String;"}, "Ljava/lang/Object;")),
            callees.end());
}

TEST(CallGraph, ReflectionIsNotedWithoutEdges) {
  const auto& dex = fixture_dex();
  Diagnostics d;
  const auto g = build_call_graph(dex, build_class_hierarchy(dex), &d);
  const auto on_create = mref("com.example.MainActivity", "onCreate", {"Landroid/os/Bundle;"});
  ASSERT_TRUE(g.reflection().count(on_create));
  EXPECT_EQ(g.reflection().at(on_create), std::vector<std::string>{"java.lang.Class.forName \"com.example.Plugin\""});
  EXPECT_EQ(d.count_containing("reflective call"), 1u);
  for (const auto& c : g.callees(on_create)) EXPECT_NE(c.class_name, "com.example.Plugin");
}

TEST(CallGraph, SuperCallIsDirect) {
  const auto& dex = fixture_dex();
  const auto g = build_call_graph(dex, build_class_hierarchy(dex));
  const auto on_create = mref("com.example.MainActivity", "onCreate", {"Landroid/os/Bundle;"});
  const auto base = mref("android.app.Activity", "onCreate", {"Landroid/os/Bundle;"});
  bool found = false;
  for (const auto& e : g.edges()) {
    if (e.caller == on_create && e.callee == base) {
      found = true;
      EXPECT_EQ(e.kind, EdgeKind::direct);
    }
  }
  EXPECT_TRUE(found);
}

TEST(CallGraph, DumpFormat) {
  SynthDex s;
  s.cls("a.A").method(mref("a.A", "f"), {{mref("a.A", "g"), apk::InvokeKind::static_call, {}}});
  s.method(mref("a.A", "g"), {}, apk::access::kPublic | apk::access::kStatic);
  const auto g = build_call_graph(s.model(), build_class_hierarchy(s.model()));
  std::ostringstream os;
  g.dump(os);
  EXPECT_EQ(os.str(), "a.A: void f()\ta.A: void g()\tstatic\n");
}

TEST(Reachable, IsolatedEntry) {
  SynthDex s;
  s.cls("A").method(mref("A", "quiet"));
  const auto g = build_call_graph(s.model(), build_class_hierarchy(s.model()));
  EXPECT_EQ(reachable_methods(g, mref("A", "quiet")), std::set<MethodRef>{mref("A", "quiet")});
}

TEST(Reachable, CycleTerminates) {
  SynthDex s;
  s.cls("A")
      .method(mref("A", "a"), {{mref("A", "b"), apk::InvokeKind::direct, {}}})
      .method(mref("A", "b"), {{mref("A", "a"), apk::InvokeKind::direct, {}}});
  const auto g = build_call_graph(s.model(), build_class_hierarchy(s.model()));
  EXPECT_EQ(reachable_methods(g, mref("A", "a")), (std::set<MethodRef>{mref("A", "a"), mref("A", "b")}));
}

TEST(Reachable, UnknownEntryIsEmptyWithDiagnostic) {
  SynthDex s;
  s.cls("A").method(mref("A", "a"));
  const auto g = build_call_graph(s.model(), build_class_hierarchy(s.model()));
  Diagnostics d;
  EXPECT_TRUE(reachable_methods(g, mref("A", "zzz"), &d).empty());
  EXPECT_EQ(d.size(), 1u);
}

TEST(Reachable, FixtureOnClickReachesLocationApi) {
  const auto& dex = fixture_dex();
  const auto g = build_call_graph(dex, build_class_hierarchy(dex));
  const auto glk = MethodRef::parse_method_path(
      "Landroid/location/LocationManager;-getLastKnownLocation-(Ljava/lang/String;)Landroid/location/Location;");
  for (const auto& entry : {mref("com.example.MainActivity", "onClick", {"Landroid/view/View;"}),
                            mref("com.example.MainActivity", "onLocate", {"Landroid/view/View;"}),
                            mref("com.example.Loc$1", "onClick", {"Landroid/view/View;"})}) {
    EXPECT_TRUE(reachable_methods(g, entry).count(glk)) << entry.render();
  }
}

TEST(Reachable, InducedSubgraphKeepsInternalEdges) {
  const auto& dex = fixture_dex();
  const auto g = build_call_graph(dex, build_class_hierarchy(dex));
  const auto entry = mref("com.example.Loc$1", "onClick", {"Landroid/view/View;"});
  const auto keep = reachable_methods(g, entry);
  const auto sub = induced_subgraph(g, keep);
  EXPECT_EQ(sub.node_count(), keep.size());
  for (const auto& e : g.edges()) {
    const bool inside = keep.count(e.caller) && keep.count(e.callee);
    EXPECT_EQ(pairs(sub).count({e.caller, e.callee}) == 1, inside);
  }
}

TEST(Oracle, RandomModelsMatchBruteForce) {
  std::mt19937 rng(20261016);
  std::size_t total_edges = 0, dispatched = 0;
  for (int round = 0; round < 40; ++round) {
    const auto dex = pribom::testing::random_class_model(rng);
    ASSERT_LE(dex.methods().size(), 50u);
    const auto g = build_call_graph(dex, build_class_hierarchy(dex));
    std::set<pribom::testing::OracleEdge> got;
    for (const auto& e : g.edges()) got.emplace(e.caller, e.callee, static_cast<int>(e.kind));
    EXPECT_EQ(got, ChaOracle(dex).edges()) << "round " << round;
    total_edges += got.size();
    for (const auto& m : dex.methods()) {
      if (!m.body) continue;
      for (const auto& inv : m.body->invocations) {
        dispatched += dispatch_targets(build_class_hierarchy(dex), inv.target, inv.kind).size() > 1;
      }
    }

    // Every edge endpoint is a node; reachable sets are closed.
    for (const auto& e : g.edges()) {
      EXPECT_TRUE(g.contains(e.caller));
      EXPECT_TRUE(g.contains(e.callee));
    }
    for (const auto& n : g.nodes()) {
      const auto r = reachable_methods(g, n);
      EXPECT_TRUE(r.count(n));
      for (const auto& m : r) {
        for (const auto& c : g.callees(m)) EXPECT_TRUE(r.count(c));
      }
    }
  }
  // The models must exercise multi-target dispatch, not just trivial calls.
  EXPECT_GT(total_edges, 400u);
  EXPECT_GT(dispatched, 20u);
}

TEST(Oracle, AddingEdgesNeverShrinksReachability) {
  std::mt19937 rng(7);
  auto node = [](int i) { return mref("g.N", "f" + std::to_string(i)); };
  for (int round = 0; round < 30; ++round) {
    const int n = 12;
    std::vector<std::pair<int, int>> edges;
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int k = 0; k < 18; ++k) edges.emplace_back(pick(rng), pick(rng));
    auto build = [&](std::size_t count) {
      CallGraph::Builder b;
      for (int i = 0; i < n; ++i) b.add_node(node(i));
      for (std::size_t k = 0; k < count; ++k) {
        b.add_edge(node(edges[k].first), node(edges[k].second), EdgeKind::static_call, false);
      }
      return std::move(b).build();
    };
    for (std::size_t k = 0; k < edges.size(); ++k) {
      const auto before = build(k);
      const auto after = build(k + 1);
      for (int i = 0; i < n; ++i) {
        const auto a = reachable_methods(before, node(i));
        const auto b = reachable_methods(after, node(i));
        EXPECT_TRUE(std::includes(b.begin(), b.end(), a.begin(), a.end()));
      }
    }
  }
}

TEST(CallGraph, DeterministicAcrossBuilds) {
  const auto& dex = fixture_dex();
  std::ostringstream a, b;
  build_call_graph(dex, build_class_hierarchy(dex)).dump(a);
  build_call_graph(dex, build_class_hierarchy(dex)).dump(b);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_FALSE(a.str().empty());
}

}  // namespace
}  // namespace pribom::callgraph
