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

#include "httplib.h"

#include <algorithm>
#include <random>
#include <thread>

#include "pribom/apk/apk.hpp"
#include "pribom/callgraph/call_graph.hpp"
#include "pribom/io.hpp"
#include "pribom/tpl/detector.hpp"
#include "pribom/tpl/metadata.hpp"
#include "synthetic_dex.hpp"
#include "test_support.hpp"

namespace pribom::tpl {
namespace {

using pribom::testing::mref;
using pribom::testing::SynthDex;

const std::vector<LibrarySignature>& bundled() {
  static const auto db = load_signatures(asset_path("tpl_signatures.json"));
  return db;
}

apk::DexModel load_dex_file(const std::string& rel) {
  const auto bytes = pribom::testing::read_bytes(pribom::testing::fixture(rel));
  return apk::parse_dex(apk::Bytes(bytes.data(), bytes.size()), rel);
}

const apk::LoadedApk& fixture_apk() {
  static const auto apk = [] {
    Diagnostics d;
    return apk::load_apk(pribom::testing::fixture("fixture.apk"), d);
  }();
  return apk;
}

// Library with `n` classes of distinct shapes: class i has i + 1 methods of
// arity i % 3. Every third class extends the previous one.
SynthDex synthetic_library(const std::string& pkg, int n, int skip_from = -1) {
  SynthDex lib;
  for (int i = 0; i < n; ++i) {
    if (skip_from >= 0 && i >= skip_from) break;
    const std::string name = pkg + "C" + std::to_string(i);
    const std::string super = (i % 3 == 2) ? pkg + "C" + std::to_string(i - 1) : "java.lang.Object";
    lib.cls(name, super);
    for (int k = 0; k <= i; ++k) {
      lib.method(mref(name, "m" + std::to_string(k), std::vector<std::string>(i % 3, "I")));
    }
  }
  return lib;
}

// Brute-force multiset intersection of (key, hash) pairs.
std::size_t oracle_matches(const apk::DexModel& app, const LibrarySignature& sig) {
  std::map<std::pair<std::string, std::string>, int> have;
  for (const auto& p : profile_classes(app)) ++have[{p.key, p.hash}];
  std::map<std::pair<std::string, std::string>, int> want;
  for (const auto& [k, h] : sig.class_profiles) ++want[{k.substr(0, k.rfind('#')), h}];
  std::size_t n = 0;
  for (const auto& [k, c] : want) {
    const auto it = have.find(k);
    if (it != have.end()) n += static_cast<std::size_t>(std::min(c, it->second));
  }
  return n;
}

TEST(Profiles, ShapeIgnoresNames) {
  SynthDex a, b;
  a.cls("x.A").method(mref("x.A", "run", {"I", "Ljava/lang/String;"}, "Z"));
  b.cls("y.Zq").method(mref("y.Zq", "q", {"J", "[B"}, "C"));
  const auto pa = profile_classes(a.model()), pb = profile_classes(b.model());
  ASSERT_EQ(pa.size(), 1u);
  EXPECT_EQ(pa[0].key, "class|java.lang.Object|");
  EXPECT_EQ(pa[0].key, pb[0].key);
  // Z and the byte/char/short/int group differ.
  EXPECT_NE(pa[0].hash, pb[0].hash);
  SynthDex c;
  c.cls("y.Zq").method(mref("y.Zq", "q", {"J", "[B"}, "Z"));
  EXPECT_EQ(pa[0].hash, profile_classes(c.model())[0].hash);
}

TEST(Profiles, InternalSupertypesAreErased) {
  SynthDex d;
  d.cls("p.I", "java.lang.Object", {}, apk::access::kPublic | apk::access::kInterface | apk::access::kAbstract)
      .cls("p.Base", "android.view.View", {"p.I", "java.lang.Runnable"})
      .cls("p.Impl", "p.Base");
  const auto ps = profile_classes(d.model());
  ASSERT_EQ(ps.size(), 3u);
  EXPECT_EQ(ps[0].class_name, "p.Base");
  EXPECT_EQ(ps[0].key, "class|android.view.View|*,java.lang.Runnable");
  EXPECT_EQ(ps[1].key, "interface|java.lang.Object|");
  EXPECT_EQ(ps[2].key, "class|*|");
}

TEST(Profiles, HashIsFnv1a) {
  // Empty input is the FNV-1a 64 offset basis; "0:V:ctor;" checked by hand.
  EXPECT_EQ(profile_hash({}), "cbf29ce484222325");
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : std::string("0:V:ctor;")) {
    h = (h ^ c) * 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  EXPECT_EQ(profile_hash({MethodShape{0, 'V', "ctor"}}), buf);
}

TEST(Signatures, BundledMatchLibraryFixtures) {
  const auto inject = build_signature(load_dex_file("libs/javax.inject-1.dex"), "javax.inject", "1");
  EXPECT_EQ(inject.package_prefixes, std::vector<std::string>{"javax.inject."});
  EXPECT_EQ(inject.class_profiles.size(), 6u);
  const auto applovin =
      build_signature(load_dex_file("libs/applovin-fixture.dex"), "applovin-sdk", "0.0.0-fixture", {"com.applovin"});
  EXPECT_EQ(applovin.package_prefixes, std::vector<std::string>{"com.applovin."});
  ASSERT_EQ(bundled().size(), 2u);
  nlohmann::json got = bundled(), want = std::vector<LibrarySignature>{applovin, inject};
  EXPECT_EQ(got, want);
}

TEST(Signatures, JsonRoundTripAndValidation) {
  const auto& s = bundled().front();
  nlohmann::json j = s;
  nlohmann::json again = signature_from_json(j);
  EXPECT_EQ(again, j);
  EXPECT_EQ(signatures_from_json(nlohmann::json::array({j})).size(), 1u);
  auto bad = j;
  bad["class_profiles"] = nlohmann::json::object();
  EXPECT_THROW(signature_from_json(bad), Error);
  bad = j;
  bad["package_prefixes"] = nlohmann::json::array();
  EXPECT_THROW(signature_from_json(bad), Error);
  bad = j;
  bad.erase("version");
  EXPECT_THROW(signature_from_json(bad), Error);
  EXPECT_THROW(signatures_from_json(nlohmann::json::object()), Error);
}

TEST(Detect, FixtureLibraries) {
  const auto results = detect(fixture_apk().dex, bundled());
  ASSERT_EQ(results.size(), 2u);
  EXPECT_EQ(results[0].record.name, "applovin-sdk");
  EXPECT_EQ(results[0].record.confidence, 1.0);
  EXPECT_EQ(results[1].record.name, "javax.inject");
  EXPECT_EQ(results[1].record.version, "1");
  EXPECT_EQ(results[1].record.confidence, 1.0);
  const std::vector<std::string> inject = {"javax.inject.Inject",    "javax.inject.Named", "javax.inject.Provider",
                                           "javax.inject.Qualifier", "javax.inject.Scope", "javax.inject.Singleton"};
  EXPECT_EQ(results[1].matched_classes, inject);
}

TEST(Detect, NoLibraryClasses) {
  SynthDex d;
  d.cls("com.example.Only").method(mref("com.example.Only", "<init>"), {}, apk::access::kPublic | apk::access::kConstructor);
  EXPECT_TRUE(detect(d.model(), bundled()).empty());
}

TEST(Detect, Errors) {
  EXPECT_THROW(detect(fixture_apk().dex, {}), Error);
  EXPECT_THROW(detect(fixture_apk().dex, bundled(), 0.0), Error);
  EXPECT_THROW(detect(fixture_apk().dex, bundled(), 1.01), Error);
  EXPECT_NO_THROW(detect(fixture_apk().dex, bundled(), 1.0));
}

TEST(Detect, SevenOfTenProfiles) {
  const auto sig = build_signature(synthetic_library("org.lib.", 10).model(), "org.lib", "3.1");
  ASSERT_EQ(sig.class_profiles.size(), 10u);
  const auto app = synthetic_library("org.lib.", 10, 7);
  EXPECT_EQ(oracle_matches(app.model(), sig), 7u);
  EXPECT_TRUE(detect(app.model(), {sig}, 0.8).empty());
  const auto low = detect(app.model(), {sig}, 0.6);
  ASSERT_EQ(low.size(), 1u);
  EXPECT_DOUBLE_EQ(low[0].record.confidence, 0.7);
  EXPECT_EQ(low[0].matched_classes.size(), 7u);
}

TEST(Detect, AgreesWithBruteForceOnRandomApps) {
  std::mt19937 rng(4242);
  for (int round = 0; round < 30; ++round) {
    const int n = 2 + static_cast<int>(rng() % 12);
    const auto sig = build_signature(synthetic_library("lib.r.", n).model(), "lib.r", "1");
    // App: a random prefix of the library under another package, plus noise.
    const int keep = static_cast<int>(rng() % (n + 1));
    auto app = synthetic_library("app.x.", n, keep);
    for (int k = 0; k < 3; ++k) {
      const std::string c = "app.noise.N" + std::to_string(k);
      app.cls(c);
      for (unsigned m = 0; m < rng() % 4; ++m) app.method(mref(c, "f" + std::to_string(m), {}, "J"));
    }
    const auto r = match_signature(profile_classes(app.model()), sig);
    EXPECT_EQ(r.matched_classes.size(), oracle_matches(app.model(), sig)) << round;
    EXPECT_DOUBLE_EQ(r.record.confidence,
                     static_cast<double>(oracle_matches(app.model(), sig)) / sig.class_profiles.size());
    EXPECT_GE(r.record.confidence, 0.0);
    EXPECT_LE(r.record.confidence, 1.0);
  }
}

TEST(Detect, ThresholdMonotone) {
  std::vector<LibrarySignature> db;
  for (int i = 0; i < 6; ++i) {
    db.push_back(build_signature(synthetic_library("l" + std::to_string(i) + ".", 4 + i).model(),
                                 "lib" + std::to_string(i), "1"));
  }
  SynthDex app;
  for (int i = 0; i < 6; ++i) {
    const auto part = synthetic_library("l" + std::to_string(i) + ".", 4 + i, 1 + i);
    for (const auto& c : part.model().classes()) {
      app.cls(c.name, c.superclass, c.interfaces, c.access_flags);
      for (const auto* m : part.model().methods_of(c.name)) app.method(m->ref, {}, m->access_flags);
    }
  }
  std::vector<std::string> previous;
  bool first = true;
  for (int t = 1; t <= 100; ++t) {
    std::vector<std::string> names;
    for (const auto& r : detect(app.model(), db, t / 100.0)) names.push_back(r.record.name);
    if (!first) {
      EXPECT_TRUE(std::includes(previous.begin(), previous.end(), names.begin(), names.end())) << t;
    }
    first = false;
    previous = names;
  }
  EXPECT_FALSE(detect(app.model(), db, 0.01).empty());
}

TEST(Detect, RenameRobustness) {
  auto lib = synthetic_library("org.sample.", 9);
  lib.cls("org.sample.api.Callback", "java.lang.Object", {},
          apk::access::kPublic | apk::access::kInterface | apk::access::kAbstract)
      .abstract_method(mref("org.sample.api.Callback", "done", {"I"}));
  lib.cls("org.sample.Impl", "org.sample.C3", {"org.sample.api.Callback"})
      .method(mref("org.sample.Impl", "done", {"I"}));
  const auto sig = build_signature(lib.model(), "org.sample", "2.0");

  std::map<std::string, std::string> rename;
  int next = 0;
  for (const auto& c : lib.model().classes()) rename[c.name] = "a.a" + std::string(1, char('a' + next++));
  auto renamed = [&](const std::string& n) {
    const auto it = rename.find(n);
    return it == rename.end() ? n : it->second;
  };
  SynthDex obf;
  for (const auto& c : lib.model().classes()) {
    std::vector<std::string> ifaces;
    for (const auto& i : c.interfaces) ifaces.push_back(renamed(i));
    obf.cls(renamed(c.name), renamed(c.superclass), ifaces, c.access_flags);
    for (const auto* m : lib.model().methods_of(c.name)) {
      auto ref = m->ref;
      ref.class_name = renamed(ref.class_name);
      ref.method_name = "z" + ref.method_name;
      obf.method(ref, {}, m->access_flags);
    }
  }
  const auto plain = detect(lib.model(), {sig});
  const auto hidden = detect(obf.model(), {sig});
  ASSERT_EQ(plain.size(), 1u);
  ASSERT_EQ(hidden.size(), 1u);
  EXPECT_EQ(plain[0].record, hidden[0].record);
  std::vector<std::string> mapped;
  for (const auto& c : plain[0].matched_classes) mapped.push_back(rename.at(c));
  std::sort(mapped.begin(), mapped.end());
  EXPECT_EQ(hidden[0].matched_classes, mapped);
}

TEST(Detect, VersionSelection) {
  const auto full = synthetic_library("v.lib.", 6);
  const auto a = build_signature(full.model(), "v.lib", "1.2");
  const auto b = build_signature(full.model(), "v.lib", "1.10");
  auto c = build_signature(synthetic_library("v.lib.", 8).model(), "v.lib", "2.0");
  // Equal confidence: the newer version wins, regardless of database order.
  for (const auto& db : {std::vector{a, b}, std::vector{b, a}}) {
    const auto r = detect(full.model(), db, 0.5);
    ASSERT_EQ(r.size(), 1u);
    EXPECT_EQ(r[0].record.version, "1.10");
  }
  // Higher confidence beats a newer version.
  const auto r = detect(full.model(), {a, c}, 0.5);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].record.version, "1.2");
}

TEST(Versions, Compare) {
  EXPECT_LT(compare_versions("1.2", "1.10"), 0);
  EXPECT_GT(compare_versions("2.0", "1.99.9"), 0);
  EXPECT_EQ(compare_versions("1.02", "1.2"), 0);
  EXPECT_GT(compare_versions("1.0.0.redhat-00012", "1"), 0);
  EXPECT_LT(compare_versions("1.0.0.redhat-00002", "1.0.0.redhat-00012"), 0);
  EXPECT_EQ(compare_versions("", ""), 0);
}

std::set<MethodRef> reach(const callgraph::CallGraph& g, const std::string& handler) {
  return callgraph::reachable_methods(g, MethodRef::parse(handler));
}

TEST(Attribution, FixtureWidgets) {
  const auto& dex = fixture_apk().dex;
  const auto g = callgraph::build_call_graph(dex, callgraph::build_class_hierarchy(dex));
  const std::map<std::uint32_t, std::set<MethodRef>> reachable = {
      {0x7f090039, reach(g, "com.example.MainActivity: void onLocate(android.view.View)")},
      {0x7f090037,
       reach(g, "com.applovin.impl.mediation.debugger.ui.b.a: boolean onOptionsItemSelected(android.view.MenuItem)")},
      {0x7f090038, reach(g, "com.example.Loc$1: void onClick(android.view.View)")},
  };
  const auto per = attribute_to_widget(detect(dex, bundled()), reachable);
  auto names = [&](std::uint32_t id) {
    std::vector<std::string> out;
    for (const auto& t : per.at(id)) out.push_back(t.name);
    return out;
  };
  EXPECT_TRUE(per.at(0x7f090039).empty());
  EXPECT_EQ(names(0x7f090037), (std::vector<std::string>{"applovin-sdk", "javax.inject"}));
  // Both handlers reach the same applovin helper.
  EXPECT_EQ(names(0x7f090038), std::vector<std::string>{"applovin-sdk"});
}

TEST(Attribution, DisjointReachableSet) {
  DetectionResult r;
  r.record.name = "x";
  r.matched_classes = {"lib.A"};
  const auto per = attribute_to_widget({r}, {{1u, {mref("app.B", "f")}}, {2u, {mref("lib.A", "g")}}});
  EXPECT_TRUE(per.at(1).empty());
  EXPECT_EQ(per.at(2).size(), 1u);
}

TplRecord record(const std::string& name, const std::string& version) {
  TplRecord t;
  t.name = name;
  t.version = version;
  t.confidence = 1.0;
  return t;
}

OfflineMetadata& offline() {
  static auto o = OfflineMetadata::load(asset_path("tpl_metadata.json"));
  return o;
}

TEST(Enrich, OfflineKnownLibrary) {
  Diagnostics d;
  const auto out = enrich({record("javax.inject", "1")}, offline(), d);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].latest_version, "1.0.0.redhat-00012");
  EXPECT_EQ(out[0].publish_date_current, "2009-10-13");
  EXPECT_EQ(out[0].publish_date_latest, "2024-04-16");
  EXPECT_TRUE(d.empty());
}

TEST(Enrich, UnknownLibraryUnchanged) {
  Diagnostics d;
  const auto in = record("com.example.lib", "1");
  const auto out = enrich({in}, offline(), d);
  EXPECT_EQ(out[0], in);
  EXPECT_EQ(d.count_containing("com.example.lib"), 1u);
}

TEST(Enrich, InconsistentDatesDropLatest) {
  auto src = OfflineMetadata::from_json(nlohmann::json::parse(
      R"({"q":{"latest_version":"2","publish_date_latest":"2001-01-01","publish_date_current_versions":{"1":"2005-05-05"}}})"));
  Diagnostics d;
  const auto out = enrich({record("q", "1")}, src, d);
  EXPECT_FALSE(out[0].publish_date_latest.has_value());
  EXPECT_EQ(out[0].publish_date_current, "2005-05-05");
  EXPECT_EQ(d.size(), 1u);
  EXPECT_THROW(OfflineMetadata::from_json(nlohmann::json::parse(R"({"q":{"publish_date_latest":"May 2001"}})")),
               Error);
}

// Serves the bundled offline metadata under /maven/<name>.
class StubRepository {
 public:
  StubRepository() {
    server_.Get(R"(/maven/(.+))", [](const httplib::Request& req, httplib::Response& res) {
      const auto meta = offline().lookup(req.matches[1]);
      if (!meta) {
        res.status = 404;
        return;
      }
      res.set_content(metadata_to_json(*meta).dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~StubRepository() {
    server_.stop();
    thread_.join();
  }
  std::string base() const { return "http://127.0.0.1:" + std::to_string(port_) + "/maven/"; }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

std::filesystem::path temp_cache(const std::string& tag) {
  auto p = std::filesystem::temp_directory_path() / ("pribom-meta-" + tag + "-" + std::to_string(::getpid()) + ".json");
  std::filesystem::remove(p);
  return p;
}

TEST(Enrich, RemoteMatchesOfflineAndCaches) {
  const std::vector<TplRecord> in = {record("applovin-sdk", "0.0.0-fixture"), record("javax.inject", "1")};
  Diagnostics offline_diags;
  const auto expected = enrich(in, offline(), offline_diags);
  const auto cache = temp_cache("remote");
  std::string base;
  {
    StubRepository stub;
    base = stub.base();
    RemoteMetadata remote(base, cache);
    Diagnostics d;
    EXPECT_EQ(enrich(in, remote, d), expected);
    EXPECT_EQ(d.size(), offline_diags.size());
    EXPECT_EQ(remote.fetch_count(), 2u);
  }
  // The stub is gone; a fresh client answers from the cache alone.
  RemoteMetadata cached(base, cache);
  Diagnostics d;
  EXPECT_EQ(enrich(in, cached, d), expected);
  EXPECT_EQ(cached.fetch_count(), 0u);
  const auto on_disk = read_json_file(cache, "test");
  EXPECT_TRUE(on_disk.at("applovin-sdk").is_null());
  EXPECT_EQ(on_disk.at("javax.inject").at("latest_version"), "1.0.0.redhat-00012");
  std::filesystem::remove(cache);
}

TEST(Enrich, RemoteTransportFailure) {
  std::string base;
  {
    StubRepository stub;
    base = stub.base();
  }
  const auto cache = temp_cache("down");
  RemoteMetadata remote(base, cache, 2);
  Diagnostics d;
  EXPECT_THROW(enrich({record("javax.inject", "1")}, remote, d), TransportError);
  EXPECT_FALSE(std::filesystem::exists(cache));
}

}  // namespace
}  // namespace pribom::tpl
