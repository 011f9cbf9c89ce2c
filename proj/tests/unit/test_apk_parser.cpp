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

#include <algorithm>
#include <functional>
#include <random>

#include "pribom/apk/apk.hpp"
#include "test_support.hpp"

namespace pribom::apk {
namespace {

using pribom::testing::fixture;
using pribom::testing::read_bytes;

std::vector<std::uint8_t> replace_all(std::vector<std::uint8_t> bytes, const std::string& from,
                                      const std::string& to) {
  auto it = bytes.begin();
  while ((it = std::search(it, bytes.end(), from.begin(), from.end())) != bytes.end()) {
    std::copy(to.begin(), to.end(), it);
    it += static_cast<std::ptrdiff_t>(from.size());
  }
  return bytes;
}

ApkError::Kind apk_error_kind(const std::vector<std::uint8_t>& bytes) {
  try {
    ApkArchive::from_bytes(bytes);
  } catch (const ApkError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected ApkError";
  return ApkError::Kind::io;
}

// ---------------------------------------------------------------- archive

TEST(ApkArchive, FixtureMembers) {
  const auto apk = open_apk(fixture("fixture.apk"));
  std::vector<std::string> names;
  for (const auto& [name, _] : apk.entries()) names.push_back(name);
  const std::vector<std::string> expected = {
      "AndroidManifest.xml",     "classes.dex",         "res/drawable/pin.png",
      "res/layout/main.xml",     "res/menu/main_menu.xml", "resources.arsc"};
  EXPECT_EQ(names, expected);
  EXPECT_EQ(apk.dex_members(), std::vector<std::string>{"classes.dex"});
  EXPECT_EQ(apk.entries().at("resources.arsc").method, 0);
  EXPECT_EQ(apk.entries().at("classes.dex").method, 8);
}

TEST(ApkArchive, MembersMatchLooseFixtureBytes) {
  const auto apk = open_apk(fixture("fixture.apk"));
  EXPECT_EQ(apk.read("classes.dex"), read_bytes(fixture("bin/classes.dex")));
  EXPECT_EQ(apk.read("resources.arsc"), read_bytes(fixture("bin/resources.arsc")));
  EXPECT_EQ(apk.read("res/layout/main.xml"), read_bytes(fixture("bin/main.xml")));
  EXPECT_EQ(apk.read("AndroidManifest.xml"), read_bytes(fixture("bin/AndroidManifest.xml")));
}

TEST(ApkArchive, EmptyFileIsNotAZip) {
  EXPECT_EQ(apk_error_kind({}), ApkError::Kind::not_a_zip);
}

TEST(ApkArchive, PlainTextIsNotAZip) {
  const std::string text = "this is not an archive, just some text that is long enough";
  EXPECT_EQ(apk_error_kind({text.begin(), text.end()}), ApkError::Kind::not_a_zip);
}

TEST(ApkArchive, MissingDex) {
  try {
    open_apk(fixture("no_dex.apk"));
    FAIL() << "expected missing-dex";
  } catch (const ApkError& e) {
    EXPECT_EQ(e.kind(), ApkError::Kind::missing_dex);
  }
}

TEST(ApkArchive, MissingManifest) {
  auto bytes = replace_all(read_bytes(fixture("fixture.apk")), "AndroidManifest.xml",
                           "AndroidManifesX.xml");
  EXPECT_EQ(apk_error_kind(bytes), ApkError::Kind::missing_manifest);
}

TEST(ApkArchive, MissingFileIsIoError) {
  try {
    open_apk(fixture("does-not-exist.apk"));
    FAIL();
  } catch (const ApkError& e) {
    EXPECT_EQ(e.kind(), ApkError::Kind::io);
  }
}

TEST(ApkArchive, CrcMismatchOnCorruptStoredMember) {
  // resources.arsc is stored; corrupting its first payload byte breaks the CRC.
  auto bytes = read_bytes(fixture("fixture.apk"));
  const auto apk = ApkArchive::from_bytes(bytes);
  const auto& entry = apk.entries().at("resources.arsc");
  const std::size_t name_len = std::string("resources.arsc").size();
  bytes[entry.local_header_offset + 30 + name_len] ^= 0xff;
  const auto corrupt = ApkArchive::from_bytes(bytes);
  try {
    corrupt.read("resources.arsc");
    FAIL();
  } catch (const ApkError& e) {
    EXPECT_EQ(e.kind(), ApkError::Kind::corrupt_entry);
  }
}

TEST(ApkArchive, TruncationNeverCrashes) {
  const auto bytes = read_bytes(fixture("fixture.apk"));
  for (std::size_t n = 0; n < bytes.size(); ++n) {
    std::vector<std::uint8_t> cut(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(n));
    try {
      const auto apk = ApkArchive::from_bytes(cut);
      for (const auto& [name, _] : apk.entries()) apk.read(name);
    } catch (const pribom::Error&) {
    }
  }
}

// ---------------------------------------------------------------- AXML

TEST(BinaryXml, LayoutTree) {
  const auto doc = decode_binary_xml(read_bytes(fixture("bin/main.xml")));
  EXPECT_EQ(doc.root.name, "LinearLayout");
  EXPECT_EQ(doc.root.attributes.size(), 2u);
  ASSERT_EQ(doc.root.children.size(), 1u);
  const auto& button = doc.root.children[0];
  EXPECT_EQ(button.name, "Button");
  ASSERT_EQ(button.attributes.size(), 3u);

  const auto* id = button.attribute("id");
  ASSERT_NE(id, nullptr);
  EXPECT_EQ(id->value.kind, ValueKind::reference);
  EXPECT_EQ(id->value.reference(), 0x7f090039u);
  EXPECT_EQ(id->resource_id, 0x010100d0u);
  EXPECT_EQ(id->qualified_name(), "android:id");

  const auto* on_click = button.attribute_qualified("android:onClick");
  ASSERT_NE(on_click, nullptr);
  EXPECT_EQ(on_click->value.kind, ValueKind::string);
  EXPECT_EQ(on_click->value.string, "onLocate");

  const auto* bg = button.attribute("background");
  ASSERT_NE(bg, nullptr);
  EXPECT_EQ(bg->value.reference(), 0x7f020000u);

  const auto* width = doc.root.attribute("layout_width");
  ASSERT_NE(width, nullptr);
  EXPECT_EQ(width->value.kind, ValueKind::integer);
  EXPECT_EQ(width->value.integer, -1);
}

TEST(BinaryXml, MenuTree) {
  const auto doc = decode_binary_xml(read_bytes(fixture("bin/main_menu.xml")));
  EXPECT_EQ(doc.root.name, "menu");
  ASSERT_EQ(doc.root.children.size(), 1u);
  const auto& item = doc.root.children[0];
  EXPECT_EQ(item.name, "item");
  EXPECT_EQ(item.attribute("id")->value.reference(), 0x7f090037u);
  EXPECT_EQ(item.attribute("title")->value.string, "Share");
}

TEST(BinaryXml, ManifestRootAndPackage) {
  const auto doc = decode_binary_xml(read_bytes(fixture("bin/AndroidManifest.xml")));
  EXPECT_EQ(doc.root.name, "manifest");
  const auto* pkg = doc.root.attribute("package", "");
  ASSERT_NE(pkg, nullptr);
  EXPECT_EQ(pkg->value.string, "com.example.pribomfixture");
}

TEST(BinaryXml, DeclaredAttributeCountsHold) {
  for (const char* f : {"bin/main.xml", "bin/main_menu.xml", "bin/AndroidManifest.xml"}) {
    const auto doc = decode_binary_xml(read_bytes(fixture(f)));
    std::size_t elements = 0;
    doc.visit([&](const XmlElement& e, int) {
      ++elements;
      EXPECT_EQ(e.attributes.size(), e.declared_attribute_count) << f << " " << e.name;
    });
    EXPECT_GT(elements, 0u);
  }
}

TEST(BinaryXml, PlainTextIsBadMagic) {
  const std::string text = "<?xml version=\"1.0\"?><LinearLayout/>";
  try {
    decode_binary_xml(Bytes(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ParseError::Kind::bad_magic);
  }
}

TEST(BinaryXml, StringIndexOutOfRange) {
  // Point the first element's name at a string index beyond the pool.
  auto bytes = read_bytes(fixture("bin/main.xml"));
  const auto doc = decode_binary_xml(bytes);
  (void)doc;
  bool patched = false;
  for (std::size_t i = 0; i + 36 <= bytes.size(); i += 4) {
    if (bytes[i] == 0x02 && bytes[i + 1] == 0x01 && bytes[i + 2] == 0x10 && bytes[i + 3] == 0x00) {
      // start element: the name index follows the 16-byte header and ns
      bytes[i + 20] = 0xee;
      bytes[i + 21] = 0xee;
      patched = true;
      break;
    }
  }
  ASSERT_TRUE(patched);
  try {
    decode_binary_xml(bytes);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ParseError::Kind::out_of_range);
  }
}

// ---------------------------------------------------------------- manifest

TEST(Manifest, FixtureInfo) {
  const auto info = read_manifest(decode_binary_xml(read_bytes(fixture("bin/AndroidManifest.xml"))));
  EXPECT_EQ(info.package, "com.example.pribomfixture");
  EXPECT_EQ(info.version_code, 3);
  EXPECT_EQ(info.version_name, "1.2.0");
  EXPECT_EQ(info.min_sdk, 21);
  EXPECT_EQ(info.target_sdk, 33);
  EXPECT_EQ(info.permissions,
            (std::vector<std::string>{"android.permission.ACCESS_COARSE_LOCATION",
                                      "android.permission.ACCESS_NETWORK_STATE"}));
  EXPECT_EQ(info.activities,
            (std::vector<std::string>{"com.example.MainActivity",
                                      "com.applovin.impl.mediation.debugger.ui.b.a"}));
}

// ---------------------------------------------------------------- ARSC

TEST(ResourceTable, ForwardLookup) {
  const auto t = parse_resource_table(read_bytes(fixture("bin/resources.arsc")));
  EXPECT_EQ(t.package_id(), 0x7f);
  EXPECT_EQ(t.package_name(), "com.example.pribomfixture");
  EXPECT_EQ(t.lookup(0x7f090037u), (ResourceName{"id", "action_share"}));
  EXPECT_EQ(t.lookup(0x7f090039u), (ResourceName{"id", "btn_locate"}));
  EXPECT_EQ(t.lookup(0x7f030000u), (ResourceName{"layout", "main"}));
  EXPECT_EQ(t.lookup(0x7f040000u), (ResourceName{"menu", "main_menu"}));
  EXPECT_EQ(t.lookup(0x7f020000u), (ResourceName{"drawable", "pin"}));
}

TEST(ResourceTable, UndefinedIdIsAbsent) {
  const auto t = parse_resource_table(read_bytes(fixture("bin/resources.arsc")));
  EXPECT_FALSE(t.lookup(0x7f0900ffu).has_value());
  EXPECT_FALSE(t.lookup(0x7f090000u).has_value());  // NO_ENTRY slot
}

TEST(ResourceTable, ReverseLookup) {
  const auto t = parse_resource_table(read_bytes(fixture("bin/resources.arsc")));
  EXPECT_EQ(t.lookup("id", "action_share"), 0x7f090037u);
  EXPECT_EQ(t.lookup("layout", "main"), 0x7f030000u);
  EXPECT_FALSE(t.lookup("id", "nope").has_value());
}

TEST(ResourceTable, ForwardAndReverseAreInverse) {
  const auto t = parse_resource_table(read_bytes(fixture("bin/resources.arsc")));
  ASSERT_FALSE(t.entries().empty());
  for (const auto& [id, name] : t.entries()) {
    EXPECT_EQ(t.lookup(name.type, name.name), id);
  }
}

TEST(ResourceTable, DrawableFilePath) {
  const auto t = parse_resource_table(read_bytes(fixture("bin/resources.arsc")));
  EXPECT_EQ(t.file_path(0x7f020000u), "res/drawable/pin.png");
  EXPECT_EQ(t.file_path(0x7f030000u), "res/layout/main.xml");
  EXPECT_FALSE(t.file_path(0x7f090037u).has_value());
}

TEST(ResourceTable, WrongChunkIsBadMagic) {
  try {
    parse_resource_table(read_bytes(fixture("bin/main.xml")));
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ParseError::Kind::bad_magic);
  }
}

// ---------------------------------------------------------------- resource ids

TEST(ResourceId, TableTwoWidgetId) {
  // 2131296311 == 0x7F090037, checked by independent decimal arithmetic.
  static_assert(0x7F * 16777216u + 0x09 * 65536u + 0x37 == 2131296311u);
  EXPECT_EQ(resolve_resource_id(2131296311u), (ResourceIdParts{0x7f, 0x09, 0x0037}));
}

TEST(ResourceId, ZeroAndFramework) {
  EXPECT_EQ(resolve_resource_id(0), (ResourceIdParts{0, 0, 0}));
  EXPECT_EQ(resolve_resource_id(0x01010000u), (ResourceIdParts{0x01, 0x01, 0x0000}));
}

TEST(ResourceId, ComposeInvertsResolve) {
  std::mt19937 rng(20240416);
  for (int i = 0; i < 10000; ++i) {
    const std::uint32_t x = rng();
    EXPECT_EQ(compose_resource_id(resolve_resource_id(x)), x);
  }
  EXPECT_EQ(compose_resource_id(resolve_resource_id(0xffffffffu)), 0xffffffffu);
}

// ---------------------------------------------------------------- DEX

class FixtureDex : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    model_ = new DexModel(parse_dex(read_bytes(fixture("bin/classes.dex"))));
  }
  static void TearDownTestSuite() {
    delete model_;
    model_ = nullptr;
  }
  static const DexModel& dex() { return *model_; }

  static MethodRef ref(const std::string& rendered) { return MethodRef::parse(rendered); }

 private:
  static DexModel* model_;
};

DexModel* FixtureDex::model_ = nullptr;

TEST_F(FixtureDex, ClassDefs) {
  const auto* main = dex().find_class("com.example.MainActivity");
  ASSERT_NE(main, nullptr);
  EXPECT_EQ(main->superclass, "com.example.BaseActivity");
  EXPECT_EQ(main->interfaces, std::vector<std::string>{"android.view.View$OnClickListener"});
  const auto* base = dex().find_class("com.example.BaseActivity");
  ASSERT_NE(base, nullptr);
  EXPECT_EQ(base->superclass, "android.app.Activity");
  EXPECT_TRUE(base->is_abstract());
  EXPECT_NE(dex().find_class("com.applovin.impl.mediation.debugger.ui.b.a"), nullptr);
  EXPECT_NE(dex().find_class("javax.inject.Provider"), nullptr);
  EXPECT_TRUE(dex().find_class("javax.inject.Provider")->is_interface());
}

TEST_F(FixtureDex, OnClickInvokesGetLastKnownLocation) {
  const auto* m = dex().find_method(ref("com.example.MainActivity: void onClick(android.view.View)"));
  ASSERT_NE(m, nullptr);
  ASSERT_TRUE(m->body.has_value());
  std::vector<std::string> calls;
  for (const auto& inv : m->body->invocations) calls.push_back(inv.target.render());
  EXPECT_EQ(calls, (std::vector<std::string>{
                       "com.example.MainActivity: java.lang.Object getSystemService(java.lang.String)",
                       "android.location.LocationManager: android.location.Location "
                       "getLastKnownLocation(java.lang.String)"}));
  EXPECT_EQ(m->body->invocations[1].kind, InvokeKind::virtual_call);
  EXPECT_EQ(m->body->string_constants, (std::vector<std::string>{"location", "gps"}));
}

TEST_F(FixtureDex, OnCreateRegisterTracking) {
  const auto* m = dex().find_method(
      ref("com.example.MainActivity: void onCreate(android.os.Bundle)"));
  ASSERT_NE(m, nullptr);
  const auto& inv = m->body->invocations;
  ASSERT_EQ(inv.size(), 6u);
  EXPECT_EQ(inv[0].kind, InvokeKind::super_call);
  EXPECT_EQ(inv[1].target.method_name, "setContentView");
  EXPECT_EQ(inv[1].args[1], RegValue::make_int(0x7f030000));
  EXPECT_EQ(inv[2].target.method_name, "findViewById");
  EXPECT_EQ(inv[2].args[0].kind, RegValue::Kind::this_ref);
  EXPECT_EQ(inv[2].args[1], RegValue::make_int(0x7f090038));
  EXPECT_EQ(inv[3].target.method_name, "<init>");
  EXPECT_EQ(inv[3].kind, InvokeKind::direct);
  EXPECT_EQ(inv[4].target.render(),
            "android.view.View: void setOnClickListener(android.view.View$OnClickListener)");
  EXPECT_EQ(inv[4].args[0].kind, RegValue::Kind::invoke_result);
  EXPECT_EQ(inv[4].args[0].number, 2);
  EXPECT_EQ(inv[4].args[1],
            RegValue::make_text(RegValue::Kind::new_instance, "com.example.Loc$1"));
  EXPECT_EQ(inv[5].target.render(),
            "java.lang.Class: java.lang.Class forName(java.lang.String)");
  EXPECT_EQ(inv[5].kind, InvokeKind::static_call);
  EXPECT_EQ(inv[5].args[0], RegValue::make_text(RegValue::Kind::string_const, "com.example.Plugin"));
  EXPECT_EQ(m->body->new_instances, std::vector<std::string>{"com.example.Loc$1"});
}

TEST_F(FixtureDex, NonConstantFindViewByIdArgument) {
  const auto* m = dex().find_method(ref("com.example.MainActivity: void bindDynamic(int)"));
  ASSERT_NE(m, nullptr);
  ASSERT_EQ(m->body->invocations.size(), 1u);
  EXPECT_EQ(m->body->invocations[0].args[1].kind, RegValue::Kind::unknown);
}

TEST_F(FixtureDex, RangeInvoke) {
  const auto* m = dex().find_method(ref("com.example.MainActivity: void onLocate(android.view.View)"));
  ASSERT_NE(m, nullptr);
  ASSERT_EQ(m->body->invocations.size(), 1u);
  EXPECT_EQ(m->body->invocations[0].target.render(),
            "com.example.MainActivity: void onClick(android.view.View)");
  EXPECT_EQ(m->body->invocations[0].registers, (std::vector<std::uint16_t>{0, 1}));
}

TEST_F(FixtureDex, PayloadBodyIsWalked) {
  const auto* m = dex().find_method(ref("com.example.MainActivity: int classify(int)"));
  ASSERT_NE(m, nullptr);
  ASSERT_TRUE(m->body.has_value());
  EXPECT_TRUE(m->is_private());
  EXPECT_TRUE(m->body->invocations.empty());
}

TEST_F(FixtureDex, AbstractMethodHasNoBody) {
  const auto* m = dex().find_method(ref("javax.inject.Provider: java.lang.Object get()"));
  ASSERT_NE(m, nullptr);
  EXPECT_TRUE(m->is_abstract());
  EXPECT_FALSE(m->body.has_value());
}

TEST_F(FixtureDex, MethodRefsRoundTrip) {
  std::size_t checked = 0;
  auto check = [&](const MethodRef& r) {
    EXPECT_EQ(MethodRef::parse(r.render()), r) << r.render();
    EXPECT_EQ(MethodRef::parse_method_path(r.method_path()), r) << r.method_path();
    EXPECT_TRUE(descriptor::is_valid(r.return_descriptor));
    for (const auto& p : r.param_descriptors) EXPECT_TRUE(descriptor::is_valid(p));
    ++checked;
  };
  for (const auto& m : dex().methods()) {
    check(m.ref);
    if (m.body) {
      for (const auto& inv : m.body->invocations) check(inv.target);
    }
  }
  EXPECT_GT(checked, 20u);
}

TEST(Dex, WrongMagic) {
  auto bytes = read_bytes(fixture("bin/classes.dex"));
  bytes[0] = 'x';
  try {
    parse_dex(bytes);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ParseError::Kind::bad_magic);
  }
}

TEST(Dex, VersionRange) {
  auto bytes = read_bytes(fixture("bin/classes.dex"));
  for (const char* v : {"041", "034", "099"}) {
    std::copy(v, v + 3, bytes.begin() + 4);
    try {
      parse_dex(bytes);
      FAIL() << v;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.kind(), ParseError::Kind::unsupported_version) << v;
    }
  }
  for (const char* v : {"035", "037", "038", "039", "040"}) {
    std::copy(v, v + 3, bytes.begin() + 4);
    EXPECT_NO_THROW(parse_dex(bytes)) << v;  // version bytes are outside the checksum
  }
}

TEST(Dex, ChecksumMismatch) {
  auto bytes = read_bytes(fixture("bin/classes.dex"));
  bytes[bytes.size() - 1] ^= 0x5a;
  try {
    parse_dex(bytes);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ParseError::Kind::malformed);
  }
}

TEST(Dex, MultidexDuplicateClassIsError) {
  const auto bytes = read_bytes(fixture("bin/classes.dex"));
  EXPECT_THROW(parse_multidex({{"classes.dex", bytes}, {"classes2.dex", bytes}}), pribom::Error);
  const auto lib = read_bytes(fixture("libs/applovin-fixture.dex"));
  const auto inject = read_bytes(fixture("libs/javax.inject-1.dex"));
  const auto model = parse_multidex({{"classes.dex", lib}, {"classes2.dex", inject}});
  EXPECT_NE(model.find_class("javax.inject.Provider"), nullptr);
  EXPECT_EQ(model.find_class("javax.inject.Provider")->source, "classes2.dex");
}

TEST(Dex, InstructionWidthPayloads) {
  // packed-switch with 3 targets: 3*2+4 units
  const std::uint16_t packed[] = {0x0100, 3, 0, 0, 0, 0, 0, 0, 0, 0};
  EXPECT_EQ(instruction_width(packed, 0), 10u);
  // sparse-switch with 2 entries: 2*4+2 units
  const std::uint16_t sparse[] = {0x0200, 2, 0, 0, 0, 0, 0, 0, 0, 0};
  EXPECT_EQ(instruction_width(sparse, 0), 10u);
  // fill-array-data, width 4, 3 elements: (12+1)/2+4 = 10
  const std::uint16_t fill[] = {0x0300, 4, 3, 0, 0, 0, 0, 0, 0, 0};
  EXPECT_EQ(instruction_width(fill, 0), 10u);
  const std::uint16_t wide[] = {0x0018, 0, 0, 0, 0};  // const-wide 51l
  EXPECT_EQ(instruction_width(wide, 0), 5u);
  const std::uint16_t cut[] = {0x006e, 0};  // invoke-virtual needs 3 units
  EXPECT_EQ(instruction_width(cut, 0), 0u);
}

// ---------------------------------------------------------------- robustness

template <typename Parse>
void expect_structured_failures_on_truncation(const std::vector<std::uint8_t>& bytes, Parse parse) {
  for (std::size_t n = 0; n < bytes.size(); ++n) {
    try {
      parse(Bytes(bytes.data(), n));
    } catch (const ParseError&) {
      continue;
    } catch (const std::exception& e) {
      ADD_FAILURE() << "unstructured failure at length " << n << ": " << e.what();
      continue;
    }
    // Chunked formats may legitimately succeed only on the full input.
    ADD_FAILURE() << "truncated input of length " << n << " decoded without error";
  }
}

TEST(Robustness, AxmlTruncationAtEveryOffset) {
  for (const char* f : {"bin/main.xml", "bin/main_menu.xml", "bin/AndroidManifest.xml"}) {
    expect_structured_failures_on_truncation(read_bytes(fixture(f)),
                                             [](Bytes b) { decode_binary_xml(b); });
  }
}

TEST(Robustness, ArscTruncationAtEveryOffset) {
  expect_structured_failures_on_truncation(read_bytes(fixture("bin/resources.arsc")),
                                           [](Bytes b) { parse_resource_table(b); });
}

TEST(Robustness, DexTruncationAtEveryOffset) {
  expect_structured_failures_on_truncation(read_bytes(fixture("bin/classes.dex")),
                                           [](Bytes b) { parse_dex(b); });
}

TEST(Robustness, RandomByteFlipsNeverCrash) {
  std::mt19937 rng(7);
  const std::vector<std::pair<std::string, std::function<void(Bytes)>>> cases = {
      {"bin/main.xml", [](Bytes b) { decode_binary_xml(b); }},
      {"bin/AndroidManifest.xml", [](Bytes b) { decode_binary_xml(b); }},
      {"bin/resources.arsc", [](Bytes b) { parse_resource_table(b); }},
      {"bin/classes.dex", [](Bytes b) { parse_dex(b, "classes.dex", DexOptions{false}); }},
  };
  for (const auto& [file, parse] : cases) {
    const auto original = read_bytes(fixture(file));
    for (int round = 0; round < 400; ++round) {
      auto bytes = original;
      const int flips = 1 + static_cast<int>(rng() % 4);
      for (int k = 0; k < flips; ++k) bytes[rng() % bytes.size()] = static_cast<std::uint8_t>(rng());
      try {
        parse(bytes);
      } catch (const pribom::Error&) {
      }
    }
  }
}

}  // namespace
}  // namespace pribom::apk
