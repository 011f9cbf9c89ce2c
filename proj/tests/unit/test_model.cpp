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

#include <functional>
#include <sstream>

#include "json.hpp"

#include "pribom/model.hpp"
#include "sample_documents.hpp"

namespace pribom {
namespace {

using testing::aligned_document;
using testing::kMenuShareId;
using testing::table_document;

std::size_t count_lines(const std::string& csv) {
  std::size_t n = 0;
  for (std::size_t pos = 0; (pos = csv.find("\r\n", pos)) != std::string::npos; pos += 2) ++n;
  return n;
}

std::vector<std::string> csv_lines(const std::string& csv) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t pos; (pos = csv.find("\r\n", start)) != std::string::npos; start = pos + 2) {
    out.push_back(csv.substr(start, pos - start));
  }
  return out;
}

TEST(Validate, WellFormedDocuments) {
  EXPECT_TRUE(validate(table_document()).empty());
  EXPECT_TRUE(validate(aligned_document()).empty());
}

TEST(Validate, DuplicateWidgetId) {
  auto doc = table_document();
  doc.entries.push_back(doc.entries[0]);
  const auto v = validate(doc);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].find("duplicate widget_id"), std::string::npos);
  EXPECT_NE(v[0].find("2131296311"), std::string::npos);
}

TEST(Validate, LabelWithoutMatchingFinding) {
  auto doc = table_document();
  doc.entries[0].label_declarations.push_back({"Contacts", "Contacts", false, {"App functionality"}});
  const auto v = validate(doc);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].find("label without matching finding"), std::string::npos);
}

// Breaking any single invariant must surface at least one violation.
TEST(Validate, SingleFieldMutationsAreCaught) {
  const std::vector<std::pair<const char*, std::function<void(PriBomDocument&)>>> mutations = {
      {"zero id", [](auto& d) { d.entries[0].identifier.widget_id = 0; }},
      {"bare type", [](auto& d) { d.entries[0].identifier.widget_type = "Button"; }},
      {"empty type", [](auto& d) { d.entries[0].identifier.widget_type = ""; }},
      {"event", [](auto& d) { d.entries[0].bindings[0].event = "swipe"; }},
      {"data type", [](auto& d) { d.entries[0].findings[0].data_type = "Biometrics"; }},
      {"method path", [](auto& d) { d.entries[0].findings[0].method_path = "getLastKnownLocation"; }},
      {"min api", [](auto& d) { d.entries[0].findings[0].min_api_level = 0; }},
      {"widget min api", [](auto& d) { d.entries[0].widget_min_api = 0; }},
      {"confidence", [](auto& d) { d.entries[0].tpls[0].confidence = 1.5; }},
      {"date order", [](auto& d) { d.entries[0].tpls[0].publish_date_latest = "2001-01-01"; }},
      {"date format", [](auto& d) { d.entries[0].tpls[0].publish_date_current = "Oct 13, 2009"; }},
      {"segment text", [](auto& d) { d.entries[0].policy_segments[0].text.clear(); }},
      {"segment evidence", [](auto& d) { d.entries[0].policy_segments[0].evidence.clear(); }},
      {"segment index", [](auto& d) { d.policy_segments[0].paragraph_index = -1; }},
      {"purposes", [](auto& d) { d.entries[0].label_declarations[0].purposes.clear(); }},
      {"catalog", [](auto& d) { d.data_type_catalog.pop_back(); }},
      {"package", [](auto& d) { d.app_package = "sample"; }},
      {"tool version", [](auto& d) { d.tool_version = "latest"; }},
      {"timestamp", [](auto& d) { d.generated_at = "yesterday"; }},
  };
  for (const auto& [name, mutate] : mutations) {
    auto doc = table_document();
    mutate(doc);
    EXPECT_FALSE(validate(doc).empty()) << name;
  }
}

TEST(Codec, EmptyDocumentRoundTripsByteIdentically) {
  auto doc = make_document("com.example.empty");
  doc.generated_at = "2026-01-01T00:00:00Z";
  doc.tool_version = "0.1.0";
  const auto bytes = encode(doc);
  EXPECT_EQ(decode(bytes), doc);
  EXPECT_EQ(encode(decode(bytes)), bytes);
}

TEST(Codec, TableEntryRoundTrips) {
  const auto doc = normalize(table_document());
  const auto back = decode(encode(doc));
  EXPECT_EQ(back, doc);
  const auto& e = back.entries.at(0);
  EXPECT_EQ(e.identifier.widget_id, kMenuShareId);
  EXPECT_EQ(e.identifier.widget_name, "action_share");
  EXPECT_EQ(e.bindings.at(0).handler.render(), testing::kTableHandler);
  EXPECT_EQ(e.findings.at(0).method_path, testing::kLocationPath);
  EXPECT_EQ(e.tpls.at(0).latest_version, "1.0.0.redhat-00012");
}

TEST(Codec, EncodingIsDeterministic) {
  auto doc = aligned_document();
  auto shuffled = doc;
  std::reverse(shuffled.entries.begin(), shuffled.entries.end());
  EXPECT_EQ(encode(doc), encode(shuffled));
}

TEST(Codec, TruncatedInputNamesByteOffset) {
  const auto bytes = encode(table_document());
  for (const std::size_t cut : {std::size_t{0}, std::size_t{1}, bytes.size() / 2, bytes.size() - 3}) {
    try {
      decode(std::string_view(bytes).substr(0, cut));
      FAIL() << "decoded a truncated document at " << cut;
    } catch (const DecodeError& e) {
      ASSERT_TRUE(e.byte_offset().has_value()) << cut;
      EXPECT_LE(*e.byte_offset(), cut + 1);
      EXPECT_NE(std::string(e.what()).find("byte offset"), std::string::npos);
    }
  }
}

TEST(Codec, SchemaErrorsNamePointer) {
  auto j = nlohmann::json::parse(encode(table_document()));
  j["entries"][0]["identifier"]["widget_id"] = "x";
  try {
    decode(j.dump());
    FAIL();
  } catch (const DecodeError& e) {
    EXPECT_EQ(e.path(), "/entries/0/identifier/widget_id");
  }
}

TEST(Csv, TableEntryRowIsVerbatim) {
  const auto lines = csv_lines(export_csv(table_document()));
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0],
            "widget_type,widget_id,widget_name,widget_src,events,handlers,widget_min_api,permission,data_type,"
            "method_path,permission_min_api,tpl_names,policy_excerpt,label_name,label_optional,label_purposes");
  EXPECT_EQ(lines[1],
            "android.view.MenuItem,2131296311,action_share,none,item_selected,"
            "com.applovin.impl.mediation.debugger.ui.b.a: boolean onOptionsItemSelected(android.view.MenuItem),1,"
            "android.permission.ACCESS_COARSE_LOCATION,Location,"
            "Landroid/location/LocationManager;-getLastKnownLocation-(Ljava/lang/String;)Landroid/location/"
            "Location;,1,javax.inject,"
            "\"with your permission we may collect your geo-location information to optimize user experience, "
            "such as for localization accuracy...\",Approximate Location,Yes,"
            "App functionality; Analytics; Advertising or marketing");
}

TEST(Csv, OneRowPerDataType) {
  auto doc = table_document();
  doc.entries[0].findings.push_back({"android.permission.READ_CONTACTS", "Contacts",
                                     "Landroid/provider/ContactsContract$Contacts;-getLookupUri-(Landroid/content/"
                                     "ContentResolver;Landroid/net/Uri;)Landroid/net/Uri;",
                                     1});
  const auto lines = csv_lines(export_csv(doc));
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[1].substr(0, 32), lines[2].substr(0, 32));
}

TEST(Csv, WidgetWithoutFindingsHasEmptyPermissionCells) {
  const auto lines = csv_lines(export_csv(aligned_document()));
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_NE(lines[2].find("btn_about"), std::string::npos);
  EXPECT_NE(lines[2].find(",1,,,,,,,,,"), std::string::npos);
}

TEST(Csv, RowCountMatchesDistinctDataTypes) {
  for (const auto& doc : {table_document(), aligned_document()}) {
    std::size_t expected = 1;
    for (const auto& e : doc.entries) expected += std::max<std::size_t>(1, e.data_types().size());
    EXPECT_EQ(count_lines(export_csv(doc)), expected);
  }
}

TEST(Merge, IdempotentOnSelf) {
  const auto d = normalize(table_document());
  const auto r = merge(d, d);
  EXPECT_EQ(r.document, d);
  EXPECT_TRUE(r.warnings.empty());
  EXPECT_EQ(merge(r.document, d).document, r.document);
}

TEST(Merge, OverlayCarriesPolicySentence) {
  auto base = table_document();
  base.entries[0].policy_segments.clear();
  auto overlay = table_document();
  const auto r = merge(base, overlay);
  ASSERT_EQ(r.document.entries[0].policy_segments.size(), 1u);
  EXPECT_EQ(r.document.entries[0].policy_segments[0].text, testing::kTablePolicy);
}

TEST(Merge, UnknownOverlayWidgetIsDropped) {
  const auto base = normalize(table_document());
  auto overlay = base;
  overlay.entries[0].identifier.widget_id = 0x7f0900ff;
  const auto r = merge(base, overlay);
  EXPECT_EQ(r.document, base);
  EXPECT_EQ(r.warnings.size(), 1u);
}

TEST(Merge, PackageMismatch) {
  auto overlay = table_document();
  overlay.app_package = "com.example.other";
  EXPECT_THROW(merge(table_document(), overlay), Error);
}

TEST(MethodRefRender, TableHandlerRoundTrips) {
  const auto m = MethodRef::parse(testing::kTableHandler);
  EXPECT_EQ(m.class_name, "com.applovin.impl.mediation.debugger.ui.b.a");
  EXPECT_EQ(m.return_descriptor, "Z");
  EXPECT_EQ(m.param_descriptors, std::vector<std::string>{"Landroid/view/MenuItem;"});
  EXPECT_EQ(m.render(), testing::kTableHandler);
  const auto p = MethodRef::parse_method_path(testing::kLocationPath);
  EXPECT_EQ(p.method_path(), testing::kLocationPath);
}

}  // namespace
}  // namespace pribom
