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

// Queries over a loaded document: trace a widget backward to its code and
// disclosures, track a data practice forward to widgets, check notices
// against behavior, and diff two builds. Each report has one JSON form,
// shared by the CLI and the HTTP service, and a text form.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "pribom/error.hpp"
#include "pribom/model.hpp"

namespace pribom {

// No widget or other item matches the request.
class NotFound : public Error {
 public:
  explicit NotFound(const std::string& message) : Error("pribom-query", message) {}
};

// The request itself is malformed (empty selector, bad kind).
class BadRequest : public Error {
 public:
  explicit BadRequest(const std::string& message) : Error("pribom-query", message) {}
};

// Decimal or 0x-hex ids select by id; anything else by widget_name.
const WidgetEntry& select_widget(const PriBomDocument& doc, std::string_view selector);

// ---- trace ----

nlohmann::json trace(const PriBomDocument& doc, std::string_view selector);
std::string render_trace(const nlohmann::json& report);

// ---- track ----

enum class TrackKind { permission, data_type, tpl, policy };

std::optional<TrackKind> parse_track_kind(std::string_view s);
std::string_view to_string(TrackKind k);

nlohmann::json track(const PriBomDocument& doc, TrackKind kind, std::string_view value);
std::string render_track(const nlohmann::json& report);

// ---- check ----

nlohmann::json check(const PriBomDocument& doc);
// 1 when some collected data type is undisclosed in a channel, else 0.
int check_exit_status(const nlohmann::json& report);
std::string render_check(const nlohmann::json& report);

// ---- diff ----

// Throws pribom::Error when the packages differ.
nlohmann::json diff(const PriBomDocument& before, const PriBomDocument& after);
bool diff_is_empty(const nlohmann::json& report);
std::string render_diff(const nlohmann::json& report);

}  // namespace pribom
