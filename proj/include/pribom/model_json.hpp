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

// JSON fragments of the pribom.json schema, shared by the document codec,
// the query reports and the HTTP service.

#pragma once

#include <string>

#include "json.hpp"

#include "pribom/model.hpp"

namespace pribom {

void to_json(nlohmann::json& j, const WidgetIdentifier& v);
void to_json(nlohmann::json& j, const EventBinding& v);
void to_json(nlohmann::json& j, const PermissionFinding& v);
void to_json(nlohmann::json& j, const TplRecord& v);
void to_json(nlohmann::json& j, const PolicySegment& v);
void to_json(nlohmann::json& j, const LabelDeclaration& v);
void to_json(nlohmann::json& j, const WidgetEntry& v);
void to_json(nlohmann::json& j, const PriBomDocument& v);

// Path-aware readers; `path` is the JSON pointer of `j`, used in errors.
PolicySegment policy_segment_from_json(const nlohmann::json& j, const std::string& path);
LabelDeclaration label_declaration_from_json(const nlohmann::json& j,
                                             const std::string& path);
WidgetEntry widget_entry_from_json(const nlohmann::json& j, const std::string& path);
PriBomDocument document_from_json(const nlohmann::json& j);

}  // namespace pribom
