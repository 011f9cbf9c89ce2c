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
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "pribom/apk/apk.hpp"
#include "pribom/diagnostics.hpp"
#include "pribom/model.hpp"

namespace pribom::ui {

// A listener registration call and the callback it installs.
struct ListenerPattern {
  std::string setter;              // e.g. "setOnClickListener"
  std::string listener;            // dotted interface, e.g. "android.view.View$OnClickListener"
  std::string callback;            // e.g. "onClick"
  std::vector<std::string> params; // callback parameter descriptors
  std::string return_type;         // callback return descriptor
  std::string event;               // canonical event name

  MethodRef callback_ref(const std::string& owner) const {
    return MethodRef{owner, callback, params, return_type};
  }
};

// A framework-invoked override that handles every widget of a kind.
struct FrameworkCallback {
  std::string method;
  std::vector<std::string> params;
  std::string return_type;
  std::string event;
  std::string widget_type;  // widgets of this type receive the binding
};

struct UiConfig {
  // Qualified attribute names ("android:src") that bind images to widgets.
  std::vector<std::string> icon_attributes;
  std::vector<ListenerPattern> listeners;
  std::vector<FrameworkCallback> framework_callbacks;

  static UiConfig defaults();

  // Overlays a JSON object ({icon_attributes, listeners, framework_callbacks})
  // onto the defaults: icon_attributes replaces, the lists extend.
  static UiConfig from_json(const nlohmann::json& j);

  // Event names beyond the canonical vocabulary.
  std::vector<std::string> extra_events() const;

  // Throws pribom::Error if the configuration breaks an invariant.
  void check() const;
};

// The event each listener interface or callback maps to.
std::map<std::string, std::string> event_vocabulary(const UiConfig& config);

// "Button" -> "android.widget.Button"; qualified names are returned as is.
std::string expand_widget_type(const std::string& element_name, bool in_menu);

struct DeclaredBinding {
  std::string event;
  std::string handler_name;  // unresolved method name from the XML attribute
};

struct LayoutWidget {
  WidgetIdentifier identifier;
  std::vector<DeclaredBinding> declared;
  std::string source;  // archive member the widget was declared in
};

struct LayoutExtraction {
  std::vector<LayoutWidget> widgets;
  std::size_t skipped = 0;  // elements without an id
};

// Widgets declared in layout and menu resources, one per id, ordered by id.
// Documents are keyed by archive member name.
LayoutExtraction extract_layout_widgets(const std::map<std::string, apk::BinaryXmlDocument>& layouts,
                                        const std::map<std::string, apk::BinaryXmlDocument>& menus,
                                        const apk::ResourceTable& table, const UiConfig& config,
                                        Diagnostics& diags);

// Classes deriving (through app classes) from a framework activity or
// fragment, plus classes named as activities in the manifest.
std::set<std::string> screen_classes(const apk::DexModel& dex,
                                     const std::vector<std::string>& manifest_activities = {});

// Layout resource ids each class inflates via setContentView/inflate.
std::map<std::string, std::set<std::uint32_t>> layout_owners(const apk::DexModel& dex);

// Finds the implementation of `name`+proto visible in `cls`, searching the
// class and then its app superclasses. Returns nullptr when absent.
const apk::MethodDef* find_in_hierarchy(const apk::DexModel& dex, const std::string& cls,
                                        const MethodRef& proto);

using WidgetBinding = std::pair<std::uint32_t, EventBinding>;

// Listener registrations found in bytecode, plus framework callbacks bound
// to every widget of the callback's widget type in `known_widgets`.
std::vector<WidgetBinding> extract_programmatic_bindings(
    const apk::DexModel& dex, const apk::ResourceTable& table, const UiConfig& config,
    const std::map<std::uint32_t, std::string>& known_widgets,
    const std::set<std::string>& screens, Diagnostics& diags);

// Resolves XML onClick names against the classes that inflate each layout.
std::vector<WidgetBinding> resolve_xml_handlers(const std::vector<LayoutWidget>& widgets,
                                                const apk::DexModel& dex,
                                                const apk::ResourceTable& table,
                                                const std::set<std::string>& screens,
                                                Diagnostics& diags);

struct UiWidget {
  WidgetIdentifier identifier;
  std::vector<EventBinding> bindings;  // sorted (event, handler, origin)
};

// Full step: layouts and menus, programmatic bindings and XML handlers,
// unioned by widget id and ordered by id.
std::vector<UiWidget> extract_ui(const apk::LoadedApk& apk, const UiConfig& config,
                                 Diagnostics& diags);

}  // namespace pribom::ui
