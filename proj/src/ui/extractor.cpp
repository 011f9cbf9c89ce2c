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

#include "pribom/ui/extractor.hpp"

#include <algorithm>
#include <cstdio>
#include <tuple>

namespace pribom::ui {
namespace {

constexpr const char* kModule = "ui-extractor";

std::string hex_id(std::uint32_t id) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "0x%08x", id);
  return buf;
}

const std::set<std::string>& view_package_types() {
  static const std::set<std::string> names = {"View", "ViewGroup", "ViewStub", "SurfaceView",
                                              "TextureView"};
  return names;
}

const std::set<std::string>& skipped_elements() {
  static const std::set<std::string> names = {"include", "merge", "requestFocus", "tag", "group",
                                              "menu"};
  return names;
}

ListenerPattern listener(std::string setter, std::string iface, std::string cb,
                         std::vector<std::string> params, std::string ret, std::string event) {
  return {std::move(setter), std::move(iface), std::move(cb), std::move(params), std::move(ret),
          std::move(event)};
}

std::vector<std::string> string_list(const nlohmann::json& j, const char* key) {
  std::vector<std::string> out;
  if (!j.contains(key)) return out;
  for (const auto& v : j.at(key)) out.push_back(v.get<std::string>());
  return out;
}

// Widget id held by a setter's receiver, when the receiver came from a
// findViewById call with a constant argument.
std::optional<std::uint32_t> receiver_widget_id(const apk::MethodBody& body, const apk::RegValue& receiver) {
  if (receiver.kind != apk::RegValue::Kind::invoke_result) return std::nullopt;
  const auto idx = static_cast<std::size_t>(receiver.number);
  if (idx >= body.invocations.size()) return std::nullopt;
  const auto& src = body.invocations[idx];
  if (src.target.method_name != "findViewById" && src.target.method_name != "requireViewById") {
    return std::nullopt;
  }
  if (src.args.empty() || src.args.back().kind != apk::RegValue::Kind::int_const) return std::nullopt;
  return static_cast<std::uint32_t>(src.args.back().number);
}

// Looks up "android:src"-style names by namespace URI so the prefix the
// compiler happened to declare does not matter.
const apk::XmlAttribute* find_qualified(const apk::XmlElement& e, const std::string& qualified) {
  const auto colon = qualified.find(':');
  const auto prefix = qualified.substr(0, colon);
  const auto local = qualified.substr(colon + 1);
  if (prefix == "android") return e.attribute(local, apk::kAndroidNs);
  if (prefix == "app") return e.attribute(local, apk::kAppNs);
  return e.attribute_qualified(qualified);
}

bool binding_less(const EventBinding& a, const EventBinding& b) {
  const auto ha = a.handler.render();
  const auto hb = b.handler.render();
  return std::tie(a.event, ha, a.origin) < std::tie(b.event, hb, b.origin);
}

}  // namespace

UiConfig UiConfig::defaults() {
  UiConfig c;
  c.icon_attributes = {"android:src",          "android:background",    "android:drawableLeft",
                       "android:drawableRight", "android:drawableTop",   "android:drawableBottom",
                       "android:drawableStart", "android:drawableEnd",   "app:srcCompat",
                       "android:icon"};
  const std::string view = "Landroid/view/View;";
  const std::string adapter = "Landroid/widget/AdapterView;";
  c.listeners = {
      listener("setOnClickListener", "android.view.View$OnClickListener", "onClick", {view}, "V", "click"),
      listener("setOnLongClickListener", "android.view.View$OnLongClickListener", "onLongClick", {view}, "Z",
               "long_click"),
      listener("setOnTouchListener", "android.view.View$OnTouchListener", "onTouch",
               {view, "Landroid/view/MotionEvent;"}, "Z", "touch"),
      listener("setOnItemSelectedListener", "android.widget.AdapterView$OnItemSelectedListener",
               "onItemSelected", {adapter, view, "I", "J"}, "V", "item_selected"),
      listener("setOnItemClickListener", "android.widget.AdapterView$OnItemClickListener", "onItemClick",
               {adapter, view, "I", "J"}, "V", "item_click"),
      listener("setOnCheckedChangeListener", "android.widget.CompoundButton$OnCheckedChangeListener",
               "onCheckedChanged", {"Landroid/widget/CompoundButton;", "Z"}, "V", "checked_change"),
      listener("addTextChangedListener", "android.text.TextWatcher", "onTextChanged",
               {"Ljava/lang/CharSequence;", "I", "I", "I"}, "V", "text_changed"),
      listener("setOnFocusChangeListener", "android.view.View$OnFocusChangeListener", "onFocusChange",
               {view, "Z"}, "V", "focus_change"),
      listener("setOnMenuItemClickListener", "android.view.MenuItem$OnMenuItemClickListener",
               "onMenuItemClick", {"Landroid/view/MenuItem;"}, "Z", "item_selected"),
  };
  c.framework_callbacks = {
      {"onOptionsItemSelected", {"Landroid/view/MenuItem;"}, "Z", "item_selected", "android.view.MenuItem"},
  };
  return c;
}

UiConfig UiConfig::from_json(const nlohmann::json& j) {
  UiConfig c = defaults();
  if (!j.is_object()) throw Error(kModule, "ui_extractor config must be a JSON object");
  try {
    if (j.contains("icon_attributes")) c.icon_attributes = string_list(j, "icon_attributes");
    if (j.contains("listeners")) {
      for (const auto& l : j.at("listeners")) {
        c.listeners.push_back(listener(l.at("setter").get<std::string>(), l.at("listener").get<std::string>(),
                                       l.at("callback").get<std::string>(), string_list(l, "params"),
                                       l.value("return", std::string("V")), l.at("event").get<std::string>()));
      }
    }
    if (j.contains("framework_callbacks")) {
      for (const auto& f : j.at("framework_callbacks")) {
        c.framework_callbacks.push_back({f.at("method").get<std::string>(), string_list(f, "params"),
                                         f.value("return", std::string("V")), f.at("event").get<std::string>(),
                                         f.at("widget_type").get<std::string>()});
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(kModule, std::string("invalid ui_extractor config: ") + e.what());
  }
  c.check();
  return c;
}

std::vector<std::string> UiConfig::extra_events() const {
  std::set<std::string> extra;
  auto consider = [&](const std::string& e) {
    if (std::find(kCanonicalEvents.begin(), kCanonicalEvents.end(), e) == kCanonicalEvents.end()) {
      extra.insert(e);
    }
  };
  for (const auto& l : listeners) consider(l.event);
  for (const auto& f : framework_callbacks) consider(f.event);
  return {extra.begin(), extra.end()};
}

void UiConfig::check() const {
  if (icon_attributes.empty()) throw Error(kModule, "icon attribute list is empty");
  for (const auto& a : icon_attributes) {
    if (a.find(':') == std::string::npos) {
      throw Error(kModule, "icon attribute '" + a + "' is not namespace-qualified");
    }
  }
  for (const auto& l : listeners) {
    if (l.setter.empty() || l.callback.empty() || l.event.empty()) {
      throw Error(kModule, "listener pattern with empty setter, callback or event");
    }
    for (const auto& p : l.params) {
      if (!descriptor::is_valid(p)) throw Error(kModule, "invalid descriptor '" + p + "' in listener " + l.setter);
    }
  }
}

std::map<std::string, std::string> event_vocabulary(const UiConfig& config) {
  std::map<std::string, std::string> out;
  for (const auto& l : config.listeners) {
    out.emplace(l.listener, l.event);
    out.emplace(l.listener + "." + l.callback, l.event);
  }
  for (const auto& f : config.framework_callbacks) out.emplace(f.method, f.event);
  return out;
}

std::string expand_widget_type(const std::string& element_name, bool in_menu) {
  if (in_menu && element_name == "item") return "android.view.MenuItem";
  if (element_name.find('.') != std::string::npos) return element_name;
  if (view_package_types().count(element_name)) return "android.view." + element_name;
  if (element_name == "WebView") return "android.webkit.WebView";
  return "android.widget." + element_name;
}

LayoutExtraction extract_layout_widgets(const std::map<std::string, apk::BinaryXmlDocument>& layouts,
                                        const std::map<std::string, apk::BinaryXmlDocument>& menus,
                                        const apk::ResourceTable& table, const UiConfig& config,
                                        Diagnostics& diags) {
  LayoutExtraction out;
  std::map<std::uint32_t, LayoutWidget> by_id;

  auto visit = [&](const std::string& source, const apk::BinaryXmlDocument& doc, bool in_menu) {
    doc.visit([&](const apk::XmlElement& e, int) {
      const auto* id_attr = e.attribute("id");
      if (!id_attr || id_attr->value.kind != apk::ValueKind::reference || id_attr->value.reference() == 0) {
        if (!skipped_elements().count(e.name)) ++out.skipped;
        return;
      }
      if (skipped_elements().count(e.name)) return;
      const auto id = id_attr->value.reference();

      LayoutWidget w;
      w.source = source;
      w.identifier.widget_id = id;
      if (e.name == "view") {
        const auto* cls = e.attribute("class", "");
        w.identifier.widget_type = cls ? cls->value.to_string() : "android.view.View";
      } else if (e.name == "fragment" || e.name == "androidx.fragment.app.FragmentContainerView") {
        const auto* cls = e.attribute("name");
        w.identifier.widget_type = cls ? cls->value.to_string() : "android.app.Fragment";
      } else {
        w.identifier.widget_type = expand_widget_type(e.name, in_menu);
      }
      if (auto name = table.lookup(id)) {
        w.identifier.widget_name = name->name;
      } else {
        diags.warn(kModule, "widget id " + hex_id(id) + " in " + source + " is not in the resource table");
      }
      for (const auto& qualified : config.icon_attributes) {
        const auto* a = find_qualified(e, qualified);
        if (!a) continue;
        std::string src;
        if (a->value.kind == apk::ValueKind::reference) {
          if (auto path = table.file_path(a->value.reference())) {
            src = *path;
          } else if (auto n = table.lookup(a->value.reference())) {
            src = "@" + n->type + "/" + n->name;
          } else {
            src = "@" + hex_id(a->value.reference());
          }
        } else {
          src = a->value.to_string();
        }
        auto& list = w.identifier.widget_src;
        if (!src.empty() && std::find(list.begin(), list.end(), src) == list.end()) list.push_back(src);
      }
      if (const auto* on_click = e.attribute("onClick"); on_click && on_click->value.kind == apk::ValueKind::string) {
        w.declared.push_back({"click", on_click->value.string});
      }

      auto [it, inserted] = by_id.emplace(id, w);
      if (!inserted) {
        auto& prior = it->second;
        if (prior.identifier.widget_type != w.identifier.widget_type) {
          diags.warn(kModule, "widget id " + hex_id(id) + " declared as " + prior.identifier.widget_type +
                                  " in " + prior.source + " and as " + w.identifier.widget_type + " in " +
                                  source + "; keeping the first");
        }
        for (const auto& s : w.identifier.widget_src) {
          auto& list = prior.identifier.widget_src;
          if (std::find(list.begin(), list.end(), s) == list.end()) list.push_back(s);
        }
        for (const auto& d : w.declared) prior.declared.push_back(d);
      }
    });
  };
  for (const auto& [name, doc] : layouts) visit(name, doc, false);
  for (const auto& [name, doc] : menus) visit(name, doc, true);

  for (auto& [_, w] : by_id) out.widgets.push_back(std::move(w));
  return out;
}

std::set<std::string> screen_classes(const apk::DexModel& dex,
                                     const std::vector<std::string>& manifest_activities) {
  std::set<std::string> out(manifest_activities.begin(), manifest_activities.end());
  auto ends_with = [](const std::string& s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  for (const auto& c : dex.classes()) {
    std::string cur = c.superclass;
    std::set<std::string> seen{c.name};
    while (!cur.empty() && dex.find_class(cur) && seen.insert(cur).second) {
      cur = dex.find_class(cur)->superclass;
    }
    if (!cur.empty() && !dex.find_class(cur) && (ends_with(cur, "Activity") || ends_with(cur, "Fragment"))) {
      out.insert(c.name);
    }
  }
  return out;
}

std::map<std::string, std::set<std::uint32_t>> layout_owners(const apk::DexModel& dex) {
  std::map<std::string, std::set<std::uint32_t>> out;
  for (const auto& m : dex.methods()) {
    if (!m.body) continue;
    for (const auto& inv : m.body->invocations) {
      const auto& name = inv.target.method_name;
      std::optional<apk::RegValue> arg;
      if (name == "setContentView" && inv.args.size() == 2) {
        arg = inv.args[1];
      } else if (name == "inflate" && inv.args.size() >= 2 && !inv.target.param_descriptors.empty() &&
                 inv.target.param_descriptors[0] == "I") {
        arg = inv.args[1];
      }
      if (arg && arg->kind == apk::RegValue::Kind::int_const) {
        out[m.ref.class_name].insert(static_cast<std::uint32_t>(arg->number));
      }
    }
  }
  return out;
}

const apk::MethodDef* find_in_hierarchy(const apk::DexModel& dex, const std::string& cls,
                                        const MethodRef& proto) {
  std::string cur = cls;
  std::set<std::string> seen;
  while (!cur.empty() && seen.insert(cur).second) {
    MethodRef probe = proto;
    probe.class_name = cur;
    if (const auto* m = dex.find_method(probe); m && !m->is_abstract()) return m;
    const auto* c = dex.find_class(cur);
    if (!c) break;
    cur = c->superclass;
  }
  return nullptr;
}

std::vector<WidgetBinding> extract_programmatic_bindings(
    const apk::DexModel& dex, const apk::ResourceTable& table, const UiConfig& config,
    const std::map<std::uint32_t, std::string>& known_widgets, const std::set<std::string>& screens,
    Diagnostics& diags) {
  std::vector<WidgetBinding> out;
  std::map<std::string, const ListenerPattern*> setters;
  for (const auto& l : config.listeners) setters.emplace(l.setter, &l);

  for (const auto& m : dex.methods()) {
    if (!m.body) continue;
    const auto& body = *m.body;
    for (const auto& inv : body.invocations) {
      const auto& name = inv.target.method_name;
      if ((name == "findViewById" || name == "requireViewById") && !inv.args.empty() &&
          inv.args.back().kind != apk::RegValue::Kind::int_const) {
        diags.warn(kModule, "unresolved widget id: " + name + " argument is not a constant in " + m.ref.render());
        continue;
      }
      const auto it = setters.find(name);
      if (it == setters.end() || inv.args.size() != 2) continue;
      const auto& pattern = *it->second;
      const auto widget = receiver_widget_id(body, inv.args[0]);
      if (!widget) {
        diags.info(kModule, "listener receiver of " + name + " in " + m.ref.render() +
                                " is not a findViewById result with a constant id");
        continue;
      }
      const auto& target = inv.args[1];
      if (target.kind != apk::RegValue::Kind::new_instance && target.kind != apk::RegValue::Kind::this_ref) {
        diags.warn(kModule, "unresolved listener target for widget " + hex_id(*widget) + " in " + m.ref.render());
        continue;
      }
      const auto* handler = find_in_hierarchy(dex, target.text, pattern.callback_ref(target.text));
      if (!handler) {
        diags.warn(kModule, "unresolved listener target: " + target.text + " has no " + pattern.callback +
                                " implementation (widget " + hex_id(*widget) + ")");
        continue;
      }
      if (!table.lookup(*widget)) {
        diags.warn(kModule, "widget id " + hex_id(*widget) + " bound in " + m.ref.render() +
                                " is not in the resource table");
      }
      out.emplace_back(*widget, EventBinding{pattern.event, handler->ref, EventOrigin::programmatic});
    }
  }

  for (const auto& cb : config.framework_callbacks) {
    for (const auto& cls : screens) {
      MethodRef probe{cls, cb.method, cb.params, cb.return_type};
      const auto* def = dex.find_method(probe);
      if (!def || def->is_abstract()) continue;
      for (const auto& [id, type] : known_widgets) {
        if (type == cb.widget_type) {
          out.emplace_back(id, EventBinding{cb.event, def->ref, EventOrigin::framework_callback});
        }
      }
    }
  }
  return out;
}

std::vector<WidgetBinding> resolve_xml_handlers(const std::vector<LayoutWidget>& widgets,
                                                const apk::DexModel& dex, const apk::ResourceTable& table,
                                                const std::set<std::string>& screens, Diagnostics& diags) {
  std::vector<WidgetBinding> out;
  const auto owners = layout_owners(dex);
  std::map<std::string, std::uint32_t> layout_ids;  // member path -> layout resource id
  for (const auto& [id, name] : table.entries()) {
    if (name.type != "layout") continue;
    if (auto path = table.file_path(id)) layout_ids.emplace(*path, id);
  }
  for (const auto& w : widgets) {
    if (w.declared.empty()) continue;
    // Classes inflating the widget's layout; any screen class when unknown.
    std::set<std::string> candidates;
    if (const auto lid = layout_ids.find(w.source); lid != layout_ids.end()) {
      for (const auto& [cls, ids] : owners) {
        if (ids.count(lid->second)) candidates.insert(cls);
      }
    }
    if (candidates.empty()) candidates = screens;

    for (const auto& d : w.declared) {
      MethodRef proto{"", d.handler_name, {"Landroid/view/View;"}, "V"};
      std::set<MethodRef> found;
      for (const auto& cls : candidates) {
        if (const auto* m = find_in_hierarchy(dex, cls, proto); m && !m->is_private() && !m->is_static()) {
          found.insert(m->ref);
        }
      }
      if (found.empty()) {
        diags.warn(kModule, "missing handler: no method " + d.handler_name + "(android.view.View) for widget " +
                                hex_id(w.identifier.widget_id) + " in " + w.source);
        continue;
      }
      if (found.size() > 1) {
        diags.warn(kModule, "ambiguous handler: " + d.handler_name + " resolves in " + std::to_string(found.size()) +
                                " classes for widget " + hex_id(w.identifier.widget_id));
      }
      for (const auto& ref : found) {
        out.emplace_back(w.identifier.widget_id, EventBinding{d.event, ref, EventOrigin::xml_attribute});
      }
    }
  }
  return out;
}

std::vector<UiWidget> extract_ui(const apk::LoadedApk& apk, const UiConfig& config, Diagnostics& diags) {
  auto layout = extract_layout_widgets(apk.layouts, apk.menus, apk.resources, config, diags);
  if (layout.skipped > 0) {
    diags.info(kModule, std::to_string(layout.skipped) + " layout elements without an id were skipped");
  }
  const auto screens = screen_classes(apk.dex, apk.manifest.activities);

  std::map<std::uint32_t, UiWidget> widgets;
  std::map<std::uint32_t, std::string> known;
  for (const auto& w : layout.widgets) {
    widgets[w.identifier.widget_id].identifier = w.identifier;
    known.emplace(w.identifier.widget_id, w.identifier.widget_type);
  }

  auto bindings = resolve_xml_handlers(layout.widgets, apk.dex, apk.resources, screens, diags);
  auto programmatic = extract_programmatic_bindings(apk.dex, apk.resources, config, known, screens, diags);
  bindings.insert(bindings.end(), programmatic.begin(), programmatic.end());

  for (auto& [id, binding] : bindings) {
    auto& w = widgets[id];
    if (w.identifier.widget_type.empty()) {
      w.identifier.widget_id = id;
      w.identifier.widget_type = std::string(kUnknownWidgetType);
      if (auto name = apk.resources.lookup(id)) w.identifier.widget_name = name->name;
    }
    w.bindings.push_back(std::move(binding));
  }

  std::vector<UiWidget> out;
  for (auto& [_, w] : widgets) {
    std::sort(w.bindings.begin(), w.bindings.end(), binding_less);
    w.bindings.erase(std::unique(w.bindings.begin(), w.bindings.end()), w.bindings.end());
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace pribom::ui
