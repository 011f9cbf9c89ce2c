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

#include "pribom/server.hpp"

#include "httplib.h"

#include <mutex>

#include "pribom/io.hpp"
#include "pribom/model_json.hpp"
#include "pribom/query.hpp"

namespace pribom {
namespace {

using nlohmann::json;

constexpr const char* kModule = "pribom-serve";
constexpr const char* kJson = "application/json";
constexpr const char* kRevisionHeader = "X-PriBOM-Revision";

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(to_payload(body), kJson);
}

void reply_error(httplib::Response& res, int status, const std::string& message) {
  reply(res, status, json{{"error", message}});
}

void set_revision(httplib::Response& res, std::uint64_t revision) {
  res.set_header(kRevisionHeader, std::to_string(revision));
  res.set_header("ETag", "\"" + std::to_string(revision) + "\"");
}

// Runs `fn`, mapping failures onto status codes.
template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const StaleRevision& e) {
      reply(res, 409, json{{"error", e.what()}, {"revision", e.current()}});
    } catch (const NotFound& e) {
      reply_error(res, 404, e.what());
    } catch (const BadRequest& e) {
      reply_error(res, 400, e.what());
    } catch (const json::exception& e) {
      reply_error(res, 400, std::string("malformed JSON body: ") + e.what());
    } catch (const Error& e) {
      reply_error(res, 400, e.what());
    } catch (const std::exception& e) {
      reply_error(res, 500, e.what());
    }
  };
}

}  // namespace

std::string to_payload(const json& j) { return j.dump(2) + "\n"; }

StaleRevision::StaleRevision(std::uint64_t expected, std::uint64_t actual)
    : Error(kModule, "edit is based on revision " + std::to_string(expected) + " but the document is at revision " +
                         std::to_string(actual)),
      actual_(actual) {}

DocumentStore::DocumentStore(PriBomDocument doc, std::filesystem::path path)
    : doc_(normalize(std::move(doc))), path_(std::move(path)) {}

DocumentStore DocumentStore::load(const std::filesystem::path& path) {
  return DocumentStore(decode(read_file(path, kModule)), path);
}

std::pair<PriBomDocument, std::uint64_t> DocumentStore::snapshot() const {
  std::shared_lock lock(mutex_);
  return {doc_, revision_};
}

std::uint64_t DocumentStore::revision() const {
  std::shared_lock lock(mutex_);
  return revision_;
}

std::uint64_t DocumentStore::edit_disclosure(std::string_view selector, const json& body) {
  if (!body.is_object()) throw BadRequest("edit body must be a JSON object");
  if (!body.contains("revision") || !body.at("revision").is_number_unsigned()) {
    throw BadRequest("edit body needs the revision it was based on");
  }
  for (const auto& [key, _] : body.items()) {
    if (key != "revision" && key != "widget_name" && key != "policy_segments" && key != "label_declarations") {
      throw BadRequest("field " + key + " is not editable");
    }
  }
  std::unique_lock lock(mutex_);
  const auto based_on = body.at("revision").get<std::uint64_t>();
  if (based_on != revision_) throw StaleRevision(based_on, revision_);
  const auto id = select_widget(doc_, selector).identifier.widget_id;
  auto next = doc_;
  auto& entry = *next.find(id);
  try {
    if (body.contains("widget_name")) {
      const auto& n = body.at("widget_name");
      if (!n.is_null() && !n.is_string()) throw BadRequest("widget_name must be a string or null");
      entry.identifier.widget_name = n.is_null() ? std::nullopt : std::optional(n.get<std::string>());
    }
    if (body.contains("policy_segments")) {
      const auto& list = body.at("policy_segments");
      if (!list.is_array()) throw BadRequest("policy_segments must be an array");
      entry.policy_segments.clear();
      for (std::size_t i = 0; i < list.size(); ++i) {
        entry.policy_segments.push_back(policy_segment_from_json(list[i], "/policy_segments/" + std::to_string(i)));
      }
    }
    if (body.contains("label_declarations")) {
      const auto& list = body.at("label_declarations");
      if (!list.is_array()) throw BadRequest("label_declarations must be an array");
      entry.label_declarations.clear();
      for (std::size_t i = 0; i < list.size(); ++i) {
        entry.label_declarations.push_back(
            label_declaration_from_json(list[i], "/label_declarations/" + std::to_string(i)));
      }
    }
  } catch (const DecodeError& e) {
    throw BadRequest(e.what());
  }
  next = normalize(std::move(next));
  if (const auto violations = validate(next); !violations.empty()) throw BadRequest(violations.front());
  doc_ = std::move(next);
  return ++revision_;
}

std::filesystem::path DocumentStore::save() const {
  std::shared_lock lock(mutex_);
  write_file_atomic(path_, encode(doc_));
  return path_;
}

struct HttpService::Impl {
  DocumentStore& store;
  httplib::Server server;
  Impl(DocumentStore& s) : store(s) {}
};

HttpService::HttpService(DocumentStore& store, std::filesystem::path web_root)
    : impl_(std::make_unique<Impl>(store)) {
  auto& svr = impl_->server;
  auto& st = impl_->store;

  svr.Get("/api/document", guarded([&st](const httplib::Request&, httplib::Response& res) {
            const auto [doc, rev] = st.snapshot();
            set_revision(res, rev);
            res.status = 200;
            res.set_content(encode(doc), kJson);
          }));
  svr.Get("/api/widgets", guarded([&st](const httplib::Request&, httplib::Response& res) {
            const auto [doc, rev] = st.snapshot();
            set_revision(res, rev);
            reply(res, 200, json(doc.entries));
          }));
  svr.Get(R"(/api/widgets/([^/]+))", guarded([&st](const httplib::Request& req, httplib::Response& res) {
            const auto [doc, rev] = st.snapshot();
            set_revision(res, rev);
            reply(res, 200, json(select_widget(doc, req.matches[1].str())));
          }));
  svr.Get(R"(/api/trace/([^/]+))", guarded([&st](const httplib::Request& req, httplib::Response& res) {
            const auto [doc, rev] = st.snapshot();
            set_revision(res, rev);
            reply(res, 200, trace(doc, req.matches[1].str()));
          }));
  svr.Get("/api/track", guarded([&st](const httplib::Request& req, httplib::Response& res) {
            const auto kind = parse_track_kind(req.get_param_value("type"));
            if (!kind) throw BadRequest("type must be permission, data_type, tpl or policy");
            const auto [doc, rev] = st.snapshot();
            set_revision(res, rev);
            reply(res, 200, track(doc, *kind, req.get_param_value("value")));
          }));
  svr.Post("/api/check", guarded([&st](const httplib::Request&, httplib::Response& res) {
             const auto [doc, rev] = st.snapshot();
             set_revision(res, rev);
             reply(res, 200, check(doc));
           }));
  svr.Get("/api/diff", guarded([&st](const httplib::Request& req, httplib::Response& res) {
            const auto against = req.get_param_value("against");
            if (against.empty()) throw BadRequest("diff needs ?against=<document path>");
            if (!std::filesystem::exists(against)) throw NotFound("no document at " + against);
            const auto before = decode(read_file(against, kModule));
            const auto [doc, rev] = st.snapshot();
            set_revision(res, rev);
            reply(res, 200, diff(before, doc));
          }));
  svr.Patch(R"(/api/widgets/([^/]+)/disclosure)",
            guarded([&st](const httplib::Request& req, httplib::Response& res) {
              const auto id = std::to_string(select_widget(st.snapshot().first, req.matches[1].str())
                                                 .identifier.widget_id);
              const auto body = json::parse(req.body);
              const auto rev = st.edit_disclosure(id, body);
              const auto [doc, current] = st.snapshot();
              set_revision(res, current);
              const auto& entry = select_widget(doc, id);
              reply(res, 200, json{{"revision", rev}, {"entry", entry}});
            }));
  svr.Post("/api/save", guarded([&st](const httplib::Request&, httplib::Response& res) {
             const auto rev = st.revision();
             const auto path = st.save();
             set_revision(res, rev);
             reply(res, 200, json{{"revision", rev}, {"path", path.string()}});
           }));

  if (!web_root.empty() && std::filesystem::is_directory(web_root)) {
    svr.set_mount_point("/", web_root.string());
  } else {
    svr.Get("/", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("pribom service: the web UI is not installed; the API lives under /api\n", "text/plain");
    });
  }
}

HttpService::~HttpService() { stop(); }

int HttpService::bind(const std::string& host, int port) {
  auto& svr = impl_->server;
  if (port == 0) {
    const int p = svr.bind_to_any_port(host);
    if (p < 0) throw Error(kModule, "cannot bind " + host);
    return p;
  }
  if (!svr.bind_to_port(host, port)) throw Error(kModule, "cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void HttpService::listen() { impl_->server.listen_after_bind(); }

void HttpService::stop() {
  if (impl_) impl_->server.stop();
}

std::pair<std::string, int> parse_address(const std::string& addr) {
  const auto colon = addr.rfind(':');
  const std::string host = colon == std::string::npos ? "" : addr.substr(0, colon);
  const std::string port = colon == std::string::npos ? addr : addr.substr(colon + 1);
  int p = -1;
  try {
    std::size_t used = 0;
    p = std::stoi(port, &used);
    if (used != port.size()) p = -1;
  } catch (const std::exception&) {
  }
  if (p < 0 || p > 65535) throw Error(kModule, "address must be [host:]port, got '" + addr + "'");
  return {host.empty() ? "127.0.0.1" : host, p};
}

}  // namespace pribom
