#pragma once

#include <cctype>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "zifazah/interpreter.hpp"
#include "zifazah/render.hpp"

namespace zifazah {

inline constexpr std::string_view kUploadedPrefix = "uploaded:";

struct HttpResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

/// 128 random bits as 32 hex digits.
inline std::string new_session_id() {
  static std::random_device rd;
  static std::mutex m;
  std::lock_guard lock(m);
  std::string id;
  for (int i = 0; i < 4; ++i) {
    char buf[9];
    std::snprintf(buf, sizeof buf, "%08x", static_cast<unsigned>(rd()));
    id += buf;
  }
  return id;
}

/// One service session: interpreter state plus the models uploaded to it.
/// `mutex` serializes statement execution and gives reads a consistent view.
struct ServiceSession {
  ServiceSession() : session(uploaded_loader()) {}
  ServiceSession(const ServiceSession&) = delete;
  ServiceSession& operator=(const ServiceSession&) = delete;

  std::mutex mutex;
  Session session;
  std::map<std::string, std::shared_ptr<const FiberModel>> uploads;
  int upload_count = 0;

 private:
  ModelLoader uploaded_loader() {
    return [this](const std::string& path, std::vector<Diagnostic>&) -> std::shared_ptr<const FiberModel> {
      if (!path.starts_with(kUploadedPrefix))
        throw Error("filesystem paths are not accepted by the service; upload the model and LOAD \"uploaded:<name>\"");
      const auto it = uploads.find(path.substr(kUploadedPrefix.size()));
      if (it == uploads.end()) throw Error("no uploaded model named '" + path.substr(kUploadedPrefix.size()) + "'");
      return it->second;
    };
  }
};

class SessionRegistry {
 public:
  std::string create() {
    std::lock_guard lock(mutex_);
    std::string id;
    do id = new_session_id();
    while (sessions_.contains(id));
    sessions_.emplace(id, std::make_shared<ServiceSession>());
    return id;
  }

  std::shared_ptr<ServiceSession> find(const std::string& id) const {
    std::lock_guard lock(mutex_);
    const auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
  }

  bool erase(const std::string& id) {
    std::lock_guard lock(mutex_);
    return sessions_.erase(id) > 0;
  }

  std::vector<std::string> ids() const {
    std::lock_guard lock(mutex_);
    std::vector<std::string> out;
    for (const auto& [id, s] : sessions_) out.push_back(id);
    return out;
  }

 private:
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<ServiceSession>> sessions_;
};

namespace detail {

using nlohmann::json;

inline HttpResponse json_response(int status, const json& j) { return {status, "application/json", j.dump() + "\n"}; }

inline HttpResponse error_response(int status, const std::string& message, json diagnostics = nullptr) {
  json j{{"error", message}};
  if (!diagnostics.is_null()) j["diagnostics"] = std::move(diagnostics);
  return json_response(status, j);
}

inline json diagnostic_json(const Diagnostic& d) {
  return {{"level", std::string(to_string(d.level))}, {"message", d.message}, {"line", d.line}, {"column", d.column}};
}

inline json entry_json(const LogEntry& e) {
  json j{{"seq", e.seq},
         {"kind", std::string(to_string(e.kind))},
         {"message", e.message},
         {"line", e.line},
         {"column", e.column}};
  if (e.name) j["name"] = *e.name;
  if (e.value) j["value"] = *e.value;
  return j;
}

inline json vec_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

inline std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < path.size()) {
    while (i < path.size() && path[i] == '/') ++i;
    std::size_t j = i;
    while (j < path.size() && path[j] != '/') ++j;
    if (j > i) out.emplace_back(path.substr(i, j - i));
    i = j;
  }
  return out;
}

inline bool valid_upload_name(std::string_view name) {
  if (name.empty() || name.size() > 64) return false;
  for (char c : name)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) return false;
  return true;
}

inline std::optional<Vec3> parse_vector(std::string_view text) {
  Vec3 v;
  for (int axis = 0; axis < 3; ++axis) {
    const std::size_t comma = text.find(',');
    if ((axis < 2) == (comma == std::string_view::npos)) return std::nullopt;
    const auto d = parse_double(text.substr(0, comma));
    if (!d) return std::nullopt;
    v[axis] = *d;
    text = axis < 2 ? text.substr(comma + 1) : std::string_view{};
  }
  return v;
}

}  // namespace detail

using Query = std::map<std::string, std::string>;

/// Transport-independent request handling; the HTTP server forwards to it.
class ServiceApi {
 public:
  HttpResponse handle(std::string_view method, std::string_view path, const Query& query = {},
                      std::string_view body = {}) {
    using detail::error_response;
    const auto parts = detail::split_path(path);
    if (parts.empty() || parts[0] != "sessions") return error_response(404, "not found");
    if (parts.size() == 1) {
      if (method == "POST") return create_session();
      if (method == "GET") return list_sessions();
      return error_response(405, "method not allowed");
    }
    auto entry = registry_.find(parts[1]);
    if (!entry) return error_response(404, "unknown session");
    if (parts.size() == 2) {
      if (method == "DELETE") {
        registry_.erase(parts[1]);
        return detail::json_response(200, {{"deleted", parts[1]}});
      }
      return error_response(405, "method not allowed");
    }
    if (parts.size() != 3) return error_response(404, "not found");
    const std::string& what = parts[2];
    try {
      if (what == "model" && method == "POST") return upload_model(*entry, query, body);
      if (what == "run" && method == "POST") return run(*entry, body);
      if (what == "scene" && method == "GET") return scene(*entry, query);
      if (what == "messages" && method == "GET") return messages(*entry, query);
      if (what == "variables" && method == "GET") return variables(*entry);
    } catch (const nlohmann::json::exception& e) {
      return error_response(400, std::string("malformed request: ") + e.what());
    }
    if (what == "model" || what == "run" || what == "scene" || what == "messages" || what == "variables")
      return error_response(405, "method not allowed");
    return error_response(404, "not found");
  }

  SessionRegistry& registry() { return registry_; }

 private:
  SessionRegistry registry_;

  HttpResponse create_session() {
    return detail::json_response(201, {{"id", registry_.create()}});
  }

  HttpResponse list_sessions() const {
    return detail::json_response(200, {{"sessions", registry_.ids()}});
  }

  static HttpResponse upload_model(ServiceSession& e, const Query& query, std::string_view body) {
    std::lock_guard lock(e.mutex);
    std::string name;
    if (const auto it = query.find("name"); it != query.end()) {
      name = it->second;
      if (!detail::valid_upload_name(name)) return detail::error_response(400, "invalid model name");
    }
    ModelLoad loaded;
    try {
      loaded = parse_model(body);
    } catch (const Error& err) {
      return detail::error_response(422, "invalid model", nlohmann::json::array({detail::diagnostic_json(err.diagnostic())}));
    }
    if (name.empty()) {
      do name = "model" + std::to_string(++e.upload_count);
      while (e.uploads.contains(name));
    }
    auto model = std::make_shared<const FiberModel>(std::move(loaded.model));
    const Box b = model->bounds();
    nlohmann::json diags = nlohmann::json::array();
    for (const auto& d : loaded.diagnostics) diags.push_back(detail::diagnostic_json(d));
    nlohmann::json summary{{"name", name},
                           {"load", std::string(kUploadedPrefix) + name},
                           {"fibers", model->size()},
                           {"vertices", model->vertex_count()},
                           {"bundles", model->bundles()},
                           {"bounds", {{"min", detail::vec_json(b.min)}, {"max", detail::vec_json(b.max)}}},
                           {"diagnostics", diags}};
    e.uploads[name] = std::move(model);
    return detail::json_response(201, summary);
  }

  static HttpResponse run(ServiceSession& e, std::string_view body) {
    const auto req = nlohmann::json::parse(body);
    const std::string script = req.at("script").get<std::string>();
    const std::string mode = req.value("mode", std::string("full"));
    if (mode != "full" && mode != "single") return detail::error_response(400, "mode must be 'full' or 'single'");
    if (mode == "single" && parse_script(script).script.statements.size() > 1)
      return detail::error_response(400, "single mode takes one statement");
    if (mode == "full" && script.find_first_not_of(" \t\r\n") == std::string::npos)
      return detail::error_response(400, "empty script");

    std::lock_guard lock(e.mutex);
    const ExecutionOutcome out = mode == "full" ? run_full(script, e.session) : run_source(script, e.session);
    nlohmann::json msgs = nlohmann::json::array();
    for (const auto& m : out.messages) msgs.push_back(detail::entry_json(m));
    return detail::json_response(200, {{"statements_run", out.statements_run},
                                       {"halted_at", out.halted_at ? nlohmann::json(*out.halted_at) : nullptr},
                                       {"scene_dirty", out.scene_dirty},
                                       {"generation", e.session.generation},
                                       {"messages", msgs}});
  }

  static HttpResponse scene(ServiceSession& e, const Query& query) {
    ViewSpec view;
    if (const auto it = query.find("view"); it != query.end()) {
      const auto v = detail::parse_vector(it->second);
      if (!v) return detail::error_response(400, "view must be x,y,z");
      try {
        view = ViewSpec::toward(*v);
      } catch (const Error& err) {
        return detail::error_response(400, err.what());
      }
    }
    bool meshes = false;
    if (const auto it = query.find("detail"); it != query.end()) {
      if (it->second == "meshes")
        meshes = true;
      else if (it->second != "attributes")
        return detail::error_response(400, "detail must be 'attributes' or 'meshes'");
    }
    std::lock_guard lock(e.mutex);
    if (!e.session.has_model()) return detail::error_response(409, "no model loaded");
    return {200, "application/json", serialize_snapshot(emit_snapshot(e.session, view, meshes))};
  }

  static HttpResponse messages(ServiceSession& e, const Query& query) {
    std::uint64_t since = 0;
    if (const auto it = query.find("since"); it != query.end()) {
      const auto v = parse_integer(it->second);
      if (!v || *v < 0) return detail::error_response(400, "since must be a non-negative integer");
      since = static_cast<std::uint64_t>(*v);
    }
    std::lock_guard lock(e.mutex);
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& m : e.session.log)
      if (m.seq > since) entries.push_back(detail::entry_json(m));
    return detail::json_response(200, {{"entries", entries}, {"next", e.session.last_seq()}});
  }

  static HttpResponse variables(ServiceSession& e) {
    std::lock_guard lock(e.mutex);
    nlohmann::json vars = nlohmann::json::array();
    for (const auto& [name, value] : e.session.env) {
      nlohmann::json v{{"name", name}};
      if (const auto* ids = std::get_if<FiberSet>(&value)) {
        v["type"] = "fiber-set";
        v["size"] = ids->size();
        v["ids"] = *ids;
      } else if (const auto* d = std::get_if<double>(&value)) {
        v["type"] = "scalar";
        v["value"] = *d;
      } else {
        v["type"] = "model";
        v["source"] = std::get<ModelHandle>(value).source;
      }
      vars.push_back(std::move(v));
    }
    return detail::json_response(200, {{"variables", vars}});
  }
};

}  // namespace zifazah
