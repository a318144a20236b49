#pragma once

#include <string>

#include <httplib.h>

#include "zifazah/service.hpp"

namespace zifazah {

/// Forwards every request under /sessions to `api`.
inline void bind_routes(httplib::Server& server, ServiceApi& api) {
  auto forward = [&api](const httplib::Request& req, httplib::Response& res) {
    Query query;
    for (const auto& [k, v] : req.params) query.emplace(k, v);
    const HttpResponse r = api.handle(req.method, req.path, query, req.body);
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  server.Get(R"(/sessions.*)", forward);
  server.Post(R"(/sessions.*)", forward);
  server.Delete(R"(/sessions.*)", forward);
}

inline int port_from_env(int fallback = 8080) {
  if (const char* p = std::getenv("ZIFAZAH_PORT")) {
    if (const auto v = parse_integer(p); v && *v > 0 && *v < 65536) return static_cast<int>(*v);
  }
  return fallback;
}

}  // namespace zifazah
