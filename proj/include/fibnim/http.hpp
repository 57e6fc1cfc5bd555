#pragma once

// HTTP routes for the game service, all under /api.

#include <functional>
#include <string>

#include <httplib.h>
#include <json.hpp>

#include "fibnim/service.hpp"

namespace fibnim {

namespace detail {

inline void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

/// Runs a handler, mapping ServiceError and malformed JSON to 4xx bodies.
inline void guarded(httplib::Response& res, const std::function<void()>& handler) {
  try {
    handler();
  } catch (const ServiceError& e) {
    send_json(res, e.status(), e.body());
  } catch (const json::exception& e) {
    send_json(res, 400, {{"error", "bad_json"}, {"message", e.what()}});
  } catch (const std::exception& e) {
    send_json(res, 500, {{"error", "internal"}, {"message", e.what()}});
  }
}

}  // namespace detail

inline void mount(httplib::Server& server, Service& service) {
  using detail::guarded;
  using detail::send_json;

  server.Get("/api/health", [&service](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, service.health());
  });

  server.Post("/api/games", [&service](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 201, service.create_game(json::parse(req.body))); });
  });

  server.Get(R"(/api/games/([^/]+))", [&service](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, service.get_game(req.matches[1])); });
  });

  server.Post(R"(/api/games/([^/]+)/moves)", [&service](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, service.submit_move(req.matches[1], json::parse(req.body))); });
  });

  server.Get("/api/analyze", [&service](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      if (!req.has_param("heaps")) throw ServiceError(400, "bad_request", "query parameter 'heaps' is required");
      send_json(res, 200, service.analyze(req.get_param_value("heaps")));
    });
  });
}

}  // namespace fibnim
