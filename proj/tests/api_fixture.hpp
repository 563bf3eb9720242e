#pragma once

#include <memory>
#include <string>
#include <thread>

#include "deme/api.hpp"
#include "deme/service.hpp"
#include "httplib.h"
#include "json.hpp"
#include "test_support.hpp"

namespace testing {

/// A service plus HTTP server on an ephemeral loopback port.
class LiveServer {
public:
  explicit LiveServer(const std::filesystem::path& data_dir, deme::Store::Clock clock = deme::now_utc)
    : service_(data_dir, std::move(clock)), server_(service_) {
    port_ = server_.bind("127.0.0.1", 0).value();
    thread_ = std::thread([this] { server_.listen(); });
  }
  ~LiveServer() {
    server_.stop();
    thread_.join();
  }

  deme::Service& service() { return service_; }
  int port() const { return port_; }

private:
  deme::Service service_;
  deme::api::Server server_;
  int port_ = 0;
  std::thread thread_;
};

struct Reply {
  int status = 0;
  nlohmann::json body;
  std::string raw;
};

/// Minimal JSON client for /api/v1.
class ApiClient {
public:
  explicit ApiClient(int port, std::string member = {}) : client_("127.0.0.1", port), member_(std::move(member)) {
    client_.set_read_timeout(30, 0);
  }

  void as(std::string member) { member_ = std::move(member); }

  Reply get(const std::string& path) { return wrap(client_.Get("/api/v1" + path, headers())); }
  Reply post(const std::string& path, const nlohmann::json& body = nlohmann::json::object()) {
    return wrap(client_.Post("/api/v1" + path, headers(), body.dump(), "application/json"));
  }
  Reply post_raw(const std::string& path, const std::string& body) {
    return wrap(client_.Post("/api/v1" + path, headers(), body, "application/json"));
  }

private:
  httplib::Headers headers() const {
    if (member_.empty()) return {};
    return {{"X-Deme-Member", member_}};
  }
  static Reply wrap(const httplib::Result& r) {
    if (!r) throw std::runtime_error("request failed: " + httplib::to_string(r.error()));
    Reply reply{r->status, nullptr, r->body};
    if (!r->body.empty()) reply.body = nlohmann::json::parse(r->body, nullptr, false);
    return reply;
  }

  httplib::Client client_;
  std::string member_;
};

}  // namespace testing
