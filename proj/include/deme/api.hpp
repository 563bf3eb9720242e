#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "deme/json_codec.hpp"
#include "deme/model.hpp"
#include "deme/service.hpp"

namespace httplib {
class Server;
}

namespace deme::api {

inline constexpr std::string_view kMemberHeader = "X-Deme-Member";
inline constexpr std::string_view kPrefix = "/api/v1";

// -- payload builders (pure functions of the state) ---------------------------

/// Document body of one version (latest by default) together with its
/// discussion, the current span references migrated into that version, and
/// the document's polls with live outcomes.
codec::json meeting_view(const model::State& state, std::string_view document_id,
                         std::optional<std::uint64_t> version_number = std::nullopt);

codec::json document_json(const model::State& state, std::string_view document_id);
codec::json threads_json(const model::State& state, std::string_view document_id);
codec::json poll_json(const decision::Poll& poll);

codec::json error_json(std::string_view code, std::string_view message);

// -- HTTP server ---------------------------------------------------------------

struct ServerOptions {
  std::size_t worker_threads = 16;
  std::chrono::milliseconds max_long_poll{60000};
};

class Server {
public:
  explicit Server(Service& service, ServerOptions options = {});
  ~Server();

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds host:port (port 0 picks a free port). Returns the bound port, or
  /// nullopt if binding failed.
  std::optional<int> bind(const std::string& host, int port);

  /// Serves until stop(). Requires a successful bind().
  void listen();
  void stop();

private:
  void install_routes();

  Service& service_;
  ServerOptions options_;
  std::unique_ptr<httplib::Server> http_;
  std::atomic<bool> stopping_{false};
};

}  // namespace deme::api
