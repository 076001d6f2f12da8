#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "ircache/cloud_oracle.hpp"
#include "ircache/protocol.hpp"
#include "ircache/ratio_cache.hpp"

namespace ircache::service {

struct EdgeServiceConfig {
  std::string listen = "127.0.0.1:0";
  /// Cloud address; nullopt disables forwarding and every miss is answered
  /// with Status::CloudUnreachable.
  std::optional<std::string> cloud;
  /// Store cloud answers in the cache (provenance Ingested).
  bool learn = false;
  std::chrono::milliseconds cloud_timeout{10000};
};

/// Edge cache service. Each connection is served by its own thread and keeps
/// its own link to the cloud; lookups run concurrently, learn-mode inserts
/// serialize through the cache's writer lock.
class EdgeService {
 public:
  EdgeService(std::shared_ptr<RatioCache> cache, EdgeServiceConfig config);
  ~EdgeService();
  EdgeService(const EdgeService&) = delete;
  EdgeService& operator=(const EdgeService&) = delete;

  /// Binds and starts accepting. Throws ConnectionError if the listen address
  /// cannot be bound or the configured cloud does not accept a connection.
  void start();
  void stop();
  /// Blocks until stop() is called from another thread.
  void wait();

  std::uint16_t port() const;
  const RatioCache& cache() const noexcept { return *cache_; }

 private:
  struct Impl;
  std::shared_ptr<RatioCache> cache_;
  std::unique_ptr<Impl> impl_;
};

/// Cloud retrieval service answering every well-formed query.
class CloudService {
 public:
  CloudService(std::shared_ptr<const CloudStore> store, std::string listen);
  ~CloudService();
  CloudService(const CloudService&) = delete;
  CloudService& operator=(const CloudService&) = delete;

  void start();
  void stop();
  void wait();
  std::uint16_t port() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Response plus client-side wall-clock time.
struct TimedResponse {
  ResponseMessage response;
  double wall_ms = 0.0;
};

/// Blocking client for one connection. Requests may be pipelined with send()
/// and collected in order with receive().
class EdgeClient {
 public:
  static EdgeClient connect(const std::string& address,
                            std::chrono::milliseconds timeout = std::chrono::seconds(10));
  ~EdgeClient();
  EdgeClient(EdgeClient&&) noexcept;
  EdgeClient& operator=(EdgeClient&&) noexcept;

  TimedResponse query(const std::string& id, std::span<const float> encoding);
  void send(const std::string& id, std::span<const float> encoding);
  /// Writes a raw line, for protocol tests.
  void send_raw(const std::string& line);
  /// Throws TimeoutError, ConnectionError on EOF, ProtocolError on bad JSON.
  ResponseMessage receive();

 private:
  struct Impl;
  explicit EdgeClient(std::unique_ptr<Impl> impl);
  std::unique_ptr<Impl> impl_;
};

/// One-shot query on a fresh connection.
TimedResponse client_query(const std::string& address, const Encoding& encoding,
                           std::chrono::milliseconds timeout = std::chrono::seconds(10));

}  // namespace ircache::service
