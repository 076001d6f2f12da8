#include "ircache/edge_service.hpp"

#include <chrono>
#include <utility>

#include "line_server.hpp"
#include "socket.hpp"

namespace ircache::service {

namespace detail {

namespace {
constexpr std::chrono::milliseconds kPollInterval{100};
}

LineServer::LineServer(std::string listen, HandlerFactory factory)
    : listen_(std::move(listen)), factory_(std::move(factory)) {}

LineServer::~LineServer() { stop(); }

void LineServer::start() {
  std::lock_guard lock(mutex_);
  if (running_) return;
  listener_ = listen_tcp(parse_address(listen_));
  port_ = local_port(listener_);
  stopping_ = false;
  running_ = true;
  acceptor_ = std::thread([this] { accept_loop(); });
}

void LineServer::accept_loop() {
  while (!stopping_) {
    Fd conn = accept_for(listener_, kPollInterval);
    reap_finished();
    if (!conn.valid()) continue;
    std::lock_guard lock(mutex_);
    auto& c = connections_.emplace_back();
    c.channel = std::make_unique<LineChannel>(std::move(conn));
    c.thread = std::thread([this, &c] { serve(c); });
  }
}

void LineServer::serve(Connection& conn) {
  std::unique_ptr<LineHandler> handler = factory_();
  try {
    while (!stopping_) {
      std::optional<std::string> line;
      try {
        line = conn.channel->read_line(kPollInterval);
      } catch (const TimeoutError&) {
        continue;
      }
      if (!line) break;
      if (line->empty()) continue;
      conn.channel->write_line(handler->handle(*line));
    }
  } catch (const Error&) {
    // Peer reset or oversized line: drop the connection.
  }
  conn.channel->shutdown();
  conn.done = true;
}

void LineServer::reap_finished() {
  std::lock_guard lock(mutex_);
  for (auto it = connections_.begin(); it != connections_.end();) {
    if (it->done) {
      it->thread.join();
      it = connections_.erase(it);
    } else {
      ++it;
    }
  }
}

void LineServer::stop() {
  {
    std::lock_guard lock(mutex_);
    if (!running_) return;
  }
  stopping_ = true;
  if (acceptor_.joinable()) acceptor_.join();
  std::list<Connection> remaining;
  {
    std::lock_guard lock(mutex_);
    remaining.swap(connections_);
  }
  for (auto& c : remaining) {
    c.channel->shutdown();
    if (c.thread.joinable()) c.thread.join();
  }
  listener_.reset();
  {
    std::lock_guard lock(mutex_);
    running_ = false;
  }
  stopped_cv_.notify_all();
}

void LineServer::wait() {
  std::unique_lock lock(mutex_);
  stopped_cv_.wait(lock, [this] { return !running_; });
}

}  // namespace detail

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

// Lazily connected link from one edge connection to the cloud.
class CloudLink {
 public:
  CloudLink(std::optional<std::string> address, std::chrono::milliseconds timeout)
      : address_(std::move(address)), timeout_(timeout) {}

  bool enabled() const noexcept { return address_.has_value(); }

  ResponseMessage query(const QueryMessage& q) {
    try {
      if (!channel_) {
        channel_ = std::make_unique<detail::LineChannel>(
            detail::connect_tcp(detail::parse_address(*address_), timeout_));
      }
      channel_->write_line(encode_query(q));
      auto line = channel_->read_line(timeout_);
      if (!line) throw ConnectionError("cloud closed the connection");
      ResponseMessage r = decode_response(*line);
      if (r.id != q.id) throw ConnectionError("cloud answered out of order");
      return r;
    } catch (const Error&) {
      channel_.reset();
      throw;
    }
  }

 private:
  std::optional<std::string> address_;
  std::chrono::milliseconds timeout_;
  std::unique_ptr<detail::LineChannel> channel_;
};

class EdgeHandler final : public detail::LineHandler {
 public:
  EdgeHandler(std::shared_ptr<RatioCache> cache, const EdgeServiceConfig& config)
      : cache_(std::move(cache)),
        learn_(config.learn),
        cloud_(config.cloud, config.cloud_timeout) {}

  std::string handle(std::string_view line) override {
    const auto arrived = Clock::now();
    QueryMessage q;
    try {
      q = decode_query(line);
    } catch (const ProtocolError& e) {
      return encode_response(error_response(e.id(), Status::Malformed, e.what()));
    }
    if (q.encoding.size() != cache_->dim()) {
      return encode_response(error_response(
          q.id, Status::DimensionMismatch,
          "expected " + std::to_string(cache_->dim()) + " values, got " +
              std::to_string(q.encoding.size())));
    }

    try {
      Encoding encoding(std::move(q.encoding));
      const LookupResult lookup = cache_->lookup(encoding);

      ResponseMessage r;
      r.id = q.id;
      r.d1 = lookup.d1;
      r.ratio = lookup.ratio;
      if (lookup.hit()) {
        r.source = Source::Cache;
        r.content = lookup.matched_content->payload;
        r.content_id = lookup.matched_content->id;
      } else {
        if (!cloud_.enabled()) {
          return encode_response(
              error_response(q.id, Status::CloudUnreachable, "cloud forwarding disabled"));
        }
        QueryMessage forward{q.id, std::vector<float>(encoding.values().begin(),
                                                      encoding.values().end())};
        ResponseMessage cloud;
        try {
          cloud = cloud_.query(forward);
        } catch (const Error& e) {
          return encode_response(
              error_response(q.id, Status::CloudUnreachable, e.what()));
        }
        if (!cloud.ok()) {
          return encode_response(error_response(q.id, Status::CloudUnreachable,
                                                "cloud error: " + cloud.error));
        }
        r.source = Source::Cloud;
        r.content = cloud.content;
        r.content_id = cloud.content_id;
        if (learn_) {
          try {
            cache_->insert_result(CacheEntry{std::move(encoding),
                                             ContentLabel{cloud.content_id, cloud.content},
                                             Provenance::Ingested});
          } catch (const CapacityExceeded&) {
          }
        }
      }
      r.latency_ms = elapsed_ms(arrived);
      return encode_response(r);
    } catch (const InvalidEncoding& e) {
      return encode_response(error_response(q.id, Status::Malformed, e.what()));
    } catch (const std::exception& e) {
      return encode_response(error_response(q.id, Status::Internal, e.what()));
    }
  }

 private:
  std::shared_ptr<RatioCache> cache_;
  bool learn_;
  CloudLink cloud_;
};

class CloudHandler final : public detail::LineHandler {
 public:
  explicit CloudHandler(std::shared_ptr<const CloudStore> store)
      : store_(std::move(store)) {}

  std::string handle(std::string_view line) override {
    const auto arrived = Clock::now();
    QueryMessage q;
    try {
      q = decode_query(line);
    } catch (const ProtocolError& e) {
      return encode_response(error_response(e.id(), Status::Malformed, e.what()));
    }
    if (q.encoding.size() != store_->dim()) {
      return encode_response(error_response(
          q.id, Status::DimensionMismatch,
          "expected " + std::to_string(store_->dim()) + " values"));
    }
    try {
      const CloudAnswer answer = store_->resolve(Encoding(std::move(q.encoding)));
      ResponseMessage r;
      r.id = q.id;
      r.source = Source::Cloud;
      r.content = answer.content.payload;
      r.content_id = answer.content.id;
      r.d1 = answer.trace.d1;
      r.ratio = answer.trace.ratio;
      r.latency_ms = elapsed_ms(arrived);
      return encode_response(r);
    } catch (const std::exception& e) {
      return encode_response(error_response(q.id, Status::Internal, e.what()));
    }
  }

 private:
  std::shared_ptr<const CloudStore> store_;
};

}  // namespace

struct EdgeService::Impl {
  EdgeServiceConfig config;
  detail::LineServer server;

  Impl(std::shared_ptr<RatioCache> cache, EdgeServiceConfig cfg)
      : config(std::move(cfg)),
        server(config.listen, [cache, c = config] {
          return std::make_unique<EdgeHandler>(cache, c);
        }) {}
};

EdgeService::EdgeService(std::shared_ptr<RatioCache> cache, EdgeServiceConfig config)
    : cache_(std::move(cache)),
      impl_(std::make_unique<Impl>(cache_, std::move(config))) {}

EdgeService::~EdgeService() = default;

void EdgeService::start() {
  if (impl_->config.cloud) {
    // Probe once so a wrong --cloud fails at startup.
    detail::connect_tcp(detail::parse_address(*impl_->config.cloud),
                        impl_->config.cloud_timeout);
  }
  impl_->server.start();
}

void EdgeService::stop() { impl_->server.stop(); }
void EdgeService::wait() { impl_->server.wait(); }
std::uint16_t EdgeService::port() const { return impl_->server.port(); }

struct CloudService::Impl {
  detail::LineServer server;

  Impl(std::shared_ptr<const CloudStore> store, std::string listen)
      : server(std::move(listen), [store] { return std::make_unique<CloudHandler>(store); }) {}
};

CloudService::CloudService(std::shared_ptr<const CloudStore> store, std::string listen)
    : impl_(std::make_unique<Impl>(std::move(store), std::move(listen))) {
}

CloudService::~CloudService() = default;

void CloudService::start() { impl_->server.start(); }
void CloudService::stop() { impl_->server.stop(); }
void CloudService::wait() { impl_->server.wait(); }
std::uint16_t CloudService::port() const { return impl_->server.port(); }

}  // namespace ircache::service
