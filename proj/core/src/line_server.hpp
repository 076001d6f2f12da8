#pragma once

#include <atomic>
#include <condition_variable>
#include <functional>
#include <list>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>

#include "socket.hpp"

namespace ircache::service::detail {

/// Per-connection request handler: one response line per request line.
class LineHandler {
 public:
  virtual ~LineHandler() = default;
  virtual std::string handle(std::string_view line) = 0;
};

using HandlerFactory = std::function<std::unique_ptr<LineHandler>()>;

/// Thread-per-connection TCP server for newline-framed request/response.
class LineServer {
 public:
  LineServer(std::string listen, HandlerFactory factory);
  ~LineServer();

  void start();
  void stop();
  void wait();
  std::uint16_t port() const noexcept { return port_; }

 private:
  struct Connection {
    std::unique_ptr<LineChannel> channel;
    std::thread thread;
    std::atomic<bool> done{false};
  };

  void accept_loop();
  void serve(Connection& conn);
  void reap_finished();

  std::string listen_;
  HandlerFactory factory_;
  Fd listener_;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::thread acceptor_;

  std::mutex mutex_;
  std::condition_variable stopped_cv_;
  bool running_ = false;
  std::list<Connection> connections_;
};

}  // namespace ircache::service::detail
