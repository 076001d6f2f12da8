#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "ircache/protocol.hpp"

namespace ircache::service::detail {

struct Address {
  std::string host;
  std::uint16_t port = 0;
};

/// "host:port" or ":port"/"port" (host defaults to 127.0.0.1).
Address parse_address(std::string_view spec);

class Fd {
 public:
  Fd() = default;
  explicit Fd(int fd) noexcept : fd_(fd) {}
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  Fd(Fd&& other) noexcept : fd_(other.release()) {}
  Fd& operator=(Fd&& other) noexcept;
  ~Fd() { reset(); }

  int get() const noexcept { return fd_; }
  bool valid() const noexcept { return fd_ >= 0; }
  int release() noexcept {
    int f = fd_;
    fd_ = -1;
    return f;
  }
  void reset() noexcept;

 private:
  int fd_ = -1;
};

Fd listen_tcp(const Address& address, int backlog = 64);
std::uint16_t local_port(const Fd& fd);
/// Waits up to `timeout` for a connection. Returns an invalid Fd on timeout.
Fd accept_for(const Fd& listener, std::chrono::milliseconds timeout);
Fd connect_tcp(const Address& address, std::chrono::milliseconds timeout);

/// Buffered newline framing over a connected socket.
class LineChannel {
 public:
  static constexpr std::size_t kMaxLine = 64u << 20;

  explicit LineChannel(Fd fd) : fd_(std::move(fd)) {}

  /// Next line without its terminator, or nullopt on orderly EOF. Throws
  /// TimeoutError if no complete line arrives within `timeout`.
  std::optional<std::string> read_line(std::chrono::milliseconds timeout);
  /// Appends '\n'. Throws ConnectionError.
  void write_line(std::string_view line);

  bool valid() const noexcept { return fd_.valid(); }
  void shutdown() noexcept;

 private:
  Fd fd_;
  std::string buffer_;
  std::size_t scan_from_ = 0;
};

}  // namespace ircache::service::detail
