#include "socket.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>

namespace ircache::service::detail {

namespace {

std::string errno_message(const std::string& what) {
  return what + ": " + std::strerror(errno);
}

using Clock = std::chrono::steady_clock;

int remaining_ms(Clock::time_point deadline) {
  const auto left =
      std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
  return left.count() < 0 ? 0 : static_cast<int>(left.count());
}

sockaddr_in resolve(const Address& address) {
  sockaddr_in sa{};
  sa.sin_family = AF_INET;
  sa.sin_port = htons(address.port);
  const std::string host = address.host.empty() ? "127.0.0.1" : address.host;
  if (host == "localhost") {
    sa.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    return sa;
  }
  if (inet_pton(AF_INET, host.c_str(), &sa.sin_addr) == 1) return sa;

  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  if (getaddrinfo(host.c_str(), nullptr, &hints, &res) != 0 || res == nullptr) {
    throw ConnectionError("cannot resolve host '" + host + "'");
  }
  sa.sin_addr = reinterpret_cast<sockaddr_in*>(res->ai_addr)->sin_addr;
  freeaddrinfo(res);
  return sa;
}

void set_nodelay(int fd) {
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

}  // namespace

Address parse_address(std::string_view spec) {
  Address a;
  std::string_view port_part = spec;
  const auto colon = spec.rfind(':');
  if (colon != std::string_view::npos) {
    a.host = std::string(spec.substr(0, colon));
    port_part = spec.substr(colon + 1);
  }
  if (a.host.empty()) a.host = "127.0.0.1";
  unsigned port = 0;
  auto [ptr, ec] = std::from_chars(port_part.data(), port_part.data() + port_part.size(), port);
  if (ec != std::errc{} || ptr != port_part.data() + port_part.size() || port > 65535) {
    throw ConnectionError("invalid address '" + std::string(spec) + "'");
  }
  a.port = static_cast<std::uint16_t>(port);
  return a;
}

Fd& Fd::operator=(Fd&& other) noexcept {
  if (this != &other) {
    reset();
    fd_ = other.release();
  }
  return *this;
}

void Fd::reset() noexcept {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

Fd listen_tcp(const Address& address, int backlog) {
  Fd fd(::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0));
  if (!fd.valid()) throw ConnectionError(errno_message("socket"));
  int one = 1;
  ::setsockopt(fd.get(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in sa = resolve(address);
  if (::bind(fd.get(), reinterpret_cast<sockaddr*>(&sa), sizeof(sa)) != 0) {
    throw ConnectionError(errno_message("bind " + address.host + ":" +
                                        std::to_string(address.port)));
  }
  if (::listen(fd.get(), backlog) != 0) throw ConnectionError(errno_message("listen"));
  return fd;
}

std::uint16_t local_port(const Fd& fd) {
  sockaddr_in sa{};
  socklen_t len = sizeof(sa);
  if (::getsockname(fd.get(), reinterpret_cast<sockaddr*>(&sa), &len) != 0) {
    throw ConnectionError(errno_message("getsockname"));
  }
  return ntohs(sa.sin_port);
}

Fd accept_for(const Fd& listener, std::chrono::milliseconds timeout) {
  pollfd p{listener.get(), POLLIN, 0};
  const int rc = ::poll(&p, 1, static_cast<int>(timeout.count()));
  if (rc <= 0 || !(p.revents & POLLIN)) return Fd();
  Fd conn(::accept4(listener.get(), nullptr, nullptr, SOCK_CLOEXEC));
  if (conn.valid()) set_nodelay(conn.get());
  return conn;
}

Fd connect_tcp(const Address& address, std::chrono::milliseconds timeout) {
  Fd fd(::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC | SOCK_NONBLOCK, 0));
  if (!fd.valid()) throw ConnectionError(errno_message("socket"));
  sockaddr_in sa = resolve(address);
  const std::string where = address.host + ":" + std::to_string(address.port);
  if (::connect(fd.get(), reinterpret_cast<sockaddr*>(&sa), sizeof(sa)) != 0) {
    if (errno != EINPROGRESS) throw ConnectionError(errno_message("connect " + where));
    pollfd p{fd.get(), POLLOUT, 0};
    const int rc = ::poll(&p, 1, static_cast<int>(timeout.count()));
    if (rc == 0) throw TimeoutError("connect to " + where + " timed out");
    int err = 0;
    socklen_t len = sizeof(err);
    ::getsockopt(fd.get(), SOL_SOCKET, SO_ERROR, &err, &len);
    if (rc < 0 || err != 0) {
      errno = err != 0 ? err : errno;
      throw ConnectionError(errno_message("connect " + where));
    }
  }
  const int flags = ::fcntl(fd.get(), F_GETFL, 0);
  ::fcntl(fd.get(), F_SETFL, flags & ~O_NONBLOCK);
  set_nodelay(fd.get());
  return fd;
}

std::optional<std::string> LineChannel::read_line(std::chrono::milliseconds timeout) {
  if (!fd_.valid()) throw ConnectionError("channel is closed");
  const auto deadline = Clock::now() + timeout;
  for (;;) {
    const auto nl = buffer_.find('\n', scan_from_);
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      scan_from_ = 0;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    scan_from_ = buffer_.size();
    if (buffer_.size() > kMaxLine) throw ConnectionError("line exceeds maximum length");

    pollfd p{fd_.get(), POLLIN, 0};
    const int rc = ::poll(&p, 1, remaining_ms(deadline));
    if (rc < 0) {
      if (errno == EINTR) continue;
      throw ConnectionError(errno_message("poll"));
    }
    if (rc == 0) throw TimeoutError("timed out waiting for a line");

    char chunk[65536];
    const ssize_t n = ::recv(fd_.get(), chunk, sizeof(chunk), 0);
    if (n < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      throw ConnectionError(errno_message("recv"));
    }
    if (n == 0) {
      if (buffer_.empty()) return std::nullopt;
      std::string line = std::move(buffer_);
      buffer_.clear();
      scan_from_ = 0;
      return line;
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

void LineChannel::write_line(std::string_view line) {
  if (!fd_.valid()) throw ConnectionError("channel is closed");
  std::string data;
  data.reserve(line.size() + 1);
  data.append(line);
  data.push_back('\n');
  std::size_t sent = 0;
  while (sent < data.size()) {
    const ssize_t n = ::send(fd_.get(), data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ConnectionError(errno_message("send"));
    }
    sent += static_cast<std::size_t>(n);
  }
}

void LineChannel::shutdown() noexcept {
  if (fd_.valid()) ::shutdown(fd_.get(), SHUT_RDWR);
}

}  // namespace ircache::service::detail
