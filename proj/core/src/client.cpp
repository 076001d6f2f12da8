#include <chrono>

#include "ircache/edge_service.hpp"
#include "socket.hpp"

namespace ircache::service {

struct EdgeClient::Impl {
  detail::LineChannel channel;
  std::chrono::milliseconds timeout;
};

EdgeClient::EdgeClient(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
EdgeClient::~EdgeClient() = default;
EdgeClient::EdgeClient(EdgeClient&&) noexcept = default;
EdgeClient& EdgeClient::operator=(EdgeClient&&) noexcept = default;

EdgeClient EdgeClient::connect(const std::string& address,
                               std::chrono::milliseconds timeout) {
  auto fd = detail::connect_tcp(detail::parse_address(address), timeout);
  return EdgeClient(std::make_unique<Impl>(Impl{detail::LineChannel(std::move(fd)), timeout}));
}

void EdgeClient::send(const std::string& id, std::span<const float> encoding) {
  impl_->channel.write_line(
      encode_query(QueryMessage{id, std::vector<float>(encoding.begin(), encoding.end())}));
}

void EdgeClient::send_raw(const std::string& line) { impl_->channel.write_line(line); }

ResponseMessage EdgeClient::receive() {
  auto line = impl_->channel.read_line(impl_->timeout);
  if (!line) throw ConnectionError("server closed the connection");
  return decode_response(*line);
}

TimedResponse EdgeClient::query(const std::string& id, std::span<const float> encoding) {
  const auto start = std::chrono::steady_clock::now();
  send(id, encoding);
  TimedResponse out{receive(), 0.0};
  out.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  return out;
}

TimedResponse client_query(const std::string& address, const Encoding& encoding,
                           std::chrono::milliseconds timeout) {
  auto client = EdgeClient::connect(address, timeout);
  return client.query("q0", encoding.values());
}

}  // namespace ircache::service
