#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ircache/errors.hpp"

namespace ircache::service {

// Newline-delimited JSON over TCP. One object per line, responses in request
// order per connection.
//
//   query     {"id":"q1","encoding":[0.12,-0.5,...]}
//   response  {"id":"q1","status":"ok","source":"cache","content":"...",
//              "content_id":"...","d1":0.41,"ratio":0.83,"latency_ms":0.2}
//   error     {"id":"q1","status":"cloud_unreachable","error":"..."}
//
// Unparseable queries are answered with id "unknown". Floats are written in
// shortest round-trip form.

struct QueryMessage {
  std::string id;
  std::vector<float> encoding;
};

enum class Source { Cache, Cloud };
enum class Status { Ok, Malformed, DimensionMismatch, CloudUnreachable, Internal };

std::string_view to_string(Source s) noexcept;
std::string_view to_string(Status s) noexcept;

struct ResponseMessage {
  std::string id;
  Status status = Status::Ok;
  Source source = Source::Cache;
  std::string content;
  std::string content_id;
  std::optional<double> d1;
  std::optional<double> ratio;
  double latency_ms = 0.0;
  std::string error;

  bool ok() const noexcept { return status == Status::Ok; }
};

class ConnectionError : public Error {
 public:
  using Error::Error;
};

class TimeoutError : public Error {
 public:
  using Error::Error;
};

inline constexpr std::string_view kUnknownId = "unknown";

/// Bad wire message. id() is the query id when it could be recovered.
class ProtocolError : public Error {
 public:
  ProtocolError(std::string id, const std::string& what)
      : Error(what), id_(std::move(id)) {}
  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

std::string encode_query(const QueryMessage& q);
/// Throws ProtocolError.
QueryMessage decode_query(std::string_view line);

std::string encode_response(const ResponseMessage& r);
/// Throws ProtocolError.
ResponseMessage decode_response(std::string_view line);

ResponseMessage error_response(std::string id, Status status, std::string message);

}  // namespace ircache::service
