#include "ircache/protocol.hpp"

#include <cmath>
#include <nlohmann/json.hpp>

namespace ircache::service {

using nlohmann::json;

std::string_view to_string(Source s) noexcept {
  return s == Source::Cache ? "cache" : "cloud";
}

std::string_view to_string(Status s) noexcept {
  switch (s) {
    case Status::Ok:
      return "ok";
    case Status::Malformed:
      return "malformed";
    case Status::DimensionMismatch:
      return "dimension_mismatch";
    case Status::CloudUnreachable:
      return "cloud_unreachable";
    case Status::Internal:
      return "internal_error";
  }
  return "internal_error";
}

namespace {

Status status_from_string(std::string_view s) {
  if (s == "ok") return Status::Ok;
  if (s == "malformed") return Status::Malformed;
  if (s == "dimension_mismatch") return Status::DimensionMismatch;
  if (s == "cloud_unreachable") return Status::CloudUnreachable;
  if (s == "internal_error") return Status::Internal;
  throw ProtocolError(std::string(kUnknownId), "unknown status '" + std::string(s) + "'");
}

}  // namespace

std::string encode_query(const QueryMessage& q) {
  json j;
  j["id"] = q.id;
  auto& arr = j["encoding"] = json::array();
  for (float v : q.encoding) arr.push_back(static_cast<double>(v));
  return j.dump();
}

QueryMessage decode_query(std::string_view line) {
  json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    throw ProtocolError(std::string(kUnknownId), "query is not a JSON object");
  }
  QueryMessage q;
  auto id = j.find("id");
  if (id == j.end() || !id->is_string() || id->get_ref<const std::string&>().empty()) {
    throw ProtocolError(std::string(kUnknownId), "query lacks a string id");
  }
  q.id = id->get<std::string>();
  auto enc = j.find("encoding");
  if (enc == j.end() || !enc->is_array() || enc->empty()) {
    throw ProtocolError(q.id, "query lacks a non-empty encoding array");
  }
  q.encoding.reserve(enc->size());
  for (const auto& v : *enc) {
    if (!v.is_number()) throw ProtocolError(q.id, "encoding values must be numbers");
    const auto f = static_cast<float>(v.get<double>());
    if (!std::isfinite(f)) throw ProtocolError(q.id, "encoding values must be finite");
    q.encoding.push_back(f);
  }
  return q;
}

std::string encode_response(const ResponseMessage& r) {
  json j;
  j["id"] = r.id;
  j["status"] = std::string(to_string(r.status));
  if (r.ok()) {
    j["source"] = std::string(to_string(r.source));
    j["content"] = r.content;
    j["content_id"] = r.content_id;
    if (r.d1) j["d1"] = *r.d1;
    if (r.ratio) j["ratio"] = *r.ratio;
    j["latency_ms"] = r.latency_ms;
  } else {
    j["error"] = r.error;
  }
  return j.dump();
}

ResponseMessage decode_response(std::string_view line) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw ProtocolError(std::string(kUnknownId), "response is not a JSON object");
  }
  try {
    ResponseMessage r;
    r.id = j.at("id").get<std::string>();
    r.status = status_from_string(j.at("status").get<std::string>());
    if (r.ok()) {
      const auto source = j.at("source").get<std::string>();
      if (source != "cache" && source != "cloud") {
        throw ProtocolError(r.id, "unknown source '" + source + "'");
      }
      r.source = source == "cache" ? Source::Cache : Source::Cloud;
      r.content = j.at("content").get<std::string>();
      r.content_id = j.value("content_id", r.content);
      if (j.contains("d1")) r.d1 = j["d1"].get<double>();
      if (j.contains("ratio")) r.ratio = j["ratio"].get<double>();
      r.latency_ms = j.value("latency_ms", 0.0);
    } else {
      r.error = j.value("error", std::string());
    }
    return r;
  } catch (const json::exception& e) {
    auto id = j.find("id");
    throw ProtocolError(id != j.end() && id->is_string() ? id->get<std::string>()
                                                         : std::string(kUnknownId),
                        e.what());
  }
}

ResponseMessage error_response(std::string id, Status status, std::string message) {
  ResponseMessage r;
  r.id = std::move(id);
  r.status = status;
  r.error = std::move(message);
  return r;
}

}  // namespace ircache::service
