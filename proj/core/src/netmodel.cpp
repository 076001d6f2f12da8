#include "ircache/netmodel.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "ircache/errors.hpp"

namespace ircache::netmodel {

void NetworkProfile::validate() const {
  if (!(rtt_ms >= 0.0) || !std::isfinite(rtt_ms)) {
    throw std::invalid_argument("rtt must be a nonnegative number of ms");
  }
  if (!(throughput_bps > 0.0) || !std::isfinite(throughput_bps)) {
    throw std::invalid_argument("throughput must be positive");
  }
}

NetworkProfile ohio() { return {"ohio", 145.65, 86.9e6}; }
NetworkProfile sao_paulo() { return {"saopaulo", 12.39, 93.4e6}; }

NetworkProfile builtin_profile(std::string_view name) {
  if (name == "ohio") return ohio();
  if (name == "saopaulo") return sao_paulo();
  throw std::invalid_argument("unknown network profile '" + std::string(name) + "'");
}

NetworkProfile custom_profile(double rtt_ms, double throughput_mbps) {
  NetworkProfile p{"custom", rtt_ms, throughput_mbps * 1e6};
  p.validate();
  return p;
}

void LatencyParams::validate() const {
  if (!(edge_lookup_ms >= 0.0) || !(cloud_proc_ms >= 0.0)) {
    throw std::invalid_argument("latency components must be nonnegative");
  }
  if (payload_bytes == 0) throw std::invalid_argument("payload must be positive");
}

double request_latency(Outcome outcome, const NetworkProfile& profile,
                       const LatencyParams& params, double edge_lookup_ms) {
  if (outcome == Outcome::Hit) return edge_lookup_ms;
  const double transfer_ms =
      static_cast<double>(params.payload_bytes) * 8.0 / profile.throughput_bps * 1000.0;
  return edge_lookup_ms + profile.rtt_ms + transfer_ms + params.cloud_proc_ms;
}

double request_latency(Outcome outcome, const NetworkProfile& profile,
                       const LatencyParams& params) {
  return request_latency(outcome, profile, params, params.edge_lookup_ms);
}

LookupTimeSamples::LookupTimeSamples(std::vector<double> samples_ms)
    : samples_(std::move(samples_ms)) {
  if (samples_.empty()) throw std::invalid_argument("no lookup time samples");
  for (double v : samples_) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("lookup times must be nonnegative");
    }
  }
}

LookupTimeSamples LookupTimeSamples::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open lookup time file " + path.string());
  std::vector<double> values;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
    if (ec != std::errc{} || ptr != line.data() + line.size() || !(v >= 0.0)) {
      throw ParseError(line_number, "expected a nonnegative latency in ms");
    }
    values.push_back(v);
  }
  return LookupTimeSamples(std::move(values));
}

double LookupTimeSamples::sample(Rng& rng) const {
  return samples_[rng.uniform_below(samples_.size())];
}

}  // namespace ircache::netmodel
