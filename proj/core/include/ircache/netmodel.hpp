#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ircache/rng.hpp"

namespace ircache::netmodel {

/// Edge-to-cloud path.
struct NetworkProfile {
  std::string name;
  double rtt_ms = 0.0;
  double throughput_bps = 1.0;

  /// Throws std::invalid_argument unless rtt >= 0 and throughput > 0.
  void validate() const;
};

/// AWS us-east-2 as measured from the edge: 145.65 ms, 86.9 Mbit/s.
NetworkProfile ohio();
/// AWS sa-east-1: 12.39 ms, 93.4 Mbit/s.
NetworkProfile sao_paulo();
/// "ohio" or "saopaulo". Throws std::invalid_argument otherwise.
NetworkProfile builtin_profile(std::string_view name);
NetworkProfile custom_profile(double rtt_ms, double throughput_mbps);

struct LatencyParams {
  double edge_lookup_ms = 0.0;
  double cloud_proc_ms = 0.0;
  std::size_t payload_bytes = 65536;

  void validate() const;
};

enum class Outcome { Hit, Miss };

/// Hit: edge lookup only. Miss: edge lookup + RTT + payload transfer +
/// cloud processing.
double request_latency(Outcome outcome, const NetworkProfile& profile,
                       const LatencyParams& params);

/// Same, with a per-request edge lookup time in place of params.edge_lookup_ms.
double request_latency(Outcome outcome, const NetworkProfile& profile,
                       const LatencyParams& params, double edge_lookup_ms);

/// Empirical edge lookup times, one millisecond value per line.
class LookupTimeSamples {
 public:
  explicit LookupTimeSamples(std::vector<double> samples_ms);
  static LookupTimeSamples load(const std::filesystem::path& path);

  double sample(Rng& rng) const;
  std::size_t size() const noexcept { return samples_.size(); }

 private:
  std::vector<double> samples_;
};

}  // namespace ircache::netmodel
