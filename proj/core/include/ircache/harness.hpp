#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ircache/cloud_oracle.hpp"
#include "ircache/domain_sim.hpp"
#include "ircache/metrics.hpp"
#include "ircache/netmodel.hpp"
#include "ircache/ratio_cache.hpp"

namespace ircache::harness {

/// Cache contents under evaluation; NoCache offloads every request.
enum class Arm { Night, Gan, NoCache };

std::string_view to_string(Arm arm) noexcept;
Arm arm_from_string(std::string_view token);

enum class LatencyMode { Sim, Live };

struct ExperimentConfig {
  sim::ScenarioConfig scenario;
  sim::DomainParams domain;
  RatioConfig ratio;
  RatioConfig cloud_ratio = CloudStore::default_config();
  std::size_t rounds = 10;
  std::uint64_t seed = 1;
  std::vector<Arm> arms{Arm::Night, Arm::Gan, Arm::NoCache};

  netmodel::NetworkProfile profile = netmodel::sao_paulo();
  netmodel::LatencyParams latency;
  /// Per-request edge lookup times; replaces latency.edge_lookup_ms.
  std::optional<netmodel::LookupTimeSamples> lookup_samples;
  LatencyMode mode = LatencyMode::Sim;

  void validate() const;
};

struct RoundResult {
  std::size_t round = 0;
  Arm arm = Arm::Night;
  double variable = 0.0;  // theta, cached count or cached percent
  double theta = 0.0;
  std::size_t n_places = 0;
  std::size_t n_cached = 0;
  double precision = 0.0;
  std::optional<double> recall;
  double hit_rate = 0.0;
  double mean_latency_ms = 0.0;

  std::size_t requests = 0;
  std::size_t cache_answers = 0;
  std::size_t cache_correct = 0;
};

struct AggregateResult {
  Arm arm = Arm::Night;
  double variable = 0.0;
  std::size_t rounds = 0;
  MetricSummary precision;
  MetricSummary recall;
  MetricSummary hit_rate;
  MetricSummary latency_ms;
};

/// Per-metric mean and 95% t-interval across rounds. Rounds without a defined
/// recall are left out of the recall summary. Arm and variable come from the
/// first round; throws std::invalid_argument for an empty input.
AggregateResult aggregate(std::span<const RoundResult> rounds);

struct SweepTable {
  std::string experiment;  // sweep-theta, sweep-coverage, sweep-latency
  std::string variable;    // theta, cached_places, cached_percent
  std::vector<AggregateResult> rows;
  std::vector<RoundResult> rounds;
  /// Invariant violations found while running; empty on a clean run.
  std::vector<std::string> violations;

  const AggregateResult* find(Arm arm, double variable) const;
};

/// Per-request cache decision at one threshold; harness-internal but exposed
/// so the service round-trip can be compared against simulation.
struct RequestDecision {
  bool hit = false;
  std::string content_id;
};

/// Cache decisions for every request of `scenario` at the configured theta.
std::vector<RequestDecision> simulate_decisions(const sim::Scenario& scenario,
                                                const ExperimentConfig& config);

/// Round r's generator: Rng(seed).substream(r).
Rng round_rng(std::uint64_t seed, std::size_t round);

SweepTable run_threshold_sweep(std::span<const double> thetas,
                               const ExperimentConfig& config);
/// Possible places = 2 x cached, requests = 3 x cached, theta from config.
SweepTable run_coverage_sweep(std::span<const std::size_t> cached_counts,
                              const ExperimentConfig& config);
/// Cached places fixed; possible places = round(cached / (percent / 100)),
/// requests = 3 x cached.
SweepTable run_latency_eval(std::span<const double> cached_percentages,
                            std::size_t cached_places,
                            const ExperimentConfig& config);

/// Columns: experiment,scenario,variable,value,metric,mean,ci_half,rounds.
void write_csv(std::ostream& out, const SweepTable& table);
/// One row per round and arm.
void write_rounds_csv(std::ostream& out, const SweepTable& table);

std::string format_number(double v);

}  // namespace ircache::harness
