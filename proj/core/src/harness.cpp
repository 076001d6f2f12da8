#include "ircache/harness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numeric>
#include <stdexcept>

#include "ircache/edge_service.hpp"

namespace ircache::harness {

std::string_view to_string(Arm arm) noexcept {
  switch (arm) {
    case Arm::Night:
      return "night";
    case Arm::Gan:
      return "gan";
    case Arm::NoCache:
      return "nocache";
  }
  return "nocache";
}

Arm arm_from_string(std::string_view token) {
  if (token == "night") return Arm::Night;
  if (token == "gan") return Arm::Gan;
  if (token == "nocache") return Arm::NoCache;
  throw std::invalid_argument("unknown scenario '" + std::string(token) + "'");
}

void ExperimentConfig::validate() const {
  scenario.validate();
  domain.validate();
  ratio.validate();
  cloud_ratio.validate();
  profile.validate();
  latency.validate();
  if (rounds == 0) throw std::invalid_argument("rounds must be positive");
  if (arms.empty()) throw std::invalid_argument("no scenario selected");
}

Rng round_rng(std::uint64_t seed, std::size_t round) {
  return Rng(seed).substream(round);
}

const AggregateResult* SweepTable::find(Arm arm, double variable) const {
  for (const auto& r : rows) {
    if (r.arm == arm && r.variable == variable) return &r;
  }
  return nullptr;
}

AggregateResult aggregate(std::span<const RoundResult> rounds) {
  if (rounds.empty()) throw std::invalid_argument("no rounds to aggregate");
  std::vector<double> precision, recall, hit_rate, latency;
  for (const auto& r : rounds) {
    precision.push_back(r.precision);
    if (r.recall) recall.push_back(*r.recall);
    hit_rate.push_back(r.hit_rate);
    latency.push_back(r.mean_latency_ms);
  }
  AggregateResult a;
  a.arm = rounds.front().arm;
  a.variable = rounds.front().variable;
  a.rounds = rounds.size();
  a.precision = summarize(precision);
  a.recall = summarize(recall);
  a.hit_rate = summarize(hit_rate);
  a.latency_ms = summarize(latency);
  return a;
}

namespace {

constexpr std::uint64_t kLatencyStream = 0x1A7E;

using Traces = std::vector<std::vector<NeighborTrace>>;

// Everything one round needs, shared by all arms and thresholds.
class RoundContext {
 public:
  RoundContext(const ExperimentConfig& config, const sim::ScenarioConfig& scenario,
               std::size_t round)
      : config_(config),
        scenario_config_(scenario),
        model_(config.domain),
        rng_(round_rng(config.seed, round)),
        night_(sim::build_scenario(scenario, sim::ScenarioKind::Night, model_, rng_)),
        cloud_(std::make_shared<CloudStore>(config.domain.dim, config.cloud_ratio)) {
    cloud_->add_all(night_.cloud_corpus);
    cloud_answers_.resize(night_.requests.size());
    if (config.lookup_samples) {
      Rng root = rng_.substream(kLatencyStream);
      for (std::size_t i = 0; i < night_.requests.size(); ++i) {
        Rng r = root.substream(i);
        lookup_ms_.push_back(config.lookup_samples->sample(r));
      }
    }
  }

  const sim::Scenario& scenario(Arm arm) {
    if (arm != Arm::Gan) return night_;
    if (!gan_) {
      gan_ = sim::build_scenario(scenario_config_, sim::ScenarioKind::Gan, model_, rng_);
    }
    return *gan_;
  }

  const sim::Scenario& night() const noexcept { return night_; }
  std::shared_ptr<const CloudStore> cloud() const { return cloud_; }

  const std::string& cloud_answer(std::size_t i) {
    if (!cloud_answers_[i]) {
      cloud_answers_[i] = cloud_->resolve(night_.requests[i].encoding).content.id;
    }
    return *cloud_answers_[i];
  }

  double edge_lookup_ms(std::size_t i) const {
    return lookup_ms_.empty() ? config_.latency.edge_lookup_ms : lookup_ms_[i];
  }

  std::shared_ptr<RatioCache> make_cache(Arm arm) {
    auto cache = std::make_shared<RatioCache>(config_.domain.dim, config_.ratio);
    if (arm != Arm::NoCache) cache->bulk_load(scenario(arm).cache_entries);
    return cache;
  }

  Traces traces(Arm arm) {
    Traces out(night_.requests.size());
    if (arm == Arm::NoCache) return out;
    const auto cache = make_cache(arm);
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = cache->neighbors(night_.requests[i].encoding);
    }
    return out;
  }


 private:
  const ExperimentConfig& config_;
  sim::ScenarioConfig scenario_config_;
  sim::DomainModel model_;
  Rng rng_;
  sim::Scenario night_;
  std::optional<sim::Scenario> gan_;
  std::shared_ptr<CloudStore> cloud_;
  std::vector<std::optional<std::string>> cloud_answers_;
  std::vector<double> lookup_ms_;
};

std::unique_ptr<RoundContext> make_context(const ExperimentConfig& config,
                                           const sim::ScenarioConfig& scenario,
                                           std::size_t round) {
  return std::make_unique<RoundContext>(config, scenario, round);
}

struct Evaluation {
  RoundResult result;
  std::vector<RequestDecision> decisions;
  std::vector<double> latencies;
};

Evaluation finish(std::vector<RequestRecord> records, std::vector<double> latencies,
                  std::vector<RequestDecision> decisions, const sim::Scenario& sc,
                  Arm arm, double theta, std::size_t round) {
  const Metrics m = compute_metrics(records);
  Evaluation ev;
  ev.result.round = round;
  ev.result.arm = arm;
  ev.result.theta = theta;
  ev.result.variable = theta;
  ev.result.n_places = sc.place_ids.size();
  ev.result.n_cached = arm == Arm::NoCache ? 0 : sc.cached_count();
  ev.result.precision = m.precision;
  ev.result.recall = m.recall;
  ev.result.hit_rate = m.hit_rate;
  ev.result.requests = m.requests;
  ev.result.cache_answers = m.cache_answers;
  ev.result.cache_correct = m.cache_correct;
  double total = 0.0;
  for (double l : latencies) total += l;
  ev.result.mean_latency_ms = total / static_cast<double>(latencies.size());
  ev.decisions = std::move(decisions);
  ev.latencies = std::move(latencies);
  return ev;
}

Evaluation evaluate_sim(RoundContext& ctx, const Traces& traces, Arm arm, double theta,
                        const ExperimentConfig& config, std::size_t round) {
  const auto& sc = ctx.night();
  std::vector<RequestRecord> records;
  std::vector<double> latencies;
  std::vector<RequestDecision> decisions;
  records.reserve(sc.requests.size());
  for (std::size_t i = 0; i < sc.requests.size(); ++i) {
    const auto& req = sc.requests[i];
    RequestRecord rec{req.truth_id, {}, AnswerSource::Cloud, req.place_cached};
    RequestDecision d;
    if (arm != Arm::NoCache) {
      const auto lr = apply_ratio_test(traces[i], theta, config.ratio.rule);
      if (lr.hit()) {
        d = {true, lr.matched_content->id};
        rec.source = AnswerSource::Cache;
        rec.answer_id = lr.matched_content->id;
      }
    }
    if (rec.source == AnswerSource::Cloud) rec.answer_id = ctx.cloud_answer(i);
    latencies.push_back(netmodel::request_latency(
        d.hit ? netmodel::Outcome::Hit : netmodel::Outcome::Miss, config.profile,
        config.latency, ctx.edge_lookup_ms(i)));
    records.push_back(std::move(rec));
    decisions.push_back(std::move(d));
  }
  return finish(std::move(records), std::move(latencies), std::move(decisions), sc, arm,
                theta, round);
}

Evaluation evaluate_live(RoundContext& ctx, Arm arm, const ExperimentConfig& config,
                         std::size_t round, std::vector<std::string>& violations) {
  service::CloudService cloud(ctx.cloud(), "127.0.0.1:0");
  cloud.start();
  service::EdgeServiceConfig edge_cfg;
  edge_cfg.cloud = "127.0.0.1:" + std::to_string(cloud.port());
  service::EdgeService edge(ctx.make_cache(arm), edge_cfg);
  edge.start();

  const auto& sc = ctx.night();
  auto client = service::EdgeClient::connect("127.0.0.1:" + std::to_string(edge.port()));
  std::vector<RequestRecord> records;
  std::vector<double> latencies;
  std::vector<RequestDecision> decisions;
  for (std::size_t i = 0; i < sc.requests.size(); ++i) {
    const auto& req = sc.requests[i];
    const std::string id = "r" + std::to_string(i);
    const auto timed = client.query(id, req.encoding.values());
    const auto& resp = timed.response;
    if (!resp.ok() || resp.id != id) {
      violations.push_back("live request " + id + " failed: " + resp.error);
    }
    const bool hit = resp.ok() && resp.source == service::Source::Cache;
    records.push_back(RequestRecord{req.truth_id, resp.content_id,
                                    hit ? AnswerSource::Cache : AnswerSource::Cloud,
                                    req.place_cached});
    decisions.push_back(RequestDecision{hit, hit ? resp.content_id : std::string()});
    latencies.push_back(timed.wall_ms);
  }
  edge.stop();
  cloud.stop();
  return finish(std::move(records), std::move(latencies), std::move(decisions), sc, arm,
                config.ratio.theta, round);
}

void check_round(const Evaluation& ev, const ExperimentConfig& config, bool linear,
                 std::vector<std::string>& violations) {
  const auto& r = ev.result;
  const std::string where = "round " + std::to_string(r.round) + " " +
                            std::string(to_string(r.arm)) + " @" + format_number(r.variable);
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(r.precision) || !in_unit(r.hit_rate) || (r.recall && !in_unit(*r.recall))) {
    violations.push_back(where + ": rate outside [0,1]");
  }
  if (r.cache_answers < r.cache_correct) {
    violations.push_back(where + ": more correct cache answers than cache answers");
  }
  if (r.arm == Arm::NoCache && r.cache_answers != 0) {
    violations.push_back(where + ": no-cache arm answered from cache");
  }
  if (linear) {
    const double hit = netmodel::request_latency(netmodel::Outcome::Hit, config.profile,
                                                 config.latency);
    const double miss = netmodel::request_latency(netmodel::Outcome::Miss,
                                                  config.profile, config.latency);
    const double expected = r.hit_rate * hit + (1.0 - r.hit_rate) * miss;
    if (std::abs(expected - r.mean_latency_ms) > 1e-9 * std::max(1.0, miss)) {
      violations.push_back(where + ": mean latency is not the hit/miss mixture");
    }
  }
}

// Hits persist with the same content as theta grows (standard rule only).
void check_monotone(const Evaluation& lower, const Evaluation& upper,
                    std::vector<std::string>& violations) {
  for (std::size_t i = 0; i < lower.decisions.size(); ++i) {
    const auto& a = lower.decisions[i];
    const auto& b = upper.decisions[i];
    if (a.hit && (!b.hit || a.content_id != b.content_id)) {
      violations.push_back("round " + std::to_string(lower.result.round) + " " +
                           std::string(to_string(lower.result.arm)) + ": request " +
                           std::to_string(i) + " hit at theta " +
                           format_number(lower.result.theta) + " but not at " +
                           format_number(upper.result.theta));
      return;
    }
  }
  const auto wrong = [](const RoundResult& r) { return r.cache_answers - r.cache_correct; };
  if (wrong(upper.result) < wrong(lower.result)) {
    violations.push_back("round " + std::to_string(lower.result.round) +
                         ": cache-wrong count decreased with theta");
  }
}

void aggregate_rows(SweepTable& table, const std::vector<Arm>& arms,
                    const std::vector<double>& variables) {
  for (Arm arm : arms) {
    for (double v : variables) {
      std::vector<RoundResult> group;
      for (const auto& r : table.rounds) {
        if (r.arm == arm && r.variable == v) group.push_back(r);
      }
      if (!group.empty()) table.rows.push_back(aggregate(group));
    }
  }
}

sim::ScenarioConfig coverage_config(const sim::ScenarioConfig& base, std::size_t cached) {
  sim::ScenarioConfig c = base;
  c.places = 2 * cached;
  c.cached_fraction = 0.5;
  c.requests = 3 * cached;
  return c;
}

// One fixed-theta sweep point: every arm over every round.
void run_fixed_point(SweepTable& table, const ExperimentConfig& config,
                     const sim::ScenarioConfig& scenario, double variable) {
  const bool linear = !config.lookup_samples && config.mode == LatencyMode::Sim;
  for (std::size_t round = 0; round < config.rounds; ++round) {
    auto ctx = make_context(config, scenario, round);
    for (Arm arm : config.arms) {
      Evaluation ev;
      if (config.mode == LatencyMode::Live) {
        ev = evaluate_live(*ctx, arm, config, round, table.violations);
      } else {
        ev = evaluate_sim(*ctx, ctx->traces(arm), arm, config.ratio.theta, config, round);
      }
      ev.result.variable = variable;
      check_round(ev, config, linear, table.violations);
      table.rounds.push_back(ev.result);
    }
  }
}

}  // namespace

std::vector<RequestDecision> simulate_decisions(const sim::Scenario& scenario,
                                                const ExperimentConfig& config) {
  RatioCache cache(config.domain.dim, config.ratio);
  cache.bulk_load(scenario.cache_entries);
  std::vector<RequestDecision> out;
  out.reserve(scenario.requests.size());
  for (const auto& r : scenario.requests) {
    const auto lr = cache.lookup(r.encoding);
    out.push_back(lr.hit() ? RequestDecision{true, lr.matched_content->id}
                           : RequestDecision{false, {}});
  }
  return out;
}

SweepTable run_threshold_sweep(std::span<const double> thetas,
                               const ExperimentConfig& config) {
  config.validate();
  if (thetas.empty()) throw std::invalid_argument("no thresholds given");
  for (double t : thetas) {
    RatioConfig probe = config.ratio;
    probe.theta = t;
    probe.validate();
  }
  SweepTable table{"sweep-theta", "theta", {}, {}, {}};
  const bool linear = !config.lookup_samples;

  std::vector<std::size_t> order(thetas.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return thetas[a] < thetas[b]; });

  for (std::size_t round = 0; round < config.rounds; ++round) {
    auto ctx = make_context(config, config.scenario, round);
    for (Arm arm : config.arms) {
      const Traces traces = ctx->traces(arm);
      std::vector<Evaluation> evals(thetas.size());
      for (std::size_t t = 0; t < thetas.size(); ++t) {
        evals[t] = evaluate_sim(*ctx, traces, arm, thetas[t], config, round);
        check_round(evals[t], config, linear, table.violations);
      }
      if (config.ratio.rule == RatioRule::Standard) {
        for (std::size_t j = 1; j < order.size(); ++j) {
          check_monotone(evals[order[j - 1]], evals[order[j]], table.violations);
        }
      }
      if (arm == Arm::NoCache) {
        for (const auto& ev : evals) {
          if (ev.result.precision != evals.front().result.precision) {
            table.violations.push_back("no-cache precision depends on theta");
            break;
          }
        }
      }
      for (auto& ev : evals) table.rounds.push_back(ev.result);
    }
  }
  aggregate_rows(table, config.arms, std::vector<double>(thetas.begin(), thetas.end()));
  return table;
}

SweepTable run_coverage_sweep(std::span<const std::size_t> cached_counts,
                              const ExperimentConfig& config) {
  config.validate();
  if (cached_counts.empty()) throw std::invalid_argument("no cached counts given");
  SweepTable table{"sweep-coverage", "cached_places", {}, {}, {}};
  std::vector<double> variables;
  for (std::size_t c : cached_counts) {
    if (c == 0) throw std::invalid_argument("cached count must be positive");
    const double v = static_cast<double>(c);
    variables.push_back(v);
    ExperimentConfig point = config;
    point.mode = LatencyMode::Sim;
    run_fixed_point(table, point, coverage_config(config.scenario, c), v);
  }
  aggregate_rows(table, config.arms, variables);
  return table;
}

SweepTable run_latency_eval(std::span<const double> cached_percentages,
                            std::size_t cached_places, const ExperimentConfig& config) {
  config.validate();
  if (cached_percentages.empty()) throw std::invalid_argument("no percentages given");
  if (cached_places == 0) throw std::invalid_argument("cached places must be positive");
  SweepTable table{"sweep-latency", "cached_percent", {}, {}, {}};
  for (double pct : cached_percentages) {
    if (!(pct > 0.0 && pct <= 100.0)) {
      throw std::invalid_argument("cached percentage must be in (0, 100]");
    }
    sim::ScenarioConfig sc = config.scenario;
    sc.places = static_cast<std::size_t>(
        std::llround(static_cast<double>(cached_places) / (pct / 100.0)));
    sc.places = std::max(sc.places, cached_places);
    sc.cached_fraction = static_cast<double>(cached_places) / static_cast<double>(sc.places);
    sc.requests = 3 * cached_places;
    run_fixed_point(table, config, sc, pct);
  }
  aggregate_rows(table, config.arms,
                 std::vector<double>(cached_percentages.begin(), cached_percentages.end()));
  return table;
}

}  // namespace ircache::harness
