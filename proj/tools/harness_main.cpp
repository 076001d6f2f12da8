// Experiment driver: threshold, coverage and latency sweeps over the Night,
// Gan and NoCache arms, plus scenario export and route segmentation.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "cli_common.hpp"
#include "ircache/encoding_io.hpp"
#include "ircache/errors.hpp"
#include "ircache/harness.hpp"

namespace {

using namespace ircache;
using namespace ircache::harness;
using ircache::tools::parse_list;
using ircache::tools::parse_number;

struct Options {
  std::string scenario = "all";
  std::string theta;
  std::size_t places = 100;
  std::string cached;
  std::string percent = "25,50,75,100";
  std::size_t enc_per_place = 8;
  std::size_t requests = 150;
  std::size_t rounds = 10;
  std::uint64_t seed = 1;
  std::string net_profile = "saopaulo";
  double rtt_ms = 0.0;
  double throughput_mbps = 100.0;
  std::string mode = "sim";
  std::string out;
  std::string rounds_out;

  std::size_t dim = sim::DomainParams{}.dim;
  std::size_t k = 5;
  std::string ratio_rule = "standard";
  double cloud_theta = 1.0;
  bool no_oracle = false;
  sim::DomainParams domain;
  netmodel::LatencyParams latency;
  std::string edge_lookup_file;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--scenario", o.scenario, "night|gan|nocache|all")
      ->check(CLI::IsMember({"night", "gan", "nocache", "all"}));
  cmd->add_option("--places", o.places, "Possible places per round");
  cmd->add_option("--enc-per-place", o.enc_per_place, "Stored encodings per cached place");
  cmd->add_option("--rounds", o.rounds, "Experimental rounds");
  cmd->add_option("--seed", o.seed, "Master seed");
  cmd->add_option("--net-profile", o.net_profile, "ohio|saopaulo|custom")
      ->check(CLI::IsMember({"ohio", "saopaulo", "custom"}));
  cmd->add_option("--rtt-ms", o.rtt_ms, "RTT of the custom profile");
  cmd->add_option("--throughput-mbps", o.throughput_mbps, "Throughput of the custom profile");
  cmd->add_option("--out", o.out, "CSV output path (default stdout)");
  cmd->add_option("--rounds-out", o.rounds_out, "Per-round CSV output path");
  cmd->add_option("--dim", o.dim, "Encoding dimension");
  cmd->add_option("--k", o.k, "Neighbors retrieved per lookup");
  cmd->add_option("--ratio-rule", o.ratio_rule, "standard|paper-literal")
      ->check(CLI::IsMember({"standard", "paper-literal"}));
  cmd->add_option("--cloud-theta", o.cloud_theta, "Cloud ratio threshold");
  cmd->add_flag("--no-oracle", o.no_oracle, "Withhold request encodings from the cloud");
  cmd->add_option("--sigma-day", o.domain.sigma_day, "Day sample noise");
  cmd->add_option("--sigma-night", o.domain.sigma_night, "Night sample noise");
  cmd->add_option("--sigma-gan", o.domain.sigma_gan, "Translation residual noise");
  cmd->add_option("--place-spread", o.domain.place_spread, "Spread of place centroids");
  cmd->add_option("--shift-angle", o.domain.shift_angle, "Day/night rotation angle (rad)");
  cmd->add_option("--domain-seed", o.domain.seed, "Seed of the fixed domain shift");
  cmd->add_option("--payload-bytes", o.latency.payload_bytes, "Offloaded request size");
  cmd->add_option("--edge-lookup-ms", o.latency.edge_lookup_ms, "Edge lookup time");
  cmd->add_option("--edge-lookup-file", o.edge_lookup_file,
                  "File of measured edge lookup times (ms, one per line)");
  cmd->add_option("--cloud-proc-ms", o.latency.cloud_proc_ms, "Cloud processing time");
}

ExperimentConfig make_config(const Options& o) {
  ExperimentConfig c;
  c.scenario.places = o.places;
  c.scenario.encodings_per_place = o.enc_per_place;
  c.scenario.requests = o.requests;
  c.scenario.oracle = !o.no_oracle;
  c.domain = o.domain;
  c.domain.dim = o.dim;
  c.ratio.k = o.k;
  c.ratio.rule = ratio_rule_from_string(o.ratio_rule);
  c.cloud_ratio.theta = o.cloud_theta;
  c.rounds = o.rounds;
  c.seed = o.seed;
  if (o.scenario != "all") c.arms = {arm_from_string(o.scenario)};
  c.profile = o.net_profile == "custom"
                  ? netmodel::custom_profile(o.rtt_ms, o.throughput_mbps)
                  : netmodel::builtin_profile(o.net_profile);
  c.latency = o.latency;
  if (!o.edge_lookup_file.empty()) {
    c.lookup_samples = netmodel::LookupTimeSamples::load(o.edge_lookup_file);
  }
  c.mode = o.mode == "live" ? LatencyMode::Live : LatencyMode::Sim;
  return c;
}

// --cached as a fraction (contains '.', or < 1) or a count of places.
void apply_cached(sim::ScenarioConfig& sc, const std::string& cached) {
  if (cached.empty()) return;
  const double v = parse_number<double>(cached);
  if (cached.find('.') != std::string::npos || v < 1.0) {
    sc.cached_fraction = v;
  } else {
    sc.cached_fraction = v / static_cast<double>(sc.places);
  }
}

int emit(const SweepTable& table, const Options& o) {
  if (o.out.empty()) {
    write_csv(std::cout, table);
  } else {
    std::ofstream f(o.out);
    if (!f) throw ircache::Error("cannot write " + o.out);
    write_csv(f, table);
  }
  if (!o.rounds_out.empty()) {
    std::ofstream f(o.rounds_out);
    if (!f) throw ircache::Error("cannot write " + o.rounds_out);
    write_rounds_csv(f, table);
  }
  for (const auto& v : table.violations) std::cerr << "invariant violated: " << v << '\n';
  return table.violations.empty() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Similarity-keyed edge cache experiment harness"};
  app.require_subcommand(1);

  Options o;

  auto* theta_cmd = app.add_subcommand("sweep-theta", "Vary the ratio threshold");
  add_common(theta_cmd, o);
  theta_cmd->add_option("--theta", o.theta, "Comma-separated thresholds")
      ->default_str("0.5,0.6,0.7,0.8,0.85,0.9,0.95,0.975,1");
  theta_cmd->add_option("--cached", o.cached, "Cached places: count or fraction");
  theta_cmd->add_option("--requests", o.requests, "Requests per round");

  auto* cov_cmd = app.add_subcommand("sweep-coverage", "Vary the number of cached places");
  add_common(cov_cmd, o);
  cov_cmd->add_option("--theta", o.theta, "Ratio threshold")->default_str("0.975");
  cov_cmd->add_option("--cached", o.cached, "Comma-separated cached-place counts")
      ->default_str("10,25,50,100");

  auto* lat_cmd = app.add_subcommand("sweep-latency", "Vary the cached percentage");
  add_common(lat_cmd, o);
  lat_cmd->add_option("--theta", o.theta, "Ratio threshold")->default_str("0.975");
  lat_cmd->add_option("--cached", o.cached, "Cached places")->default_str("50");
  lat_cmd->add_option("--percent", o.percent, "Comma-separated cached percentages");
  lat_cmd->add_option("--mode", o.mode, "sim|live")->check(CLI::IsMember({"sim", "live"}));

  std::string out_dir;
  std::size_t export_round = 0;
  auto* export_cmd = app.add_subcommand(
      "export-scenario", "Write one round's cache, corpus, requests and simulated decisions");
  add_common(export_cmd, o);
  export_cmd->add_option("--out-dir", out_dir, "Output directory")->required();
  export_cmd->add_option("--round", export_round, "Round index");
  export_cmd->add_option("--theta", o.theta, "Ratio threshold")->default_str("0.975");
  export_cmd->add_option("--cached", o.cached, "Cached places: count or fraction");
  export_cmd->add_option("--requests", o.requests, "Requests");

  std::string route_path;
  double segment_length = 5.0;
  auto* route_cmd = app.add_subcommand("segment-route", "Group route points into places");
  route_cmd->add_option("--route", route_path, "Route file (<x>\\t<y> per line)")->required();
  route_cmd->add_option("--segment-length", segment_length, "Segment length in meters");

  CLI11_PARSE(app, argc, argv);

  try {
    if (route_cmd->parsed()) {
      const auto points = sim::read_route(route_path);
      const auto segments = sim::segment_route(points, segment_length);
      for (std::size_t i = 0; i < points.size(); ++i) {
        std::cout << points[i].sequence << '\t' << format_number(points[i].x) << '\t'
                  << format_number(points[i].y) << '\t' << sim::segment_id(segments[i])
                  << '\n';
      }
      return 0;
    }

    ExperimentConfig config = make_config(o);

    if (theta_cmd->parsed()) {
      apply_cached(config.scenario, o.cached);
      const auto thetas =
          parse_list<double>(o.theta.empty() ? "0.5,0.6,0.7,0.8,0.85,0.9,0.95,0.975,1" : o.theta);
      return emit(run_threshold_sweep(thetas, config), o);
    }
    config.ratio.theta = parse_number<double>(o.theta.empty() ? "0.975" : o.theta);

    if (cov_cmd->parsed()) {
      const auto counts = parse_list<std::size_t>(o.cached.empty() ? "10,25,50,100" : o.cached);
      return emit(run_coverage_sweep(counts, config), o);
    }
    if (lat_cmd->parsed()) {
      const auto cached = parse_number<std::size_t>(o.cached.empty() ? "50" : o.cached);
      return emit(run_latency_eval(parse_list<double>(o.percent), cached, config), o);
    }
    if (export_cmd->parsed()) {
      apply_cached(config.scenario, o.cached);
      config.validate();
      namespace fs = std::filesystem;
      fs::create_directories(out_dir);
      const sim::DomainModel model(config.domain);
      const auto rng = round_rng(config.seed, export_round);
      const auto kind = o.scenario == "night" ? sim::ScenarioKind::Night : sim::ScenarioKind::Gan;
      // Request encodings go to requests.tsv; cloud-serve --oracle-requests adds them.
      config.scenario.oracle = false;
      const auto sc = sim::build_scenario(config.scenario, kind, model, rng);
      write_encodings(fs::path(out_dir) / "cache.tsv", sc.cache_entries);
      write_encodings(fs::path(out_dir) / "corpus.tsv", sc.cloud_corpus);
      std::vector<CacheEntry> requests;
      for (const auto& r : sc.requests) {
        requests.push_back(CacheEntry{r.encoding, {r.truth_id, r.truth_id}, Provenance::RealDay});
      }
      write_encodings(fs::path(out_dir) / "requests.tsv", requests);
      std::ofstream d(fs::path(out_dir) / "decisions.tsv");
      for (const auto& dec : simulate_decisions(sc, config)) {
        d << (dec.hit ? "hit" : "miss") << '\t' << dec.content_id << '\n';
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "harness: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
