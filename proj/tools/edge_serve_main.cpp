#include <CLI11.hpp>
#include <iostream>
#include <memory>

#include "cli_common.hpp"
#include "ircache/edge_service.hpp"
#include "ircache/encoding_io.hpp"

int main(int argc, char** argv) {
  using namespace ircache;

  CLI::App app{"Edge image-recognition cache service"};
  std::string listen = "127.0.0.1:7000";
  std::string cache_path;
  std::string cloud = "none";
  RatioConfig ratio;
  std::string rule = "standard";
  bool learn = false;
  std::size_t dim = 0;
  std::size_t capacity = 0;
  int cloud_timeout_ms = 10000;

  app.add_option("--listen", listen, "host:port to listen on (port 0 = ephemeral)");
  app.add_option("--cache", cache_path, "Encoding file to preload")->required();
  app.add_option("--cloud", cloud, "Cloud host:port, or 'none'");
  app.add_option("--theta", ratio.theta, "Ratio threshold");
  app.add_option("--k", ratio.k, "Neighbors per lookup");
  app.add_option("--ratio-rule", rule, "standard|paper-literal")
      ->check(CLI::IsMember({"standard", "paper-literal"}));
  app.add_flag("--learn", learn, "Insert cloud answers into the cache");
  app.add_option("--dim", dim, "Deployment dimension (default: from cache file, else 16384)");
  app.add_option("--capacity", capacity, "Maximum entries (0 = unbounded)");
  app.add_option("--cloud-timeout-ms", cloud_timeout_ms, "Cloud connect/reply timeout");
  CLI11_PARSE(app, argc, argv);

  try {
    ratio.rule = ratio_rule_from_string(rule);
    if (capacity > 0) ratio.capacity = capacity;
    auto entries = read_encodings(cache_path);
    if (dim == 0) dim = entries.empty() ? kDefaultDimension : entries.front().encoding.dim();
    auto cache = std::make_shared<RatioCache>(dim, ratio);
    const std::size_t loaded = cache->bulk_load(std::move(entries));

    service::EdgeServiceConfig config;
    config.listen = listen;
    if (cloud != "none") config.cloud = cloud;
    config.learn = learn;
    config.cloud_timeout = std::chrono::milliseconds(cloud_timeout_ms);

    service::EdgeService edge(cache, config);
    edge.start();
    tools::install_stop_handlers();
    std::cout << "edge-serve: " << loaded << " entries, dim " << dim << ", listening on port "
              << edge.port() << std::endl;
    tools::wait_for_stop();
    edge.stop();
  } catch (const std::exception& e) {
    std::cerr << "edge-serve: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
