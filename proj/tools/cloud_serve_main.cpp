#include <CLI11.hpp>
#include <iostream>
#include <memory>

#include "cli_common.hpp"
#include "ircache/cloud_oracle.hpp"
#include "ircache/edge_service.hpp"
#include "ircache/encoding_io.hpp"
#include "ircache/errors.hpp"

int main(int argc, char** argv) {
  using namespace ircache;

  CLI::App app{"Emulated cloud image-retrieval service"};
  std::string listen = "127.0.0.1:7001";
  std::string corpus_path;
  std::string oracle_path;
  RatioConfig ratio = CloudStore::default_config();

  app.add_option("--listen", listen, "host:port to listen on (port 0 = ephemeral)");
  app.add_option("--corpus", corpus_path, "Encoding file with the full corpus")->required();
  app.add_option("--oracle-requests", oracle_path,
                 "Encoding file of the request images, added to the corpus");
  app.add_option("--theta", ratio.theta, "Cloud ratio threshold");
  app.add_option("--k", ratio.k, "Neighbors per lookup");
  CLI11_PARSE(app, argc, argv);

  try {
    auto corpus = read_encodings(corpus_path);
    if (corpus.empty()) throw Error("corpus " + corpus_path + " is empty");
    auto store = std::make_shared<CloudStore>(corpus.front().encoding.dim(), ratio);
    store->add_all(std::move(corpus));
    if (!oracle_path.empty()) store->add_all(read_encodings(oracle_path));

    service::CloudService cloud(store, listen);
    cloud.start();
    tools::install_stop_handlers();
    std::cout << "cloud-serve: " << store->size() << " entries, dim " << store->dim()
              << ", listening on port " << cloud.port() << std::endl;
    tools::wait_for_stop();
    cloud.stop();
  } catch (const std::exception& e) {
    std::cerr << "cloud-serve: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
