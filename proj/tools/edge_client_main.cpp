// Replays an encoding file against an edge service, one query per record, and
// prints: id, status, source, content id, server latency, client wall time.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "ircache/edge_service.hpp"
#include "ircache/encoding_io.hpp"
#include "ircache/errors.hpp"
#include "ircache/harness.hpp"

int main(int argc, char** argv) {
  using namespace ircache;

  CLI::App app{"Edge cache client"};
  std::string server = "127.0.0.1:7000";
  std::string requests_path;
  std::string out_path;
  int timeout_ms = 10000;
  app.add_option("--server", server, "Edge host:port");
  app.add_option("--requests", requests_path, "Encoding file of queries")->required();
  app.add_option("--out", out_path, "Output TSV (default stdout)");
  app.add_option("--timeout-ms", timeout_ms, "Per-reply timeout");
  CLI11_PARSE(app, argc, argv);

  try {
    const auto requests = read_encodings(requests_path);
    std::ofstream file;
    if (!out_path.empty()) {
      file.open(out_path);
      if (!file) throw Error("cannot write " + out_path);
    }
    std::ostream& out = out_path.empty() ? std::cout : file;

    auto client =
        service::EdgeClient::connect(server, std::chrono::milliseconds(timeout_ms));
    int mismatched = 0;
    for (std::size_t i = 0; i < requests.size(); ++i) {
      const std::string id = "q" + std::to_string(i);
      const auto t = client.query(id, requests[i].encoding.values());
      const auto& r = t.response;
      if (r.id != id) ++mismatched;
      out << r.id << '\t' << service::to_string(r.status) << '\t'
          << (r.ok() ? service::to_string(r.source) : "-") << '\t'
          << (r.ok() ? r.content_id : r.error) << '\t'
          << harness::format_number(r.latency_ms) << '\t'
          << harness::format_number(t.wall_ms) << '\n';
    }
    if (mismatched > 0) {
      std::cerr << "edge-client: " << mismatched << " responses with mismatched ids\n";
      return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "edge-client: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
