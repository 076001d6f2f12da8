#pragma once

#include <cstddef>
#include <vector>

#include "ircache/encoding.hpp"
#include "ircache/knn_index.hpp"
#include "ircache/ratio_cache.hpp"

namespace ircache {

struct CloudAnswer {
  ContentLabel content;
  /// The cloud-side ratio-test trace; `trace.hit()` is false when the cloud's
  /// own theta rejected the match and content is the rank-1 fallback.
  LookupResult trace;
};

/// Emulated cloud retrieval over the full corpus.
///
/// Runs the same ratio test as the edge cache with its own theta (default 1).
/// It never misses: on rejection it still answers with the rank-1 content.
/// Loading the request encodings themselves (oracle mode) makes the rank-1
/// match the request at distance 0. Read-only after loading.
class CloudStore {
 public:
  explicit CloudStore(std::size_t dim, RatioConfig config = default_config());

  static RatioConfig default_config() {
    RatioConfig c;
    c.theta = 1.0;
    return c;
  }

  void add(CacheEntry entry);
  void add_all(std::vector<CacheEntry> entries);

  /// Throws EmptyStore when nothing is loaded, DimensionMismatch on bad input.
  CloudAnswer resolve(const Encoding& q) const;

  std::size_t size() const noexcept { return index_.size(); }
  std::size_t dim() const noexcept { return index_.dim(); }
  const RatioConfig& config() const noexcept { return config_; }

 private:
  RatioConfig config_;
  KnnIndex index_;
};

}  // namespace ircache
