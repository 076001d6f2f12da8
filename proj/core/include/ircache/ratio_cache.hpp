#pragma once

#include <cstddef>
#include <optional>
#include <shared_mutex>
#include <string_view>
#include <vector>

#include "ircache/encoding.hpp"
#include "ircache/knn_index.hpp"

namespace ircache {

/// How the ratio r = d1 / d2 is compared against theta.
enum class RatioRule {
  /// Lowe's test: r <= theta is distinctive enough to accept (Hit).
  Standard,
  /// Inverted reading: r <= theta is rejected, r > theta is a Hit.
  PaperLiteral,
};

std::string_view to_string(RatioRule rule) noexcept;
/// Accepts "standard" and "paper-literal". Throws std::invalid_argument.
RatioRule ratio_rule_from_string(std::string_view token);

struct RatioConfig {
  double theta = 0.975;
  std::size_t k = 5;
  std::optional<std::size_t> capacity;
  RatioRule rule = RatioRule::Standard;

  /// Throws std::invalid_argument unless 0 < theta <= 1, k >= 1, capacity > 0.
  void validate() const;
};

enum class Decision { Hit, Miss };
enum class MissReason { EmptyCache, RatioRejected, NoNeighbors };

std::string_view to_string(Decision d) noexcept;
std::string_view to_string(MissReason r) noexcept;

struct NeighborTrace {
  EntryHandle handle;
  ContentLabel content;
  double distance = 0.0;
  std::size_t rank = 0;
};

struct LookupResult {
  Decision decision = Decision::Miss;
  std::optional<ContentLabel> matched_content;
  std::optional<double> d1;
  std::optional<double> d2;
  std::optional<double> ratio;
  std::optional<MissReason> miss_reason;
  std::vector<NeighborTrace> neighbors;

  bool hit() const noexcept { return decision == Decision::Hit; }
};

/// Decides hit or miss from an ascending k-NN trace.
///
/// d1 is the rank-1 distance. d2 is the distance of the closest neighbor whose
/// content id differs from the rank-1 content. With no such neighbor the match
/// is a Hit with ratio 0. When d1 == d2 == 0 the ratio is 1.
LookupResult apply_ratio_test(std::vector<NeighborTrace> neighbors,
                              double theta, RatioRule rule);

/// k-NN query plus trace construction, without the decision.
std::vector<NeighborTrace> neighbor_trace(const KnnIndex& index,
                                          const Encoding& q, std::size_t k);

/// Similarity-keyed cache answering with the ratio test.
///
/// Lookups take a shared lock and may run concurrently; insert_result and
/// bulk_load take an exclusive lock. There is no eviction: with a capacity
/// set, inserts into a full cache throw CapacityExceeded.
class RatioCache {
 public:
  RatioCache(std::size_t dim, RatioConfig config);

  LookupResult lookup(const Encoding& q) const;
  /// Same as lookup() with a different threshold; the stored config is kept.
  LookupResult lookup(const Encoding& q, double theta) const;
  std::vector<NeighborTrace> neighbors(const Encoding& q) const;

  EntryHandle insert_result(CacheEntry entry);
  /// All-or-nothing: validates every entry, then inserts under one lock.
  std::size_t bulk_load(std::vector<CacheEntry> entries);

  std::size_t size() const;
  std::size_t dim() const noexcept { return dim_; }
  const RatioConfig& config() const noexcept { return config_; }

 private:
  std::size_t dim_;
  RatioConfig config_;
  mutable std::shared_mutex mutex_;
  KnnIndex index_;
};

}  // namespace ircache
