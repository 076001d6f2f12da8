#include "ircache/ratio_cache.hpp"

#include <mutex>
#include <stdexcept>
#include <string>

#include "ircache/errors.hpp"

namespace ircache {

std::string_view to_string(RatioRule rule) noexcept {
  return rule == RatioRule::Standard ? "standard" : "paper-literal";
}

RatioRule ratio_rule_from_string(std::string_view token) {
  if (token == "standard") return RatioRule::Standard;
  if (token == "paper-literal") return RatioRule::PaperLiteral;
  throw std::invalid_argument("unknown ratio rule '" + std::string(token) + "'");
}

std::string_view to_string(Decision d) noexcept {
  return d == Decision::Hit ? "hit" : "miss";
}

std::string_view to_string(MissReason r) noexcept {
  switch (r) {
    case MissReason::EmptyCache:
      return "empty_cache";
    case MissReason::RatioRejected:
      return "ratio_rejected";
    case MissReason::NoNeighbors:
      return "no_neighbors";
  }
  return "unknown";
}

void RatioConfig::validate() const {
  if (!(theta > 0.0 && theta <= 1.0)) {
    throw std::invalid_argument("theta must be in (0, 1], got " +
                                std::to_string(theta));
  }
  if (k == 0) throw std::invalid_argument("k must be at least 1");
  if (capacity && *capacity == 0) {
    throw std::invalid_argument("capacity must be positive when set");
  }
}

LookupResult apply_ratio_test(std::vector<NeighborTrace> neighbors,
                              double theta, RatioRule rule) {
  LookupResult result;
  if (neighbors.empty()) {
    result.decision = Decision::Miss;
    result.miss_reason = MissReason::EmptyCache;
    return result;
  }

  const NeighborTrace& top = neighbors.front();
  result.d1 = top.distance;

  const NeighborTrace* rival = nullptr;
  for (const auto& n : neighbors) {
    if (n.content.id != top.content.id) {
      rival = &n;
      break;
    }
  }

  if (rival == nullptr) {
    result.decision = Decision::Hit;
    result.ratio = 0.0;
    result.matched_content = top.content;
  } else {
    const double d1 = top.distance;
    const double d2 = rival->distance;
    result.d2 = d2;
    result.ratio = d2 > 0.0 ? d1 / d2 : 1.0;
    const bool accept = rule == RatioRule::Standard ? *result.ratio <= theta
                                                    : *result.ratio > theta;
    if (accept) {
      result.decision = Decision::Hit;
      result.matched_content = top.content;
    } else {
      result.decision = Decision::Miss;
      result.miss_reason = MissReason::RatioRejected;
    }
  }
  result.neighbors = std::move(neighbors);
  return result;
}

std::vector<NeighborTrace> neighbor_trace(const KnnIndex& index,
                                          const Encoding& q, std::size_t k) {
  std::vector<NeighborTrace> trace;
  const auto found = index.query(q, k);
  trace.reserve(found.size());
  for (const auto& n : found) {
    trace.push_back(
        NeighborTrace{n.handle, index.entry(n.handle).content, n.distance, n.rank});
  }
  return trace;
}

RatioCache::RatioCache(std::size_t dim, RatioConfig config)
    : dim_(dim), config_(std::move(config)), index_(dim) {
  config_.validate();
}

std::vector<NeighborTrace> RatioCache::neighbors(const Encoding& q) const {
  std::shared_lock lock(mutex_);
  return neighbor_trace(index_, q, config_.k);
}

LookupResult RatioCache::lookup(const Encoding& q) const {
  return lookup(q, config_.theta);
}

LookupResult RatioCache::lookup(const Encoding& q, double theta) const {
  if (!(theta > 0.0 && theta <= 1.0)) {
    throw std::invalid_argument("theta must be in (0, 1]");
  }
  return apply_ratio_test(neighbors(q), theta, config_.rule);
}

EntryHandle RatioCache::insert_result(CacheEntry entry) {
  std::unique_lock lock(mutex_);
  index_.validate(entry);
  if (config_.capacity && index_.size() >= *config_.capacity) {
    throw CapacityExceeded(*config_.capacity);
  }
  return index_.insert(std::move(entry));
}

std::size_t RatioCache::bulk_load(std::vector<CacheEntry> entries) {
  for (const auto& e : entries) {
    if (e.encoding.dim() != dim_) throw DimensionMismatch(dim_, e.encoding.dim());
    if (e.content.id.empty()) throw InvalidEncoding("empty content id in bulk load");
  }
  std::unique_lock lock(mutex_);
  if (config_.capacity && index_.size() + entries.size() > *config_.capacity) {
    throw CapacityExceeded(*config_.capacity);
  }
  index_.reserve(index_.size() + entries.size());
  for (auto& e : entries) index_.insert(std::move(e));
  return entries.size();
}

std::size_t RatioCache::size() const {
  std::shared_lock lock(mutex_);
  return index_.size();
}

}  // namespace ircache
