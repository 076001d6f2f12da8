#include "ircache/cloud_oracle.hpp"

#include "ircache/errors.hpp"

namespace ircache {

CloudStore::CloudStore(std::size_t dim, RatioConfig config)
    : config_(std::move(config)), index_(dim) {
  config_.validate();
}

void CloudStore::add(CacheEntry entry) { index_.insert(std::move(entry)); }

void CloudStore::add_all(std::vector<CacheEntry> entries) {
  for (const auto& e : entries) index_.validate(e);
  index_.reserve(index_.size() + entries.size());
  for (auto& e : entries) index_.insert(std::move(e));
}

CloudAnswer CloudStore::resolve(const Encoding& q) const {
  if (index_.empty()) throw EmptyStore("cloud store is empty");
  auto trace = apply_ratio_test(neighbor_trace(index_, q, config_.k),
                                config_.theta, config_.rule);
  ContentLabel content = trace.matched_content
                             ? *trace.matched_content
                             : trace.neighbors.front().content;
  return CloudAnswer{std::move(content), std::move(trace)};
}

}  // namespace ircache
