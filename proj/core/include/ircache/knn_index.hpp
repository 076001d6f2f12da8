#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "ircache/encoding.hpp"

namespace ircache {

/// Stable reference to an indexed entry. Handles are issued in insertion
/// order and never reused, so comparing handles compares insertion order.
struct EntryHandle {
  std::uint64_t value = 0;

  friend auto operator<=>(const EntryHandle&, const EntryHandle&) = default;
};

struct Neighbor {
  EntryHandle handle;
  double distance = 0.0;
  std::size_t rank = 0;  // 1-based
};

/// Exact k-nearest-neighbor search under Euclidean distance.
///
/// Linear scan with a bounded max-heap. Equal distances are ordered by
/// insertion (lower handle first). Not internally synchronized: concurrent
/// const calls are safe, mutation needs exclusive access.
class KnnIndex {
 public:
  explicit KnnIndex(std::size_t dim);

  /// Throws DimensionMismatch.
  EntryHandle insert(CacheEntry entry);
  /// Returns false if the handle is unknown.
  bool remove(EntryHandle handle);

  /// The min(k, size()) closest entries, ascending. Throws DimensionMismatch;
  /// k == 0 throws std::invalid_argument.
  std::vector<Neighbor> query(const Encoding& q, std::size_t k) const;

  /// Throws std::out_of_range for unknown handles.
  const CacheEntry& entry(EntryHandle handle) const;
  const CacheEntry* find(EntryHandle handle) const noexcept;

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return slots_.size(); }
  bool empty() const noexcept { return slots_.empty(); }
  void reserve(std::size_t n) { slots_.reserve(n); }

  /// Checks dimension without inserting.
  void validate(const CacheEntry& entry) const;

 private:
  struct Slot {
    EntryHandle handle;
    CacheEntry entry;
  };

  std::size_t dim_;
  std::uint64_t next_handle_ = 0;
  std::vector<Slot> slots_;  // sorted by handle
};

}  // namespace ircache
