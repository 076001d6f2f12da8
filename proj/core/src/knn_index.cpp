#include "ircache/knn_index.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ircache/errors.hpp"

namespace ircache {

namespace {

struct Candidate {
  double sq_distance;
  EntryHandle handle;
};

// Heap top is the worst candidate kept so far.
bool closer(const Candidate& a, const Candidate& b) {
  if (a.sq_distance != b.sq_distance) return a.sq_distance < b.sq_distance;
  return a.handle < b.handle;
}

}  // namespace

KnnIndex::KnnIndex(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw std::invalid_argument("index dimension must be positive");
}

void KnnIndex::validate(const CacheEntry& entry) const {
  if (entry.encoding.dim() != dim_) {
    throw DimensionMismatch(dim_, entry.encoding.dim());
  }
}

EntryHandle KnnIndex::insert(CacheEntry entry) {
  validate(entry);
  const EntryHandle handle{next_handle_++};
  slots_.push_back(Slot{handle, std::move(entry)});
  return handle;
}

bool KnnIndex::remove(EntryHandle handle) {
  auto it = std::lower_bound(
      slots_.begin(), slots_.end(), handle,
      [](const Slot& s, EntryHandle h) { return s.handle < h; });
  if (it == slots_.end() || it->handle != handle) return false;
  slots_.erase(it);
  return true;
}

const CacheEntry* KnnIndex::find(EntryHandle handle) const noexcept {
  auto it = std::lower_bound(
      slots_.begin(), slots_.end(), handle,
      [](const Slot& s, EntryHandle h) { return s.handle < h; });
  if (it == slots_.end() || it->handle != handle) return nullptr;
  return &it->entry;
}

const CacheEntry& KnnIndex::entry(EntryHandle handle) const {
  const CacheEntry* e = find(handle);
  if (e == nullptr) {
    throw std::out_of_range("unknown entry handle " +
                            std::to_string(handle.value));
  }
  return *e;
}

std::vector<Neighbor> KnnIndex::query(const Encoding& q, std::size_t k) const {
  if (k == 0) throw std::invalid_argument("k must be at least 1");
  if (q.dim() != dim_) throw DimensionMismatch(dim_, q.dim());

  const std::size_t keep = std::min(k, slots_.size());
  if (keep == 0) return {};
  std::vector<Candidate> heap;
  heap.reserve(keep + 1);
  for (const Slot& slot : slots_) {
    Candidate c{squared_distance(q.values(), slot.entry.encoding.values()),
                slot.handle};
    if (heap.size() < keep) {
      heap.push_back(c);
      std::push_heap(heap.begin(), heap.end(), closer);
    } else if (closer(c, heap.front())) {
      std::pop_heap(heap.begin(), heap.end(), closer);
      heap.back() = c;
      std::push_heap(heap.begin(), heap.end(), closer);
    }
  }
  std::sort_heap(heap.begin(), heap.end(), closer);

  std::vector<Neighbor> out;
  out.reserve(heap.size());
  for (std::size_t i = 0; i < heap.size(); ++i) {
    out.push_back(Neighbor{heap[i].handle, std::sqrt(heap[i].sq_distance), i + 1});
  }
  return out;
}

}  // namespace ircache
