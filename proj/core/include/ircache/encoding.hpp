#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ircache {

/// Dimension of NetVLAD-style whole-image descriptors.
inline constexpr std::size_t kDefaultDimension = 16384;

/// Fixed-dimension image descriptor. Values are stored as float; every value
/// is finite and the dimension is at least one. Immutable after construction.
class Encoding {
 public:
  Encoding() = default;
  explicit Encoding(std::vector<float> values);

  std::size_t dim() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  std::span<const float> values() const noexcept { return values_; }
  float operator[](std::size_t i) const noexcept { return values_[i]; }

  friend bool operator==(const Encoding&, const Encoding&) = default;

 private:
  std::vector<float> values_;
};

/// Euclidean distance accumulated in double. Throws DimensionMismatch.
double euclidean_distance(const Encoding& a, const Encoding& b);

/// Squared distance without dimension checks; callers guarantee equal sizes.
double squared_distance(std::span<const float> a,
                        std::span<const float> b) noexcept;

/// Returns v / |v| in float. Throws InvalidEncoding for a zero vector.
Encoding normalized(std::span<const double> v);

struct ContentLabel {
  std::string id;
  std::string payload;

  friend bool operator==(const ContentLabel&, const ContentLabel&) = default;
};

enum class Provenance { NightReal, SyntheticDay, Ingested, RealDay };

std::string_view to_string(Provenance p) noexcept;
/// Accepts the tokens produced by to_string. Throws InvalidEncoding otherwise.
Provenance provenance_from_string(std::string_view token);

struct CacheEntry {
  Encoding encoding;
  ContentLabel content;
  Provenance provenance = Provenance::Ingested;
};

}  // namespace ircache
