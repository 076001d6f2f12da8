#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ircache/encoding.hpp"
#include "ircache/rng.hpp"

namespace ircache::sim {

// ---------------------------------------------------------------------------
// Route segmentation
// ---------------------------------------------------------------------------

/// Planar capture position in meters.
struct GpsPoint {
  double x = 0.0;
  double y = 0.0;
  std::size_t sequence = 0;
};

/// Segment index of every point: floor(cumulative path length / length).
/// Throws std::invalid_argument for an empty route or a non-positive length.
std::vector<std::size_t> segment_route(std::span<const GpsPoint> points,
                                       double segment_length = 5.0);

std::string segment_id(std::size_t segment);

/// Route file: one "<x>\t<y>" pair per line, capture order = line order.
std::vector<GpsPoint> read_route(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Synthetic encodings
// ---------------------------------------------------------------------------

/// Domain shift between day and night encodings: coordinates are paired by a
/// seeded permutation and each pair is rotated by `angle`. The map is
/// orthogonal, its inverse rotates by -angle, and <x, S x> = cos(angle)|x|^2.
/// With an odd dimension the unpaired coordinate is left unchanged.
class DomainShift {
 public:
  DomainShift(std::size_t dim, double angle, std::uint64_t seed);

  std::vector<double> apply(std::span<const double> x) const;
  std::vector<double> inverse(std::span<const double> x) const;

  std::size_t dim() const noexcept { return dim_; }
  double angle() const noexcept { return angle_; }

 private:
  std::vector<double> rotate(std::span<const double> x, double sign) const;

  std::size_t dim_;
  double angle_;
  std::vector<std::size_t> pairs_;  // flattened (i, j) pairs
};

struct DomainParams {
  std::size_t dim = 256;
  double sigma_day = 0.02;
  double sigma_night = 0.02;
  double sigma_gan = 0.05;
  /// Per-coordinate spread of place centroids around the route anchor.
  double place_spread = 0.025;
  double shift_angle = 1.0;  // radians
  std::uint64_t seed = 0x5EED;

  void validate() const;
};

struct PlaceModel {
  std::string place_id;
  std::vector<double> centroid;  // unit norm
};

/// Places share one seeded unit anchor (the look of the route); a centroid is
/// normalize(anchor + place_spread * eps).
///
/// Day, night and translated samples around per-place centroids:
///   day        normalize(c + sigma_day * eps)
///   night      normalize(S c + sigma_night * eps)
///   translated normalize(S^-1 e + sigma_gan * eps)
/// with eps i.i.d. standard normal per coordinate.
class DomainModel {
 public:
  explicit DomainModel(DomainParams params);

  PlaceModel make_place(std::string place_id, Rng& rng) const;

  Encoding gen_day(const PlaceModel& place, Rng& rng) const;
  Encoding gen_night(const PlaceModel& place, Rng& rng) const;
  /// Synthetic-day stand-in for image translation of a night encoding.
  Encoding translate_to_day(const Encoding& night, Rng& rng) const;

  const DomainParams& params() const noexcept { return params_; }
  const DomainShift& shift() const noexcept { return shift_; }
  std::span<const double> anchor() const noexcept { return anchor_; }

 private:
  Encoding perturb(std::span<const double> base, double sigma, Rng& rng) const;

  DomainParams params_;
  DomainShift shift_;
  std::vector<double> anchor_;
};

// ---------------------------------------------------------------------------
// Scenarios
// ---------------------------------------------------------------------------

enum class ScenarioKind { Night, Gan };

std::string_view to_string(ScenarioKind kind) noexcept;

struct ScenarioConfig {
  std::size_t places = 100;
  double cached_fraction = 0.5;
  std::size_t encodings_per_place = 8;
  std::size_t requests = 150;
  /// Load the request encodings into the cloud corpus.
  bool oracle = true;

  std::size_t cached_places() const noexcept;
  /// Throws std::invalid_argument on zero counts or a fraction outside (0, 1].
  void validate() const;
};

struct Request {
  Encoding encoding;
  std::string truth_id;
  std::size_t place = 0;
  bool place_cached = false;
};

struct Scenario {
  ScenarioKind kind = ScenarioKind::Night;
  std::vector<std::string> place_ids;
  std::vector<bool> cached;  // per place
  std::vector<CacheEntry> cache_entries;
  std::vector<CacheEntry> cloud_corpus;
  std::vector<Request> requests;

  std::size_t cached_count() const;
};

/// One experimental round. Everything except the translation noise is drawn
/// from substreams of `round_rng` that do not depend on `kind`, so the Night
/// and Gan scenarios of a round share places, cached set, night samples,
/// cloud corpus and requests; Gan stores the translated night samples.
Scenario build_scenario(const ScenarioConfig& config, ScenarioKind kind,
                        const DomainModel& model, const Rng& round_rng);

std::string place_id(std::size_t index);

}  // namespace ircache::sim
