#include "ircache/domain_sim.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "ircache/errors.hpp"

namespace ircache::sim {

std::vector<std::size_t> segment_route(std::span<const GpsPoint> points,
                                       double segment_length) {
  if (points.empty()) throw std::invalid_argument("route has no points");
  if (!(segment_length > 0.0)) {
    throw std::invalid_argument("segment length must be positive");
  }
  std::vector<std::size_t> segments(points.size());
  double travelled = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i > 0) {
      travelled += std::hypot(points[i].x - points[i - 1].x,
                              points[i].y - points[i - 1].y);
    }
    segments[i] = static_cast<std::size_t>(std::floor(travelled / segment_length));
  }
  return segments;
}

std::string segment_id(std::size_t segment) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "seg-%05zu", segment);
  return buf;
}

std::vector<GpsPoint> read_route(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open route file " + path.string());
  std::vector<GpsPoint> points;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw ParseError(line_number, "expected '<x>\\t<y>'");
    }
    GpsPoint p;
    p.sequence = points.size();
    const char* b = line.data();
    auto rx = std::from_chars(b, b + tab, p.x);
    auto ry = std::from_chars(b + tab + 1, b + line.size(), p.y);
    if (rx.ec != std::errc{} || rx.ptr != b + tab || ry.ec != std::errc{} ||
        ry.ptr != b + line.size() || !std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw ParseError(line_number, "invalid coordinate");
    }
    points.push_back(p);
  }
  return points;
}

DomainShift::DomainShift(std::size_t dim, double angle, std::uint64_t seed)
    : dim_(dim), angle_(angle) {
  if (dim == 0) throw std::invalid_argument("shift dimension must be positive");
  std::vector<std::size_t> perm(dim);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng = Rng(seed).substream(0x5817F7);
  for (std::size_t i = dim; i > 1; --i) {
    std::swap(perm[i - 1], perm[rng.uniform_below(i)]);
  }
  pairs_.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(dim / 2 * 2));
}

std::vector<double> DomainShift::rotate(std::span<const double> x,
                                        double sign) const {
  if (x.size() != dim_) throw DimensionMismatch(dim_, x.size());
  std::vector<double> y(x.begin(), x.end());
  const double c = std::cos(angle_);
  const double s = sign * std::sin(angle_);
  for (std::size_t p = 0; p < pairs_.size(); p += 2) {
    const std::size_t i = pairs_[p];
    const std::size_t j = pairs_[p + 1];
    y[i] = c * x[i] - s * x[j];
    y[j] = s * x[i] + c * x[j];
  }
  return y;
}

std::vector<double> DomainShift::apply(std::span<const double> x) const {
  return rotate(x, 1.0);
}

std::vector<double> DomainShift::inverse(std::span<const double> x) const {
  return rotate(x, -1.0);
}

void DomainParams::validate() const {
  if (dim == 0) throw std::invalid_argument("dim must be positive");
  if (!(sigma_day >= 0.0) || !(sigma_night >= 0.0) || !(sigma_gan >= 0.0)) {
    throw std::invalid_argument("noise sigmas must be nonnegative");
  }
  if (!(place_spread >= 0.0) || !std::isfinite(place_spread)) {
    throw std::invalid_argument("place spread must be a nonnegative number");
  }
  if (!std::isfinite(shift_angle)) {
    throw std::invalid_argument("shift angle must be finite");
  }
}

namespace {

void normalize_in_place(std::vector<double>& v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  const double norm = std::sqrt(sq);
  for (auto& x : v) x /= norm;
}

}  // namespace

DomainModel::DomainModel(DomainParams params)
    : params_((params.validate(), params)),
      shift_(params_.dim, params_.shift_angle, params_.seed),
      anchor_(params_.dim) {
  Rng rng = Rng(params_.seed).substream(0xA2C403);
  double sq = 0.0;
  while (!(sq > 0.0)) {
    sq = 0.0;
    for (auto& v : anchor_) {
      v = rng.normal();
      sq += v * v;
    }
  }
  normalize_in_place(anchor_);
}

PlaceModel DomainModel::make_place(std::string place_id, Rng& rng) const {
  std::vector<double> c = anchor_;
  if (params_.place_spread > 0.0) {
    for (auto& v : c) v += params_.place_spread * rng.normal();
  }
  normalize_in_place(c);
  return PlaceModel{std::move(place_id), std::move(c)};
}

Encoding DomainModel::perturb(std::span<const double> base, double sigma,
                              Rng& rng) const {
  std::vector<double> v(base.begin(), base.end());
  if (sigma > 0.0) {
    for (auto& x : v) x += sigma * rng.normal();
  }
  return normalized(v);
}

Encoding DomainModel::gen_day(const PlaceModel& place, Rng& rng) const {
  return perturb(place.centroid, params_.sigma_day, rng);
}

Encoding DomainModel::gen_night(const PlaceModel& place, Rng& rng) const {
  return perturb(shift_.apply(place.centroid), params_.sigma_night, rng);
}

Encoding DomainModel::translate_to_day(const Encoding& night, Rng& rng) const {
  if (night.dim() != params_.dim) throw DimensionMismatch(params_.dim, night.dim());
  std::vector<double> x(night.values().begin(), night.values().end());
  return perturb(shift_.inverse(x), params_.sigma_gan, rng);
}

std::string_view to_string(ScenarioKind kind) noexcept {
  return kind == ScenarioKind::Night ? "night" : "gan";
}

std::size_t ScenarioConfig::cached_places() const noexcept {
  return static_cast<std::size_t>(
      std::llround(cached_fraction * static_cast<double>(places)));
}

void ScenarioConfig::validate() const {
  if (places == 0 || encodings_per_place == 0 || requests == 0) {
    throw std::invalid_argument("scenario counts must be positive");
  }
  if (!(cached_fraction > 0.0 && cached_fraction <= 1.0)) {
    throw std::invalid_argument("cached fraction must be in (0, 1]");
  }
}

std::size_t Scenario::cached_count() const {
  return static_cast<std::size_t>(std::count(cached.begin(), cached.end(), true));
}

std::string place_id(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "place-%04zu", index);
  return buf;
}

namespace {

enum StreamTag : std::uint64_t {
  kPlaces = 1,
  kCachedSelection = 2,
  kNightSamples = 3,
  kDaySamples = 4,
  kRequests = 5,
  kTranslation = 6,
};

}  // namespace

Scenario build_scenario(const ScenarioConfig& config, ScenarioKind kind,
                        const DomainModel& model, const Rng& round_rng) {
  config.validate();
  Scenario sc;
  sc.kind = kind;

  const std::size_t n = config.places;
  const std::size_t per_place = config.encodings_per_place;

  std::vector<PlaceModel> places;
  places.reserve(n);
  {
    Rng rng = round_rng.substream(kPlaces);
    for (std::size_t p = 0; p < n; ++p) {
      places.push_back(model.make_place(place_id(p), rng));
      sc.place_ids.push_back(places.back().place_id);
    }
  }

  // Partial Fisher-Yates for a uniform subset without replacement.
  sc.cached.assign(n, false);
  {
    const std::size_t n_cached = std::clamp<std::size_t>(config.cached_places(), 1, n);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng = round_rng.substream(kCachedSelection);
    for (std::size_t i = 0; i < n_cached; ++i) {
      std::swap(order[i], order[i + rng.uniform_below(n - i)]);
      sc.cached[order[i]] = true;
    }
  }

  auto label = [&](std::size_t p) {
    return ContentLabel{places[p].place_id, places[p].place_id};
  };

  std::vector<std::vector<Encoding>> night(n);
  std::vector<std::vector<Encoding>> day(n);
  const Rng night_root = round_rng.substream(kNightSamples);
  const Rng day_root = round_rng.substream(kDaySamples);
  for (std::size_t p = 0; p < n; ++p) {
    Rng nr = night_root.substream(p);
    Rng dr = day_root.substream(p);
    for (std::size_t j = 0; j < per_place; ++j) {
      night[p].push_back(model.gen_night(places[p], nr));
      day[p].push_back(model.gen_day(places[p], dr));
    }
  }

  const Rng translation_root = round_rng.substream(kTranslation);
  for (std::size_t p = 0; p < n; ++p) {
    if (!sc.cached[p]) continue;
    Rng tr = translation_root.substream(p);
    for (const auto& e : night[p]) {
      if (kind == ScenarioKind::Night) {
        sc.cache_entries.push_back(CacheEntry{e, label(p), Provenance::NightReal});
      } else {
        sc.cache_entries.push_back(CacheEntry{model.translate_to_day(e, tr), label(p),
                                              Provenance::SyntheticDay});
      }
    }
  }

  {
    Rng rng = round_rng.substream(kRequests);
    sc.requests.reserve(config.requests);
    for (std::size_t i = 0; i < config.requests; ++i) {
      const std::size_t p = rng.uniform_below(n);
      sc.requests.push_back(
          Request{model.gen_day(places[p], rng), places[p].place_id, p, sc.cached[p]});
    }
  }

  sc.cloud_corpus.reserve(n * per_place * 2 + (config.oracle ? config.requests : 0));
  for (std::size_t p = 0; p < n; ++p) {
    for (const auto& e : day[p]) {
      sc.cloud_corpus.push_back(CacheEntry{e, label(p), Provenance::RealDay});
    }
    for (const auto& e : night[p]) {
      sc.cloud_corpus.push_back(CacheEntry{e, label(p), Provenance::NightReal});
    }
  }
  if (config.oracle) {
    for (const auto& r : sc.requests) {
      sc.cloud_corpus.push_back(
          CacheEntry{r.encoding, label(r.place), Provenance::RealDay});
    }
  }
  return sc;
}

}  // namespace ircache::sim
