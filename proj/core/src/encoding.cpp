#include "ircache/encoding.hpp"

#include <cmath>

#include "ircache/errors.hpp"

namespace ircache {

Encoding::Encoding(std::vector<float> values) : values_(std::move(values)) {
  if (values_.empty()) {
    throw InvalidEncoding("encoding must have at least one dimension");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw InvalidEncoding("non-finite value at index " + std::to_string(i));
    }
  }
}

double squared_distance(std::span<const float> a,
                        std::span<const float> b) noexcept {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  const std::size_t n = a.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const double d0 = static_cast<double>(a[i]) - b[i];
    const double d1 = static_cast<double>(a[i + 1]) - b[i + 1];
    const double d2 = static_cast<double>(a[i + 2]) - b[i + 2];
    const double d3 = static_cast<double>(a[i + 3]) - b[i + 3];
    s0 += d0 * d0;
    s1 += d1 * d1;
    s2 += d2 * d2;
    s3 += d3 * d3;
  }
  for (; i < n; ++i) {
    const double d = static_cast<double>(a[i]) - b[i];
    s0 += d * d;
  }
  return (s0 + s1) + (s2 + s3);
}

double euclidean_distance(const Encoding& a, const Encoding& b) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatch(a.dim(), b.dim());
  }
  return std::sqrt(squared_distance(a.values(), b.values()));
}

Encoding normalized(std::span<const double> v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  const double norm = std::sqrt(sq);
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw InvalidEncoding("cannot normalize a zero or non-finite vector");
  }
  std::vector<float> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = static_cast<float>(v[i] / norm);
  }
  return Encoding(std::move(out));
}

std::string_view to_string(Provenance p) noexcept {
  switch (p) {
    case Provenance::NightReal:
      return "night";
    case Provenance::SyntheticDay:
      return "synthetic-day";
    case Provenance::Ingested:
      return "ingested";
    case Provenance::RealDay:
      return "day";
  }
  return "ingested";
}

Provenance provenance_from_string(std::string_view token) {
  if (token == "night") return Provenance::NightReal;
  if (token == "synthetic-day") return Provenance::SyntheticDay;
  if (token == "ingested") return Provenance::Ingested;
  if (token == "day") return Provenance::RealDay;
  throw InvalidEncoding("unknown provenance '" + std::string(token) + "'");
}

}  // namespace ircache
