#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>

namespace ircache::harness {

enum class AnswerSource { Cache, Cloud };

/// Final outcome of one request.
struct RequestRecord {
  std::string truth_id;
  std::string answer_id;
  AnswerSource source = AnswerSource::Cloud;
  bool place_cached = false;
};

struct Metrics {
  double precision = 0.0;
  /// Absent when no request targets a cached place.
  std::optional<double> recall;
  double hit_rate = 0.0;

  std::size_t requests = 0;
  std::size_t correct = 0;
  std::size_t cache_answers = 0;
  std::size_t cache_correct = 0;
  std::size_t cached_requests = 0;
};

/// precision = correct answers / requests,
/// recall    = correct cache answers / requests whose place is cached,
/// hit_rate  = cache answers / requests.
/// Throws std::invalid_argument for an empty record set.
Metrics compute_metrics(std::span<const RequestRecord> records);

/// Mean with a two-sided 95% Student-t half-width on n - 1 degrees of freedom.
struct MetricSummary {
  std::optional<double> mean;     // absent when n == 0
  std::optional<double> ci_half;  // absent when n < 2
  std::size_t n = 0;
};

MetricSummary summarize(std::span<const double> values);

/// Two-sided 97.5% quantile of Student's t with `df` degrees of freedom.
double student_t_975(std::size_t df);

}  // namespace ircache::harness
