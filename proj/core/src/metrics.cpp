#include "ircache/metrics.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ircache::harness {

Metrics compute_metrics(std::span<const RequestRecord> records) {
  if (records.empty()) throw std::invalid_argument("no request records");
  Metrics m;
  m.requests = records.size();
  for (const auto& r : records) {
    const bool correct = r.answer_id == r.truth_id;
    if (correct) ++m.correct;
    if (r.source == AnswerSource::Cache) {
      ++m.cache_answers;
      if (correct) ++m.cache_correct;
    }
    if (r.place_cached) ++m.cached_requests;
  }
  const auto n = static_cast<double>(m.requests);
  m.precision = static_cast<double>(m.correct) / n;
  m.hit_rate = static_cast<double>(m.cache_answers) / n;
  if (m.cached_requests > 0) {
    m.recall = static_cast<double>(m.cache_correct) / static_cast<double>(m.cached_requests);
  }
  return m;
}

double student_t_975(std::size_t df) {
  if (df == 0) throw std::invalid_argument("t quantile needs df >= 1");
  boost::math::students_t dist(static_cast<double>(df));
  return boost::math::quantile(dist, 0.975);
}

MetricSummary summarize(std::span<const double> values) {
  MetricSummary s;
  s.n = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  s.mean = mean;
  if (values.size() < 2) return s;
  if (std::all_of(values.begin(), values.end(),
                  [&](double v) { return v == values.front(); })) {
    s.mean = values.front();
    s.ci_half = 0.0;
    return s;
  }
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  const double sd = std::sqrt(sq / static_cast<double>(values.size() - 1));
  s.ci_half = student_t_975(values.size() - 1) * sd /
              std::sqrt(static_cast<double>(values.size()));
  return s;
}

}  // namespace ircache::harness
