#include <gtest/gtest.h>

#include <vector>

#include "ircache/metrics.hpp"

namespace ircache::harness {
namespace {

RequestRecord rec(const char* truth, const char* answer, AnswerSource src, bool cached) {
  return RequestRecord{truth, answer, src, cached};
}

TEST(ComputeMetrics, HandBuiltSixRequestTable) {
  const std::vector<RequestRecord> r{
      rec("A", "A", AnswerSource::Cache, true),   // cache correct
      rec("B", "B", AnswerSource::Cache, true),   // cache correct
      rec("C", "D", AnswerSource::Cache, true),   // cache wrong
      rec("D", "D", AnswerSource::Cloud, true),   // cached place offloaded
      rec("E", "E", AnswerSource::Cloud, false),
      rec("F", "F", AnswerSource::Cloud, false),
  };
  const auto m = compute_metrics(r);
  EXPECT_EQ(m.precision, 5.0 / 6.0);
  EXPECT_EQ(*m.recall, 2.0 / 4.0);
  EXPECT_EQ(m.hit_rate, 3.0 / 6.0);
  EXPECT_EQ(m.cache_answers, 3u);
  EXPECT_EQ(m.cache_correct, 2u);
  EXPECT_EQ(m.cached_requests, 4u);
}

TEST(ComputeMetrics, AllFromCacheAllCorrect) {
  const std::vector<RequestRecord> r{rec("A", "A", AnswerSource::Cache, true),
                                     rec("B", "B", AnswerSource::Cache, true)};
  const auto m = compute_metrics(r);
  EXPECT_EQ(m.precision, 1.0);
  EXPECT_EQ(*m.recall, 1.0);
  EXPECT_EQ(m.hit_rate, 1.0);
}

TEST(ComputeMetrics, NoCacheOracleCloud) {
  const std::vector<RequestRecord> uncached{rec("A", "A", AnswerSource::Cloud, false)};
  const auto m = compute_metrics(uncached);
  EXPECT_EQ(m.precision, 1.0);
  EXPECT_EQ(m.hit_rate, 0.0);
  EXPECT_FALSE(m.recall.has_value());
  const std::vector<RequestRecord> cached{rec("A", "A", AnswerSource::Cloud, true)};
  EXPECT_EQ(*compute_metrics(cached).recall, 0.0);
  EXPECT_THROW(compute_metrics(std::vector<RequestRecord>{}), std::invalid_argument);
}

TEST(Summarize, TwoRoundsTextbookInterval) {
  const std::vector<double> v{0.4, 0.6};
  const auto s = summarize(v);
  EXPECT_NEAR(*s.mean, 0.5, 1e-15);
  // t(0.975, 1) = tan(pi * 0.475) = 12.7062047...; SE = 0.1.
  EXPECT_NEAR(*s.ci_half, 1.2706204736, 1e-9);
}

TEST(Summarize, IdenticalRoundsHaveZeroHalfWidth) {
  const std::vector<double> v(10, 0.38888888888888884);
  const auto s = summarize(v);
  EXPECT_EQ(*s.ci_half, 0.0);
  EXPECT_EQ(*s.mean, v[0]);
}

TEST(Summarize, SingleRoundHasNoHalfWidth) {
  const std::vector<double> v{0.7};
  const auto s = summarize(v);
  EXPECT_EQ(*s.mean, 0.7);
  EXPECT_FALSE(s.ci_half.has_value());
  const auto empty = summarize(std::vector<double>{});
  EXPECT_FALSE(empty.mean.has_value());
}

TEST(StudentT, KnownQuantiles) {
  EXPECT_NEAR(student_t_975(1), 12.706204736, 1e-8);
  EXPECT_NEAR(student_t_975(9), 2.262157163, 1e-8);
  EXPECT_NEAR(student_t_975(30), 2.042272456, 1e-8);
}

}  // namespace
}  // namespace ircache::harness
