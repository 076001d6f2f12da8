#include <gtest/gtest.h>

#include <atomic>
#include <memory>
#include <random>
#include <sstream>
#include <thread>

#include "ircache/encoding_io.hpp"
#include "ircache/errors.hpp"
#include "ircache/ratio_cache.hpp"
#include "test_util.hpp"

namespace ircache {
namespace {

using testing::enc;
using testing::entry;
using testing::random_encoding;

std::unique_ptr<RatioCache> one_dim_cache(
    std::initializer_list<std::pair<float, const char*>> items, RatioConfig config = {}) {
  auto cache = std::make_unique<RatioCache>(1, config);
  for (const auto& [x, id] : items) cache->insert_result(entry(enc({x}), id));
  return cache;
}

TEST(RatioCache, DistinctiveMatchIsHit) {
  const auto cache = one_dim_cache({{0.9f, "A"}, {0.95f, "A"}, {1.0f, "B"}});
  const auto r = cache->lookup(enc({0.0f}));
  ASSERT_TRUE(r.hit());
  EXPECT_EQ(r.matched_content->id, "A");
  EXPECT_NEAR(*r.ratio, 0.9, 1e-6);
  EXPECT_NEAR(*r.d1, 0.9, 1e-6);
  EXPECT_NEAR(*r.d2, 1.0, 1e-6);
  EXPECT_EQ(r.neighbors.size(), 3u);
}

TEST(RatioCache, AmbiguousMatchIsMiss) {
  const auto cache = one_dim_cache({{0.99f, "A"}, {1.0f, "B"}});
  const auto r = cache->lookup(enc({0.0f}));
  EXPECT_FALSE(r.hit());
  EXPECT_EQ(r.miss_reason, MissReason::RatioRejected);
  EXPECT_NEAR(*r.ratio, 0.99, 1e-6);
  EXPECT_FALSE(r.matched_content.has_value());
}

TEST(RatioCache, EmptyCacheIsMiss) {
  RatioCache cache(4, {});
  const auto r = cache.lookup(enc({0, 0, 0, 0}));
  EXPECT_FALSE(r.hit());
  EXPECT_EQ(r.miss_reason, MissReason::EmptyCache);
  EXPECT_TRUE(r.neighbors.empty());
}

TEST(RatioCache, SingleContentIsHitWithZeroRatio) {
  const auto cache = one_dim_cache({{0.5f, "A"}, {0.7f, "A"}, {0.9f, "A"}});
  const auto r = cache->lookup(enc({0.0f}));
  ASSERT_TRUE(r.hit());
  EXPECT_EQ(r.matched_content->id, "A");
  EXPECT_EQ(*r.ratio, 0.0);
  EXPECT_FALSE(r.d2.has_value());
}

TEST(RatioCache, OneEntryCacheIsHit) {
  const auto cache = one_dim_cache({{3.0f, "only"}});
  const auto r = cache->lookup(enc({0.0f}));
  ASSERT_TRUE(r.hit());
  EXPECT_EQ(r.matched_content->id, "only");
}

TEST(RatioCache, ExactMatchHasZeroRatio) {
  const auto cache = one_dim_cache({{0.25f, "A"}, {0.5f, "B"}});
  const auto r = cache->lookup(enc({0.25f}));
  ASSERT_TRUE(r.hit());
  EXPECT_EQ(*r.d1, 0.0);
  EXPECT_EQ(*r.ratio, 0.0);
}

TEST(RatioCache, DuplicateEncodingsWithDifferentContentGiveRatioOne) {
  const auto cache = one_dim_cache({{0.5f, "A"}, {0.5f, "B"}});
  const auto r = cache->lookup(enc({0.5f}));
  EXPECT_EQ(*r.ratio, 1.0);
  EXPECT_FALSE(cache->lookup(enc({0.5f}), 0.975).hit());
  EXPECT_TRUE(cache->lookup(enc({0.5f}), 1.0).hit());
}

TEST(RatioCache, PaperLiteralRuleInvertsTheComparison) {
  RatioConfig config;
  config.rule = RatioRule::PaperLiteral;
  const auto ambiguous = one_dim_cache({{0.99f, "A"}, {1.0f, "B"}}, config);
  EXPECT_TRUE(ambiguous->lookup(enc({0.0f})).hit());
  const auto distinctive = one_dim_cache({{0.9f, "A"}, {1.0f, "B"}}, config);
  EXPECT_FALSE(distinctive->lookup(enc({0.0f})).hit());
  const auto single = one_dim_cache({{0.2f, "A"}}, config);
  EXPECT_TRUE(single->lookup(enc({0.0f})).hit());
  EXPECT_EQ(ratio_rule_from_string(to_string(RatioRule::PaperLiteral)), RatioRule::PaperLiteral);
  EXPECT_THROW(ratio_rule_from_string("inverse"), std::invalid_argument);
}

TEST(RatioCache, SecondNeighborIsFirstDifferentContent) {
  const auto cache = one_dim_cache({{0.1f, "A"}, {0.2f, "A"}, {0.3f, "B"}, {0.4f, "C"}});
  const auto r = cache->lookup(enc({0.0f}));
  EXPECT_NEAR(*r.d2, 0.3, 1e-6);
  EXPECT_NEAR(*r.ratio, 0.1 / 0.3, 1e-6);
}

TEST(RatioCache, DifferentContentBeyondKIsIgnored) {
  RatioConfig config;
  config.k = 2;
  const auto cache = one_dim_cache({{0.1f, "A"}, {0.2f, "A"}, {0.3f, "B"}}, config);
  const auto r = cache->lookup(enc({0.0f}));
  ASSERT_TRUE(r.hit());
  EXPECT_EQ(*r.ratio, 0.0);
}

TEST(RatioCache, ConfigValidation) {
  RatioConfig c;
  c.theta = 0.0;
  EXPECT_THROW(RatioCache(1, c), std::invalid_argument);
  c.theta = 1.5;
  EXPECT_THROW(RatioCache(1, c), std::invalid_argument);
  c = {};
  c.k = 0;
  EXPECT_THROW(RatioCache(1, c), std::invalid_argument);
  c = {};
  c.capacity = 0;
  EXPECT_THROW(RatioCache(1, c), std::invalid_argument);
  RatioCache ok(1, {});
  EXPECT_THROW(ok.lookup(enc({0.0f}), 0.0), std::invalid_argument);
}

TEST(RatioCache, CapacityExceeded) {
  RatioConfig c;
  c.capacity = 2;
  RatioCache cache(1, c);
  cache.insert_result(entry(enc({0.1f}), "A"));
  cache.insert_result(entry(enc({0.2f}), "B"));
  EXPECT_THROW(cache.insert_result(entry(enc({0.3f}), "C")), CapacityExceeded);
  EXPECT_EQ(cache.size(), 2u);
  std::vector<CacheEntry> more{entry(enc({0.4f}), "D")};
  EXPECT_THROW(cache.bulk_load(more), CapacityExceeded);
  EXPECT_EQ(cache.size(), 2u);
}

TEST(RatioCache, BulkLoadFiftyPlacesEightEach) {
  std::mt19937_64 gen(31);
  std::vector<CacheEntry> entries;
  for (int p = 0; p < 50; ++p) {
    for (int i = 0; i < 8; ++i) {
      entries.push_back(entry(random_encoding(gen, 16), "place-" + std::to_string(p),
                              Provenance::NightReal));
    }
  }
  RatioCache cache(16, {});
  EXPECT_EQ(cache.bulk_load(entries), 400u);
  EXPECT_EQ(cache.size(), 400u);
  EXPECT_EQ(cache.bulk_load({}), 0u);
  EXPECT_EQ(cache.size(), 400u);
}

TEST(RatioCache, BadEntryAbortsWholeLoad) {
  RatioCache cache(2, {});
  cache.insert_result(entry(enc({0, 0}), "seed"));
  std::vector<CacheEntry> entries{entry(enc({1, 1}), "a"), entry(enc({1, 1, 1}), "b")};
  EXPECT_THROW(cache.bulk_load(entries), DimensionMismatch);
  EXPECT_EQ(cache.size(), 1u);

  std::istringstream in("a\tingested\t1,2\nb\tingested\tnan,2\n");
  EXPECT_THROW(cache.bulk_load(read_encodings(in)), ParseError);
  EXPECT_EQ(cache.size(), 1u);
}

TEST(RatioCache, DimensionMismatchOnLookupAndInsert) {
  RatioCache cache(3, {});
  EXPECT_THROW(cache.lookup(enc({1, 2})), DimensionMismatch);
  EXPECT_THROW(cache.insert_result(entry(enc({1, 2}), "x")), DimensionMismatch);
}

TEST(RatioCache, ThetaOneAcceptsEveryNonEmptyLookup) {
  std::mt19937_64 gen(32);
  RatioConfig c;
  c.theta = 1.0;
  RatioCache cache(6, c);
  for (int i = 0; i < 60; ++i) {
    cache.insert_result(entry(random_encoding(gen, 6), "c" + std::to_string(i % 7)));
  }
  for (int i = 0; i < 200; ++i) {
    EXPECT_TRUE(cache.lookup(random_encoding(gen, 6)).hit());
  }
}

TEST(RatioCache, PropertyHitSetGrowsWithTheta) {
  std::mt19937_64 gen(33);
  RatioCache cache(4, {});
  for (int i = 0; i < 120; ++i) {
    cache.insert_result(entry(random_encoding(gen, 4), "c" + std::to_string(i % 9)));
  }
  const std::vector<double> thetas{0.3, 0.5, 0.7, 0.8, 0.9, 0.95, 0.975, 0.99, 1.0};
  for (int i = 0; i < 300; ++i) {
    const auto q = random_encoding(gen, 4);
    bool was_hit = false;
    std::string content;
    for (double t : thetas) {
      const auto r = cache.lookup(q, t);
      if (was_hit) {
        ASSERT_TRUE(r.hit()) << "theta " << t;
        ASSERT_EQ(r.matched_content->id, content);
      }
      if (r.hit()) {
        was_hit = true;
        content = r.matched_content->id;
        ASSERT_LE(*r.ratio, t);
      }
    }
  }
}

TEST(RatioCache, LookupIsDeterministicAndReportsInvariants) {
  std::mt19937_64 gen(34);
  RatioCache cache(8, {});
  for (int i = 0; i < 80; ++i) {
    cache.insert_result(entry(random_encoding(gen, 8), "c" + std::to_string(i % 5)));
  }
  for (int i = 0; i < 100; ++i) {
    const auto q = random_encoding(gen, 8);
    const auto a = cache.lookup(q);
    const auto b = cache.lookup(q);
    EXPECT_EQ(a.decision, b.decision);
    EXPECT_EQ(a.ratio, b.ratio);
    ASSERT_TRUE(a.ratio.has_value());
    EXPECT_GE(*a.ratio, 0.0);
    EXPECT_LE(*a.ratio, 1.0);
    if (a.d2) EXPECT_LE(*a.d1, *a.d2);
    EXPECT_EQ(a.neighbors.size(), 5u);
  }
}

TEST(RatioCache, ConcurrentLookupsWithWriter) {
  std::mt19937_64 gen(35);
  auto cache = std::make_shared<RatioCache>(8, RatioConfig{});
  for (int i = 0; i < 50; ++i) {
    cache->insert_result(entry(random_encoding(gen, 8), "c" + std::to_string(i % 5)));
  }
  std::vector<Encoding> queries;
  for (int i = 0; i < 64; ++i) queries.push_back(random_encoding(gen, 8));
  std::vector<Encoding> inserts;
  for (int i = 0; i < 200; ++i) inserts.push_back(random_encoding(gen, 8));

  std::atomic<bool> failed{false};
  std::vector<std::thread> readers;
  for (int t = 0; t < 4; ++t) {
    readers.emplace_back([&, t] {
      for (int i = 0; i < 300; ++i) {
        const auto r = cache->lookup(queries[(i + t) % queries.size()]);
        if (r.neighbors.size() != 5 || !r.ratio || *r.ratio > 1.0) failed = true;
      }
    });
  }
  std::thread writer([&] {
    for (const auto& e : inserts) cache->insert_result(entry(e, "w"));
  });
  for (auto& t : readers) t.join();
  writer.join();
  EXPECT_FALSE(failed);
  EXPECT_EQ(cache->size(), 250u);
}

}  // namespace
}  // namespace ircache
