#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "ircache/domain_sim.hpp"
#include "test_util.hpp"

namespace ircache::sim {
namespace {

double norm(std::span<const float> v) {
  double s = 0.0;
  for (float x : v) s += static_cast<double>(x) * x;
  return std::sqrt(s);
}

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double dist(const Encoding& a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

struct MeanSe {
  double mean;
  double se;
};

MeanSe mean_se(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x;
  m /= v.size();
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return {m, std::sqrt(ss / (v.size() - 1) / v.size())};
}

// ---------------- route segmentation ----------------

TEST(SegmentRoute, UniformSpacing) {
  std::vector<GpsPoint> pts;
  for (int i = 0; i < 12; ++i) pts.push_back({double(i), 0.0, std::size_t(i)});
  const auto seg = segment_route(pts, 5.0);
  const std::vector<std::size_t> want{0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 2, 2};
  EXPECT_EQ(seg, want);
  EXPECT_EQ(segment_id(2), "seg-00002");
}

TEST(SegmentRoute, SinglePointAndErrors) {
  std::vector<GpsPoint> one{{3.0, 4.0, 0}};
  EXPECT_EQ(segment_route(one), std::vector<std::size_t>{0});
  EXPECT_THROW(segment_route(std::vector<GpsPoint>{}), std::invalid_argument);
  EXPECT_THROW(segment_route(one, 0.0), std::invalid_argument);
}

TEST(SegmentRoute, MatchesCumulativeSumOracle) {
  std::mt19937_64 gen(61);
  std::uniform_real_distribution<double> step(0.0, 3.0);
  std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
  std::vector<GpsPoint> pts;
  double x = 0.0, y = 0.0;
  for (std::size_t i = 0; i < 1000; ++i) {
    pts.push_back({x, y, i});
    const double s = step(gen), a = angle(gen);
    x += s * std::cos(a);
    y += s * std::sin(a);
  }
  const auto got = segment_route(pts, 5.0);
  long double cum = 0.0L;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i > 0) cum += std::hypot(static_cast<long double>(pts[i].x - pts[i - 1].x),
                                 static_cast<long double>(pts[i].y - pts[i - 1].y));
    ASSERT_EQ(got[i], static_cast<std::size_t>(std::floor(cum / 5.0L))) << "point " << i;
  }
}

TEST(SegmentRoute, ReadsRouteFile) {
  const auto path = std::filesystem::temp_directory_path() / "ircache_route_test.tsv";
  {
    std::ofstream out(path);
    out << "0\t0\n3\t4\n6\t8\n";
  }
  const auto pts = read_route(path);
  ASSERT_EQ(pts.size(), 3u);
  EXPECT_EQ(pts[2].sequence, 2u);
  EXPECT_EQ(segment_route(pts), (std::vector<std::size_t>{0, 1, 2}));
  std::filesystem::remove(path);
}

// ---------------- synthetic encodings ----------------

DomainParams zero_noise() {
  DomainParams p;
  p.sigma_day = p.sigma_night = p.sigma_gan = 0.0;
  return p;
}

TEST(DomainModel, CentroidsAreUnitNorm) {
  DomainModel model({});
  Rng rng(1);
  for (int i = 0; i < 20; ++i) {
    EXPECT_NEAR(norm(model.make_place("p", rng).centroid), 1.0, 1e-12);
  }
}

TEST(DomainModel, ZeroSigmaDayIsCentroid) {
  DomainModel model(zero_noise());
  Rng rng(2);
  const auto place = model.make_place("p", rng);
  const auto e = model.gen_day(place, rng);
  for (std::size_t i = 0; i < e.dim(); ++i) {
    ASSERT_NEAR(e[i], place.centroid[i], 1e-7);
  }
}

TEST(DomainModel, ZeroSigmaNightIsShiftedCentroid) {
  DomainModel model(zero_noise());
  Rng rng(3);
  const auto place = model.make_place("p", rng);
  const auto shifted = model.shift().apply(place.centroid);
  const auto e = model.gen_night(place, rng);
  for (std::size_t i = 0; i < e.dim(); ++i) ASSERT_NEAR(e[i], shifted[i], 1e-6);
}

TEST(DomainModel, ZeroNoiseTranslationRecoversCentroid) {
  DomainModel model(zero_noise());
  Rng rng(4);
  const auto place = model.make_place("p", rng);
  const auto t = model.translate_to_day(model.gen_night(place, rng), rng);
  for (std::size_t i = 0; i < t.dim(); ++i) ASSERT_NEAR(t[i], place.centroid[i], 1e-6);
}

TEST(DomainModel, DifferentSubstreamsGiveDifferentSamples) {
  DomainModel model({});
  Rng rng(5);
  const auto place = model.make_place("p", rng);
  Rng a = Rng(5).substream(1), b = Rng(5).substream(2);
  EXPECT_NE(model.gen_day(place, a), model.gen_day(place, b));
}

TEST(DomainModel, DistanceToCentroidGrowsWithSigma) {
  double previous = -1.0;
  for (double sigma : {0.02, 0.05, 0.11, 0.2}) {
    DomainParams p;
    p.sigma_day = sigma;
    DomainModel model(p);
    Rng rng(6);
    const auto place = model.make_place("p", rng);
    std::vector<double> d;
    for (int i = 0; i < 1000; ++i) d.push_back(dist(model.gen_day(place, rng), place.centroid));
    const auto m = mean_se(d);
    EXPECT_GT(m.mean, previous + 2 * m.se) << "sigma " << sigma;
    previous = m.mean;
  }
}

TEST(DomainShift, OrthogonalWithExactInverse) {
  for (std::size_t dim : {1u, 7u, 256u}) {
    DomainShift s(dim, 1.0, 99);
    std::mt19937_64 gen(dim);
    std::normal_distribution<double> n;
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> x(dim);
      for (auto& v : x) v = n(gen);
      const auto y = s.apply(x);
      EXPECT_NEAR(norm(y), norm(x), 1e-6 * norm(x));
      const auto back = s.inverse(y);
      for (std::size_t i = 0; i < dim; ++i) ASSERT_NEAR(back[i], x[i], 1e-12);
    }
  }
}

TEST(DomainModel, OutputsAreUnitNorm) {
  DomainModel model({});
  Rng rng(7);
  for (int i = 0; i < 50; ++i) {
    const auto place = model.make_place("p", rng);
    EXPECT_NEAR(norm(model.gen_day(place, rng).values()), 1.0, 1e-6);
    const auto night = model.gen_night(place, rng);
    EXPECT_NEAR(norm(night.values()), 1.0, 1e-6);
    EXPECT_NEAR(norm(model.translate_to_day(night, rng).values()), 1.0, 1e-6);
  }
}

TEST(DomainModel, CrossDomainDistanceDominatesWithinDomain) {
  DomainModel model({});
  Rng rng(8);
  std::vector<double> within, cross;
  for (int i = 0; i < 1000; ++i) {
    const auto place = model.make_place("p", rng);
    const auto day = model.gen_day(place, rng);
    within.push_back(euclidean_distance(day, model.gen_day(place, rng)));
    cross.push_back(euclidean_distance(day, model.gen_night(place, rng)));
  }
  const auto w = mean_se(within), c = mean_se(cross);
  EXPECT_GT(c.mean - w.mean, 2.0 * std::hypot(w.se, c.se));
  EXPECT_GT(c.mean, 2.0 * w.mean);
}

TEST(DomainModel, TranslatedEntryIsCloserThanRawNightInNinetyPercent) {
  DomainModel model({});
  Rng rng(9);
  int closer = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto place = model.make_place("p", rng);
    const auto query = model.gen_day(place, rng);
    const auto night = model.gen_night(place, rng);
    const auto translated = model.translate_to_day(night, rng);
    if (euclidean_distance(query, translated) < euclidean_distance(query, night)) ++closer;
  }
  EXPECT_GE(closer, 900);
}

TEST(DomainParams, Validation) {
  DomainParams p;
  p.sigma_gan = -0.1;
  EXPECT_THROW(DomainModel{p}, std::invalid_argument);
  p = {};
  p.dim = 0;
  EXPECT_THROW(DomainModel{p}, std::invalid_argument);
}

// ---------------- scenarios ----------------

ScenarioConfig paper_config() { return ScenarioConfig{}; }

TEST(BuildScenario, PaperParametersGiveFourHundredEntries) {
  DomainModel model({});
  for (auto kind : {ScenarioKind::Night, ScenarioKind::Gan}) {
    const auto sc = build_scenario(paper_config(), kind, model, Rng(10));
    EXPECT_EQ(sc.cache_entries.size(), 400u);
    EXPECT_EQ(sc.cached_count(), 50u);
    std::set<std::string> ids;
    for (const auto& e : sc.cache_entries) {
      ids.insert(e.content.id);
      EXPECT_EQ(e.provenance,
                kind == ScenarioKind::Night ? Provenance::NightReal : Provenance::SyntheticDay);
    }
    EXPECT_EQ(ids.size(), 50u);
    EXPECT_EQ(sc.requests.size(), 150u);
    EXPECT_EQ(sc.cloud_corpus.size(), 100u * 8 * 2 + 150);
  }
}

TEST(BuildScenario, FullFractionCachesEveryRequestPlace) {
  DomainModel model({});
  ScenarioConfig cfg;
  cfg.places = 20;
  cfg.cached_fraction = 1.0;
  const auto sc = build_scenario(cfg, ScenarioKind::Gan, model, Rng(11));
  for (const auto& r : sc.requests) EXPECT_TRUE(r.place_cached);
}

TEST(BuildScenario, CoverageSweepRequestCount) {
  DomainModel model({});
  ScenarioConfig cfg;
  cfg.places = 2 * 25;
  cfg.requests = 3 * 25;
  const auto sc = build_scenario(cfg, ScenarioKind::Night, model, Rng(12));
  EXPECT_EQ(sc.cached_count(), 25u);
  EXPECT_EQ(sc.requests.size(), 75u);
}

TEST(BuildScenario, FractionOutOfRange) {
  DomainModel model({});
  for (double f : {0.0, -0.5, 1.01}) {
    ScenarioConfig cfg;
    cfg.cached_fraction = f;
    EXPECT_THROW(build_scenario(cfg, ScenarioKind::Night, model, Rng(13)),
                 std::invalid_argument);
  }
  ScenarioConfig zero;
  zero.requests = 0;
  EXPECT_THROW(build_scenario(zero, ScenarioKind::Night, model, Rng(13)), std::invalid_argument);
}

TEST(BuildScenario, SameSeedIsBitIdentical) {
  DomainModel model({});
  const auto a = build_scenario(paper_config(), ScenarioKind::Gan, model, Rng(14));
  const auto b = build_scenario(paper_config(), ScenarioKind::Gan, model, Rng(14));
  ASSERT_EQ(a.cache_entries.size(), b.cache_entries.size());
  for (std::size_t i = 0; i < a.cache_entries.size(); ++i) {
    ASSERT_EQ(a.cache_entries[i].encoding, b.cache_entries[i].encoding);
    ASSERT_EQ(a.cache_entries[i].content, b.cache_entries[i].content);
  }
  ASSERT_EQ(a.cloud_corpus.size(), b.cloud_corpus.size());
  for (std::size_t i = 0; i < a.cloud_corpus.size(); ++i) {
    ASSERT_EQ(a.cloud_corpus[i].encoding, b.cloud_corpus[i].encoding);
  }
  for (std::size_t i = 0; i < a.requests.size(); ++i) {
    ASSERT_EQ(a.requests[i].encoding, b.requests[i].encoding);
    ASSERT_EQ(a.requests[i].truth_id, b.requests[i].truth_id);
  }
  const auto c = build_scenario(paper_config(), ScenarioKind::Gan, model, Rng(15));
  EXPECT_NE(a.requests[0].encoding, c.requests[0].encoding);
}

TEST(BuildScenario, NightAndGanShareEverythingButTheCache) {
  DomainModel model({});
  const auto n = build_scenario(paper_config(), ScenarioKind::Night, model, Rng(16));
  const auto g = build_scenario(paper_config(), ScenarioKind::Gan, model, Rng(16));
  EXPECT_EQ(n.cached, g.cached);
  for (std::size_t i = 0; i < n.requests.size(); ++i) {
    ASSERT_EQ(n.requests[i].encoding, g.requests[i].encoding);
  }
  ASSERT_EQ(n.cache_entries.size(), g.cache_entries.size());
  EXPECT_NE(n.cache_entries[0].encoding, g.cache_entries[0].encoding);
  EXPECT_EQ(n.cache_entries[0].content, g.cache_entries[0].content);
}

TEST(BuildScenario, LabelsExistAndCachedFlagsAgree) {
  DomainModel model({});
  ScenarioConfig cfg;
  cfg.oracle = false;
  const auto sc = build_scenario(cfg, ScenarioKind::Night, model, Rng(17));
  const std::set<std::string> ids(sc.place_ids.begin(), sc.place_ids.end());
  EXPECT_EQ(ids.size(), 100u);
  for (const auto& r : sc.requests) {
    ASSERT_TRUE(ids.count(r.truth_id));
    EXPECT_EQ(sc.place_ids[r.place], r.truth_id);
    EXPECT_EQ(sc.cached[r.place], r.place_cached);
  }
  EXPECT_EQ(sc.cloud_corpus.size(), 1600u);
}

}  // namespace
}  // namespace ircache::sim
