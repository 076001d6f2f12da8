#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "ircache/encoding_io.hpp"
#include "ircache/errors.hpp"
#include "test_util.hpp"

namespace ircache {
namespace {

TEST(EncodingIo, EmptyInputGivesNoEntries) {
  std::istringstream in("");
  EXPECT_TRUE(read_encodings(in).empty());
  std::istringstream comments("# header\n\n# more\n");
  EXPECT_TRUE(read_encodings(comments).empty());
}

TEST(EncodingIo, ParsesFields) {
  const auto e = parse_encoding_line("place-0001\tnight\t0.5,-1.25,3", 1);
  EXPECT_EQ(e.content.id, "place-0001");
  EXPECT_EQ(e.content.payload, "place-0001");
  EXPECT_EQ(e.provenance, Provenance::NightReal);
  EXPECT_EQ(e.encoding, testing::enc({0.5f, -1.25f, 3.0f}));
}

TEST(EncodingIo, WrongFieldCountNamesLine) {
  std::istringstream in("a\tingested\t1,2\n# comment\nb\t1,2\n");
  try {
    read_encodings(in);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("3"), std::string::npos);
  }
}

TEST(EncodingIo, RejectsBadValues) {
  EXPECT_THROW(parse_encoding_line("a\tingested\tnan", 1), ParseError);
  EXPECT_THROW(parse_encoding_line("a\tingested\tinf,1", 1), ParseError);
  EXPECT_THROW(parse_encoding_line("a\tingested\t1,,2", 1), ParseError);
  EXPECT_THROW(parse_encoding_line("a\tingested\t", 1), ParseError);
  EXPECT_THROW(parse_encoding_line("a\tingested\t1,x", 1), ParseError);
  EXPECT_THROW(parse_encoding_line("a\tdusk\t1", 1), ParseError);
  EXPECT_THROW(parse_encoding_line("\tingested\t1", 1), ParseError);
}

TEST(EncodingIo, PropertyRoundTripIsBitExact) {
  std::mt19937_64 gen(41);
  std::vector<CacheEntry> entries;
  const Provenance provs[] = {Provenance::NightReal, Provenance::SyntheticDay,
                              Provenance::Ingested, Provenance::RealDay};
  for (int i = 0; i < 100; ++i) {
    entries.push_back(testing::entry(testing::random_encoding(gen, 1 + i % 50, 1e3),
                                     "id-" + std::to_string(i), provs[i % 4]));
  }
  std::ostringstream out;
  write_encodings(out, entries);
  std::istringstream in(out.str());
  const auto back = read_encodings(in);
  ASSERT_EQ(back.size(), entries.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].encoding, entries[i].encoding);
    EXPECT_EQ(back[i].content, entries[i].content);
    EXPECT_EQ(back[i].provenance, entries[i].provenance);
  }
}

TEST(EncodingIo, FileRoundTripAndMissingFile) {
  const auto path = std::filesystem::temp_directory_path() / "ircache_io_test.tsv";
  std::vector<CacheEntry> entries{testing::entry(testing::enc({1e-30f, -7.5f}), "x")};
  write_encodings(path, entries);
  const auto back = read_encodings(path);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].encoding, entries[0].encoding);
  std::filesystem::remove(path);
  EXPECT_THROW(read_encodings(path), Error);
}

}  // namespace
}  // namespace ircache
