#include "ircache/encoding_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "ircache/errors.hpp"

namespace ircache {

namespace {

std::string_view trim_cr(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

bool skippable(std::string_view line) {
  for (char c : line) {
    if (c == '#') return true;
    if (c != ' ' && c != '\t') return false;
  }
  return true;
}

std::vector<float> parse_floats(std::string_view field, std::size_t line_number) {
  std::vector<float> values;
  values.reserve(field.size() / 8 + 1);
  const char* p = field.data();
  const char* end = field.data() + field.size();
  while (true) {
    while (p < end && *p == ' ') ++p;
    float v = 0.0f;
    auto [next, ec] = std::from_chars(p, end, v);
    if (ec != std::errc{}) {
      throw ParseError(line_number,
                       "invalid float at column " +
                           std::to_string(p - field.data() + 1));
    }
    values.push_back(v);
    p = next;
    while (p < end && *p == ' ') ++p;
    if (p == end) break;
    if (*p != ',') {
      throw ParseError(line_number, "expected ',' between values");
    }
    ++p;
  }
  return values;
}

}  // namespace

CacheEntry parse_encoding_line(std::string_view line, std::size_t line_number) {
  line = trim_cr(line);
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  if (fields.size() != 3) {
    throw ParseError(line_number, "expected 3 tab-separated fields, found " +
                                      std::to_string(fields.size()));
  }
  if (fields[0].empty()) {
    throw ParseError(line_number, "empty content id");
  }

  CacheEntry entry;
  try {
    entry.provenance = provenance_from_string(fields[1]);
    entry.encoding = Encoding(parse_floats(fields[2], line_number));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(line_number, e.what());
  }
  entry.content.id = std::string(fields[0]);
  entry.content.payload = entry.content.id;
  return entry;
}

std::vector<CacheEntry> read_encodings(std::istream& in) {
  std::vector<CacheEntry> entries;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (skippable(line)) continue;
    entries.push_back(parse_encoding_line(line, line_number));
  }
  return entries;
}

std::vector<CacheEntry> read_encodings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot open encoding file " + path.string());
  }
  return read_encodings(in);
}

std::string format_encoding_line(const CacheEntry& entry) {
  std::string line = entry.content.id;
  line += '\t';
  line += to_string(entry.provenance);
  line += '\t';
  char buf[32];
  bool first = true;
  for (float v : entry.encoding.values()) {
    if (!first) line += ',';
    first = false;
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    line.append(buf, end);
  }
  return line;
}

void write_encodings(std::ostream& out, std::span<const CacheEntry> entries) {
  for (const auto& e : entries) {
    out << format_encoding_line(e) << '\n';
  }
}

void write_encodings(const std::filesystem::path& path,
                     std::span<const CacheEntry> entries) {
  std::ofstream out(path);
  if (!out) {
    throw Error("cannot write encoding file " + path.string());
  }
  write_encodings(out, entries);
  if (!out) {
    throw Error("write failed for " + path.string());
  }
}

}  // namespace ircache
