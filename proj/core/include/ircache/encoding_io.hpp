#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ircache/encoding.hpp"

namespace ircache {

// Encoding file: one record per line,
//   <content_id> TAB <provenance> TAB <comma-separated floats>
// UTF-8, lines starting with '#' and blank lines are skipped. The payload of
// an ingested entry equals its content id.

/// Parses one record line. Throws ParseError tagged with `line_number`.
CacheEntry parse_encoding_line(std::string_view line, std::size_t line_number);

std::vector<CacheEntry> read_encodings(std::istream& in);
/// Throws Error if the file cannot be opened, ParseError on malformed lines.
std::vector<CacheEntry> read_encodings(const std::filesystem::path& path);

/// Floats are written in shortest round-trip form.
void write_encodings(std::ostream& out, std::span<const CacheEntry> entries);
void write_encodings(const std::filesystem::path& path,
                     std::span<const CacheEntry> entries);

std::string format_encoding_line(const CacheEntry& entry);

}  // namespace ircache
