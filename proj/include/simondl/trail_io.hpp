#pragma once

// Line-oriented trail documents, one "key = value" per line in a fixed order:
//
//   format_version = 1
//   cipher.name = simon32/64
//   cipher.branch_width = 16
//   cipher.offsets = 8,1,2
//   config = 5,5,3
//   delta_in = (0x40,0x0)
//   ...
//
// Blank lines and lines starting with '#' are ignored. Decimals are written
// with 17 significant digits so that reloading gives the same doubles.

#include <iosfwd>
#include <optional>
#include <string>

#include "simondl/search.hpp"

namespace simondl {

struct TrailDocument {
    DLTrail trail;
    std::optional<DLDistinguisher> distinguisher;
};

constexpr int kTrailFormatVersion = 1;

void write_trail(std::ostream& os, const TrailDocument& doc);
std::string write_trail(const TrailDocument& doc);
// ParseError on malformed or reordered input, ConfigError on an inconsistent cipher block.
TrailDocument read_trail(std::istream& is);
TrailDocument read_trail(const std::string& text);
TrailDocument load_trail(const std::string& path);
void save_trail(const std::string& path, const TrailDocument& doc);

// Recomputes every numeric field. The distinguisher is recomputed with transform,
// which can be slow, so it is optional.
bool reverify(const TrailDocument& doc, bool check_distinguisher, std::string* why = nullptr);

}  // namespace simondl
