#pragma once

// Minimal CSV helpers shared by every report reader and writer. Fields never
// contain commas or quotes in any schema this library emits, so quoting is
// not supported.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace docstat::csv {

std::vector<std::string> split(std::string_view line, char sep = ',');

std::string_view trim(std::string_view s);

// Shortest round-trip decimal form; infinities are written `+inf` / `-inf`.
std::string format_real(double value);

// Accepts everything format_real writes plus `inf`, `infinity`, `nan`.
double parse_real(std::string_view text);

long long parse_integer(std::string_view text);

std::string read_file(const std::filesystem::path& path);

// Splits on '\n' and drops a trailing '\r' from each line.
std::vector<std::string> lines(std::string_view text);

// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace docstat::csv
