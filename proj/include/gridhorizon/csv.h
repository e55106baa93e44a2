#pragma once

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gridhorizon::csv {

// Locale-independent shortest round-trip formatting.
std::string FormatDouble(double v);
std::optional<double> ParseDouble(std::string_view text);

std::vector<std::string> SplitRow(std::string_view line);
std::string JoinRow(const std::vector<std::string>& cells);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> line_numbers;  // 1-based source line per row
  std::vector<std::pair<std::string, std::string>> directives;  // "# key: value"
};

// Reads a comma-separated table. Lines starting with '#' are comments; those
// of the form "# key: value" are collected as directives. Throws
// std::runtime_error naming the line on ragged rows.
Table Read(std::istream& in);

// Writes `content` to `path` through a temporary file and rename.
void WriteFileAtomic(const std::string& path, const std::string& content);

}  // namespace gridhorizon::csv
