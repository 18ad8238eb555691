#pragma once

// Minimal CSV reader for the fixture tables: comma-separated, no quoting,
// first line is the header. Blank lines and lines starting with '#' skipped.

#include <filesystem>
#include <string>
#include <vector>

namespace ecmkit::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Column index by name; throws ParseError naming the file when missing.
  int col(const std::string& name) const;

  std::string file;  // for error messages
};

Table read(const std::filesystem::path& path);

// Field helpers: empty string maps to "absent" for the optional variants.
double to_double(const Table& t, const std::vector<std::string>& row, int col);
int to_int(const Table& t, const std::vector<std::string>& row, int col);

}  // namespace ecmkit::csv
