#include "csv.hpp"

#include <fstream>
#include <sstream>

#include "ecmkit/error.hpp"

namespace ecmkit::csv {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

int Table::col(const std::string& name) const {
  for (size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  throw ParseError(file + ": missing column '" + name + "'");
}

Table read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  Table t;
  t.file = path.string();
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (t.header.empty()) {
      t.header = split_line(line);
      continue;
    }
    t.rows.push_back(split_line(line));
  }
  if (t.header.empty()) throw ParseError(path.string() + ": empty file");
  return t;
}

double to_double(const Table& t, const std::vector<std::string>& row, int col) {
  if (col >= static_cast<int>(row.size()) || row[col].empty())
    throw ParseError(t.file + ": empty numeric field in column " + t.header[col]);
  try {
    size_t pos = 0;
    double v = std::stod(row[col], &pos);
    if (pos != row[col].size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ParseError(t.file + ": bad number '" + row[col] + "' in column " + t.header[col]);
  }
}

int to_int(const Table& t, const std::vector<std::string>& row, int col) {
  double v = to_double(t, row, col);
  int i = static_cast<int>(v);
  if (static_cast<double>(i) != v)
    throw ParseError(t.file + ": expected integer in column " + t.header[col]);
  return i;
}

}  // namespace ecmkit::csv
