#include "fcsig/csv_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fcsig {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  fields.push_back(field);
  return fields;
}

[[noreturn]] void parse_fail(const std::string& path, std::size_t line_no,
                             const std::string& message) {
  throw InvalidInput(path + ":" + std::to_string(line_no) + ": " + message);
}

double parse_double(const std::string& path, std::size_t line_no, const std::string& field) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc{} || result.ptr != end)
    parse_fail(path, line_no, "cannot parse number '" + field + "'");
  return value;
}

int parse_group(const std::string& path, std::size_t line_no, const std::string& field) {
  int value = 0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc{} || result.ptr != end || value < 1)
    parse_fail(path, line_no, "cannot parse group label '" + field + "'");
  return value;
}

struct Header {
  bool has_groups = false;
  std::size_t value_cols = 0;
};

Header read_header(const std::string& path, std::ifstream& in, std::string& line) {
  if (!std::getline(in, line)) throw InvalidInput(path + ": empty file");
  const std::vector<std::string> fields = split_line(line);
  if (fields.empty() || fields[0] != "id")
    parse_fail(path, 1, "header must start with an 'id' column");
  Header h;
  std::size_t start = 1;
  if (fields.size() > 1 && fields[1] == "g") {
    h.has_groups = true;
    start = 2;
  }
  h.value_cols = fields.size() - start;
  if (h.value_cols == 0) parse_fail(path, 1, "no value columns");
  return h;
}

}  // namespace

bool csv_is_scalar(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput(path + ": cannot open file");
  std::string line;
  const Header h = read_header(path, in, line);
  if (h.value_cols != 1) return false;
  const std::vector<std::string> fields = split_line(line);
  return fields.back() == "y";
}

MatrixTable read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput(path + ": cannot open file");
  std::string line;
  const Header h = read_header(path, in, line);

  MatrixTable table;
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_line(line);
    const std::size_t expected = 1 + (h.has_groups ? 1 : 0) + h.value_cols;
    if (fields.size() != expected)
      parse_fail(path, line_no,
                 "expected " + std::to_string(expected) + " fields, found " +
                     std::to_string(fields.size()));
    table.ids.push_back(fields[0]);
    std::size_t start = 1;
    if (h.has_groups) {
      table.groups.push_back(parse_group(path, line_no, fields[1]));
      start = 2;
    }
    std::vector<double> values(h.value_cols);
    for (std::size_t c = 0; c < h.value_cols; ++c)
      values[c] = parse_double(path, line_no, fields[start + c]);
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw InvalidInput(path + ": no data rows");

  table.data.resize(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(h.value_cols));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t c = 0; c < h.value_cols; ++c)
      table.data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = rows[i][c];
  return table;
}

CurveTable read_curve_csv(const std::string& path) {
  MatrixTable raw = read_matrix_csv(path);
  if (raw.data.cols() < 2)
    throw InvalidInput(path + ": a curve file needs at least 2 design columns");
  CurveTable table;
  table.ids = std::move(raw.ids);
  table.groups = std::move(raw.groups);
  table.grid = Grid::uniform(raw.data.cols());
  table.data = std::move(raw.data);
  return table;
}

ScalarTable read_scalar_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput(path + ": cannot open file");
  std::string line;
  const Header h = read_header(path, in, line);
  if (h.value_cols != 1) parse_fail(path, 1, "a scalar file must have exactly one y column");

  ScalarTable table;
  std::vector<double> values;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_line(line);
    const std::size_t expected = h.has_groups ? 3 : 2;
    if (fields.size() != expected)
      parse_fail(path, line_no,
                 "expected " + std::to_string(expected) + " fields, found " +
                     std::to_string(fields.size()));
    table.ids.push_back(fields[0]);
    if (h.has_groups) table.groups.push_back(parse_group(path, line_no, fields[1]));
    values.push_back(parse_double(path, line_no, fields.back()));
  }
  if (values.empty()) throw InvalidInput(path + ": no data rows");
  table.values = Eigen::Map<Eigen::VectorXd>(values.data(),
                                             static_cast<Eigen::Index>(values.size()));
  return table;
}

std::string format_double(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

void write_curve_csv(std::ostream& out, const CurveTable& table) {
  out << "id";
  if (table.has_groups()) out << ",g";
  for (Eigen::Index c = 0; c < table.data.cols(); ++c) out << ",t_" << (c + 1);
  out << "\n";
  for (Eigen::Index i = 0; i < table.data.rows(); ++i) {
    out << table.ids[static_cast<std::size_t>(i)];
    if (table.has_groups()) out << "," << table.groups[static_cast<std::size_t>(i)];
    for (Eigen::Index c = 0; c < table.data.cols(); ++c)
      out << "," << format_double(table.data(i, c));
    out << "\n";
  }
}

void write_curve_csv(const std::string& path, const CurveTable& table) {
  std::ofstream out(path);
  if (!out) throw InvalidInput(path + ": cannot open file for writing");
  write_curve_csv(out, table);
}

void write_scalar_csv(const std::string& path, const ScalarTable& table) {
  std::ofstream out(path);
  if (!out) throw InvalidInput(path + ": cannot open file for writing");
  out << "id";
  if (table.has_groups()) out << ",g";
  out << ",y\n";
  for (Eigen::Index i = 0; i < table.values.size(); ++i) {
    out << table.ids[static_cast<std::size_t>(i)];
    if (table.has_groups()) out << "," << table.groups[static_cast<std::size_t>(i)];
    out << "," << format_double(table.values(i)) << "\n";
  }
}

}  // namespace fcsig
