#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fcsig/funcspace.hpp"

namespace fcsig {

// Generic wide table: header `id[,g],<names...>`, one observation per row.
struct MatrixTable {
  std::vector<std::string> ids;
  std::vector<int> groups;
  Eigen::MatrixXd data;

  bool has_groups() const { return !groups.empty(); }
};

MatrixTable read_matrix_csv(const std::string& path);

// Wide-format curve table: header `id[,g],t_1,...,t_m`, one curve per row.
// The grid is inferred as uniform on [0,1] with m design points.
struct CurveTable {
  std::vector<std::string> ids;
  std::vector<int> groups;  // empty when the file has no g column
  GridPtr grid;
  Eigen::MatrixXd data;

  bool has_groups() const { return !groups.empty(); }
  FunctionalSample sample() const { return FunctionalSample(grid, data); }
};

// Scalar table: header `id[,g],y`.
struct ScalarTable {
  std::vector<std::string> ids;
  std::vector<int> groups;
  Eigen::VectorXd values;

  bool has_groups() const { return !groups.empty(); }
};

CurveTable read_curve_csv(const std::string& path);
ScalarTable read_scalar_csv(const std::string& path);

// Distinguishes the two layouts by the header (a single value column vs. a
// t_* block).
bool csv_is_scalar(const std::string& path);

void write_curve_csv(std::ostream& out, const CurveTable& table);
void write_curve_csv(const std::string& path, const CurveTable& table);
void write_scalar_csv(const std::string& path, const ScalarTable& table);

// Shortest-round-trip double formatting used by every CSV emitter.
std::string format_double(double value);

}  // namespace fcsig
