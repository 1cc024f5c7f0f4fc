#pragma once

#include <Eigen/Dense>
#include <memory>

#include "fcsig/common.hpp"

namespace fcsig {

// Uniform design on [0,1] shared by every curve of a sample. v1 supports
// uniform grids only; externally supplied curves must share one grid.
class Grid {
 public:
  explicit Grid(Eigen::VectorXd points);

  static std::shared_ptr<const Grid> uniform(Eigen::Index m);

  Eigen::Index size() const { return points_.size(); }
  double spacing() const { return dt_; }
  const Eigen::VectorXd& points() const { return points_; }

  // Composite trapezoid quadrature weight at node r.
  double weight(Eigen::Index r) const {
    return (r == 0 || r == points_.size() - 1) ? 0.5 * dt_ : dt_;
  }

  bool operator==(const Grid& other) const {
    return points_.size() == other.points_.size() && points_ == other.points_;
  }

 private:
  Eigen::VectorXd points_;
  double dt_;
};

using GridPtr = std::shared_ptr<const Grid>;

inline bool same_grid(const GridPtr& a, const GridPtr& b) {
  return a == b || (a && b && *a == *b);
}

// One discretized function on a grid.
struct Curve {
  GridPtr grid;
  Eigen::VectorXd values;

  Curve(GridPtr g, Eigen::VectorXd v);
};

// n curves on a shared grid, one per row.
class FunctionalSample {
 public:
  FunctionalSample(GridPtr grid, Eigen::MatrixXd data);

  Eigen::Index n() const { return data_.rows(); }
  Eigen::Index m() const { return data_.cols(); }
  const GridPtr& grid() const { return grid_; }
  const Eigen::MatrixXd& data() const { return data_; }
  Eigen::MatrixXd& mutable_data() { return data_; }

  Curve row(Eigen::Index i) const { return Curve(grid_, data_.row(i).transpose()); }

 private:
  GridPtr grid_;
  Eigen::MatrixXd data_;
};

// Trapezoid quadrature of f * g. Symmetric in its arguments and evaluated in
// a fixed left-to-right order so results are reproducible.
double inner_product(const Curve& f, const Curve& g);

double l2_norm_sq(const Curve& f);

Curve mean_curve(const FunctionalSample& s);

FunctionalSample center_sample(const FunctionalSample& s);

// Internal-style helpers operating on sample rows without copying them out.
double row_inner_product(const Grid& grid, const Eigen::MatrixXd& a, Eigen::Index i,
                         const Eigen::MatrixXd& b, Eigen::Index j);
double row_curve_inner(const Grid& grid, const Eigen::MatrixXd& a, Eigen::Index i,
                       const Eigen::VectorXd& v);
double row_diff_norm_sq(const Grid& grid, const Eigen::MatrixXd& a, Eigen::Index i,
                        Eigen::Index j);

}  // namespace fcsig
