#include "fcsig/funcspace.hpp"

#include <cmath>

namespace fcsig {

Grid::Grid(Eigen::VectorXd points) : points_(std::move(points)) {
  const Eigen::Index m = points_.size();
  if (m < 2) throw InvalidInput("Grid: need at least 2 points");
  if (!points_.allFinite()) throw InvalidInput("Grid: points must be finite");
  if (points_(0) != 0.0 || points_(m - 1) != 1.0)
    throw InvalidInput("Grid: points must span [0,1]");
  dt_ = 1.0 / static_cast<double>(m - 1);
  for (Eigen::Index r = 1; r < m; ++r) {
    const double step = points_(r) - points_(r - 1);
    if (!(step > 0.0)) throw InvalidInput("Grid: points must be strictly increasing");
    if (std::fabs(step - dt_) > 1e-12 * dt_)
      throw InvalidInput("Grid: spacing must be uniform");
  }
}

std::shared_ptr<const Grid> Grid::uniform(Eigen::Index m) {
  if (m < 2) throw InvalidInput("Grid::uniform: need at least 2 points");
  Eigen::VectorXd pts(m);
  const double dt = 1.0 / static_cast<double>(m - 1);
  for (Eigen::Index r = 0; r < m; ++r) pts(r) = static_cast<double>(r) * dt;
  pts(m - 1) = 1.0;
  return std::make_shared<const Grid>(std::move(pts));
}

Curve::Curve(GridPtr g, Eigen::VectorXd v) : grid(std::move(g)), values(std::move(v)) {
  if (!grid) throw InvalidInput("Curve: null grid");
  if (values.size() != grid->size()) throw InvalidInput("Curve: values/grid length mismatch");
  if (!values.allFinite()) throw InvalidInput("Curve: values must be finite");
}

FunctionalSample::FunctionalSample(GridPtr grid, Eigen::MatrixXd data)
    : grid_(std::move(grid)), data_(std::move(data)) {
  if (!grid_) throw InvalidInput("FunctionalSample: null grid");
  if (data_.rows() < 1) throw InvalidInput("FunctionalSample: empty sample");
  if (data_.cols() != grid_->size())
    throw InvalidInput("FunctionalSample: column count does not match grid");
  if (!data_.allFinite()) throw InvalidInput("FunctionalSample: values must be finite");
}

double inner_product(const Curve& f, const Curve& g) {
  if (!same_grid(f.grid, g.grid)) throw InvalidInput("inner_product: curves on different grids");
  const Grid& grid = *f.grid;
  const Eigen::Index m = grid.size();
  double acc = 0.0;
  for (Eigen::Index r = 0; r < m; ++r) acc += grid.weight(r) * f.values(r) * g.values(r);
  return acc;
}

double l2_norm_sq(const Curve& f) { return inner_product(f, f); }

Curve mean_curve(const FunctionalSample& s) {
  const Eigen::Index n = s.n();
  const Eigen::Index m = s.m();
  Eigen::VectorXd mean(m);
  for (Eigen::Index c = 0; c < m; ++c) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) acc += s.data()(i, c);
    mean(c) = acc / static_cast<double>(n);
  }
  return Curve(s.grid(), std::move(mean));
}

FunctionalSample center_sample(const FunctionalSample& s) {
  const Curve mu = mean_curve(s);
  Eigen::MatrixXd centered = s.data();
  centered.rowwise() -= mu.values.transpose();
  return FunctionalSample(s.grid(), std::move(centered));
}

double row_inner_product(const Grid& grid, const Eigen::MatrixXd& a, Eigen::Index i,
                         const Eigen::MatrixXd& b, Eigen::Index j) {
  const Eigen::Index m = grid.size();
  double acc = 0.0;
  for (Eigen::Index r = 0; r < m; ++r) acc += grid.weight(r) * a(i, r) * b(j, r);
  return acc;
}

double row_curve_inner(const Grid& grid, const Eigen::MatrixXd& a, Eigen::Index i,
                       const Eigen::VectorXd& v) {
  const Eigen::Index m = grid.size();
  double acc = 0.0;
  for (Eigen::Index r = 0; r < m; ++r) acc += grid.weight(r) * a(i, r) * v(r);
  return acc;
}

double row_diff_norm_sq(const Grid& grid, const Eigen::MatrixXd& a, Eigen::Index i,
                        Eigen::Index j) {
  const Eigen::Index m = grid.size();
  double acc = 0.0;
  for (Eigen::Index r = 0; r < m; ++r) {
    const double d = a(i, r) - a(j, r);
    acc += grid.weight(r) * d * d;
  }
  return acc;
}

}  // namespace fcsig
