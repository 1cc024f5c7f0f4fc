#include "fcsig/fpc.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace fcsig {

CovarianceOperator estimate_covariance(const FunctionalSample& s) {
  const Eigen::Index n = s.n();
  if (n < 2) throw InvalidInput("estimate_covariance: need at least 2 curves");
  const FunctionalSample centered = center_sample(s);
  Eigen::MatrixXd cross = centered.data().transpose() * centered.data() / static_cast<double>(n);
  // Mirror the lower triangle so the stored matrix is symmetric bit for bit.
  Eigen::MatrixXd kernel = cross.selfadjointView<Eigen::Lower>();
  return CovarianceOperator{s.grid(), std::move(kernel)};
}

EigenSystem eigendecompose(const CovarianceOperator& cov, int k) {
  const Eigen::Index m = cov.kernel_matrix.rows();
  if (cov.kernel_matrix.cols() != m) throw InvalidInput("eigendecompose: kernel matrix not square");
  if (k < 1 || k > m) throw InvalidInput("eigendecompose: K must lie in [1, m]");
  const Grid& grid = *cov.grid;

  // Symmetrized Nystrom discretization: S = D^{1/2} K D^{1/2} with D the
  // diagonal of trapezoid weights. Eigenvectors u of S map to eigenfunctions
  // v = D^{-1/2} u, which carry unit trapezoid L2 norm by construction.
  Eigen::VectorXd sqrt_w(m);
  for (Eigen::Index r = 0; r < m; ++r) sqrt_w(r) = std::sqrt(grid.weight(r));
  Eigen::MatrixXd sym(m, m);
  for (Eigen::Index c = 0; c < m; ++c)
    for (Eigen::Index r = 0; r < m; ++r)
      sym(r, c) = sqrt_w(r) * cov.kernel_matrix(r, c) * sqrt_w(c);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success)
    throw NumericError("eigendecompose: eigensolver failed to converge");

  EigenSystem out;
  out.eigenvalues.reserve(k);
  out.eigenfunctions.reserve(k);
  for (int idx = 0; idx < k; ++idx) {
    const Eigen::Index col = m - 1 - idx;  // solver returns ascending order
    double value = solver.eigenvalues()(col);
    if (value < 0.0) {
      if (value < -1e-10)
        throw NumericError("eigendecompose: eigenvalue below -1e-10, operator not PSD");
      value = 0.0;
    }
    Eigen::VectorXd v = solver.eigenvectors().col(col);
    for (Eigen::Index r = 0; r < m; ++r) v(r) /= sqrt_w(r);

    double comp_sum = 0.0;
    for (Eigen::Index r = 0; r < m; ++r) comp_sum += v(r);
    bool flip = comp_sum < 0.0;
    if (comp_sum == 0.0) {
      for (Eigen::Index r = 0; r < m; ++r) {
        if (v(r) != 0.0) {
          flip = v(r) < 0.0;
          break;
        }
      }
    }
    if (flip) v = -v;

    out.eigenvalues.push_back(value);
    out.eigenfunctions.emplace_back(cov.grid, std::move(v));
  }
  return out;
}

ScoreMatrix project_scores(const FunctionalSample& s, const EigenSystem& basis, int k) {
  if (k < 0 || k > basis.size())
    throw InvalidInput("project_scores: K exceeds the basis size");
  if (k > 0 && !same_grid(s.grid(), basis.eigenfunctions.front().grid))
    throw InvalidInput("project_scores: sample and basis grids differ");
  const Eigen::Index n = s.n();
  ScoreMatrix scores(n, k);
  const Grid& grid = *s.grid();
  for (int j = 0; j < k; ++j) {
    const Eigen::VectorXd& phi = basis.eigenfunctions[static_cast<std::size_t>(j)].values;
    for (Eigen::Index i = 0; i < n; ++i) {
      double acc = 0.0;
      for (Eigen::Index r = 0; r < grid.size(); ++r)
        acc += grid.weight(r) * s.data()(i, r) * phi(r);
      scores(i, j) = acc;
    }
  }
  return scores;
}

SplitSample split_first_component(const FunctionalSample& s, const EigenSystem& basis) {
  if (basis.size() < 1) throw InvalidInput("split_first_component: empty basis");
  const ScoreMatrix scores = project_scores(s, basis, 1);
  const Eigen::VectorXd& phi1 = basis.eigenfunctions.front().values;
  Eigen::MatrixXd rest = s.data();
  for (Eigen::Index i = 0; i < s.n(); ++i) rest.row(i) -= scores(i, 0) * phi1.transpose();
  return SplitSample{scores.col(0), FunctionalSample(s.grid(), std::move(rest))};
}

StandardizedSplit standardize_split(const Eigen::VectorXd& z_hat,
                                    const FunctionalSample& w_hat) {
  const Eigen::Index n = z_hat.size();
  if (n != w_hat.n()) throw InvalidInput("standardize_split: size mismatch");
  if (n < 1) throw InvalidInput("standardize_split: empty input");
  double z_m2 = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) z_m2 += z_hat(i) * z_hat(i);
  z_m2 /= static_cast<double>(n);
  double w_m2 = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    w_m2 += row_inner_product(*w_hat.grid(), w_hat.data(), i, w_hat.data(), i);
  w_m2 /= static_cast<double>(n);
  if (!(z_m2 > 0.0)) throw DegenerateError("standardize_split: zero second moment for z");
  if (!(w_m2 > 0.0)) throw DegenerateError("standardize_split: zero mean squared norm for w");
  const double z_scale = std::sqrt(z_m2);
  const double w_scale = std::sqrt(w_m2);
  return StandardizedSplit{z_hat / z_scale,
                           FunctionalSample(w_hat.grid(), w_hat.data() / w_scale), z_scale,
                           w_scale};
}

}  // namespace fcsig
