#include "fcsig/residuals.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

namespace fcsig {

GroupedFunctionalSample::GroupedFunctionalSample(FunctionalSample sample,
                                                 std::vector<int> groups)
    : sample_(std::move(sample)), groups_(std::move(groups)) {
  const Eigen::Index n = sample_.n();
  if (static_cast<Eigen::Index>(groups_.size()) != n)
    throw InvalidInput("GroupedFunctionalSample: label count does not match sample size");
  for (int g : groups_) {
    if (g < 1) throw InvalidInput("GroupedFunctionalSample: labels must be in {1..J}");
    n_groups_ = std::max(n_groups_, g);
  }
  sizes_.assign(static_cast<std::size_t>(n_groups_), 0);
  for (int g : groups_) ++sizes_[static_cast<std::size_t>(g - 1)];
  for (int j = 0; j < n_groups_; ++j)
    if (sizes_[static_cast<std::size_t>(j)] == 0)
      throw InvalidInput("GroupedFunctionalSample: group " + std::to_string(j + 1) +
                         " is empty");
}

ResponseSample center_residuals(const ResponseSample& y) {
  const Eigen::Index n = y.n();
  if (n < 2) throw InvalidInput("center_residuals: need at least 2 observations");
  if (y.is_scalar()) {
    const Eigen::VectorXd& v = y.scalars();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) acc += v(i);
    const double mean = acc / static_cast<double>(n);
    Eigen::VectorXd out(n);
    for (Eigen::Index i = 0; i < n; ++i) out(i) = v(i) - mean;
    return ResponseSample(std::move(out));
  }
  return ResponseSample(center_sample(y.curves()));
}

FpcLinearFit fpc_linear_residuals(const Eigen::VectorXd& y, const FunctionalSample& x,
                                  int j_comp) {
  const Eigen::Index n = x.n();
  if (j_comp < 1) throw InvalidInput("fpc_linear_residuals: need at least 1 component");
  if (y.size() != n) throw InvalidInput("fpc_linear_residuals: response size mismatch");
  if (n <= j_comp) throw InvalidInput("fpc_linear_residuals: need n > J_comp");
  if (!y.allFinite()) throw InvalidInput("fpc_linear_residuals: response must be finite");

  const CovarianceOperator cov = estimate_covariance(x);
  const EigenSystem basis = eigendecompose(cov, j_comp);
  const double theta1 = basis.eigenvalues.front();
  for (int j = 0; j < j_comp; ++j) {
    if (basis.eigenvalues[static_cast<std::size_t>(j)] <= 1e-10 * theta1)
      throw RankError("fpc_linear_residuals: component " + std::to_string(j + 1) +
                      " has near-zero eigenvalue");
  }

  const Grid& grid = *x.grid();
  const Eigen::Index m = x.m();
  const Curve x_bar = mean_curve(x);
  double y_acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) y_acc += y(i);
  const double y_bar = y_acc / static_cast<double>(n);

  // g(t) = n^{-1} sum_i (Y_i - Ybar)(X_i(t) - Xbar(t))
  Eigen::VectorXd g(m);
  for (Eigen::Index r = 0; r < m; ++r) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      acc += (y(i) - y_bar) * (x.data()(i, r) - x_bar.values(r));
    g(r) = acc / static_cast<double>(n);
  }
  const Curve g_curve(x.grid(), std::move(g));

  Eigen::VectorXd b_scores(j_comp);
  Eigen::VectorXd b_values = Eigen::VectorXd::Zero(m);
  for (int j = 0; j < j_comp; ++j) {
    const Curve& phi = basis.eigenfunctions[static_cast<std::size_t>(j)];
    const double g_j = inner_product(g_curve, phi);
    b_scores(j) = g_j / basis.eigenvalues[static_cast<std::size_t>(j)];
    b_values += b_scores(j) * phi.values;
  }
  Curve b_hat(x.grid(), std::move(b_values));

  const double a_hat = y_bar - inner_product(x_bar, b_hat);
  Eigen::VectorXd u_hat(n);
  for (Eigen::Index i = 0; i < n; ++i)
    u_hat(i) = y(i) - a_hat - row_curve_inner(grid, x.data(), i, b_hat.values);

  return FpcLinearFit{std::move(u_hat), a_hat, std::move(b_hat), std::move(b_scores)};
}

FpcLinearRefitter::FpcLinearRefitter(const FunctionalSample& x, int j_comp) {
  const EigenSystem basis = eigendecompose(estimate_covariance(x), j_comp);
  design_.resize(x.n(), j_comp + 1);
  design_.col(0).setOnes();
  design_.rightCols(j_comp) = project_scores(x, basis, j_comp);
  normal_ = (design_.transpose() * design_).ldlt();
  if (normal_.info() != Eigen::Success)
    throw RankError("FpcLinearRefitter: singular score design");
}

Eigen::VectorXd FpcLinearRefitter::residuals(const Eigen::VectorXd& response) const {
  if (response.size() != design_.rows())
    throw InvalidInput("FpcLinearRefitter: response size mismatch");
  return response - design_ * normal_.solve(design_.transpose() * response);
}

FunctionalSample anova_residuals(const GroupedFunctionalSample& y, AnovaMode mode) {
  const FunctionalSample& s = y.sample();
  const Eigen::Index n = s.n();
  const Eigen::Index m = s.m();
  Eigen::MatrixXd out(n, m);

  if (mode == AnovaMode::OverallLoo) {
    if (n < 2) throw InvalidInput("anova_residuals: need n >= 2 for the overall mean");
    Eigen::VectorXd total = Eigen::VectorXd::Zero(m);
    for (Eigen::Index i = 0; i < n; ++i) total += s.data().row(i).transpose();
    const double scale = 1.0 / static_cast<double>(n - 1);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index r = 0; r < m; ++r)
        out(i, r) = s.data()(i, r) - scale * (total(r) - s.data()(i, r));
    return FunctionalSample(s.grid(), std::move(out));
  }

  for (int j = 0; j < y.n_groups(); ++j)
    if (y.group_sizes()[static_cast<std::size_t>(j)] < 2)
      throw InvalidInput("anova_residuals: group " + std::to_string(j + 1) +
                         " is a singleton, leave-one-out group mean undefined");
  Eigen::MatrixXd group_total = Eigen::MatrixXd::Zero(y.n_groups(), m);
  for (Eigen::Index i = 0; i < n; ++i)
    group_total.row(y.groups()[static_cast<std::size_t>(i)] - 1) += s.data().row(i);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int g = y.groups()[static_cast<std::size_t>(i)] - 1;
    const double scale = 1.0 / static_cast<double>(y.group_sizes()[static_cast<std::size_t>(g)] - 1);
    for (Eigen::Index r = 0; r < m; ++r)
      out(i, r) = s.data()(i, r) - scale * (group_total(g, r) - s.data()(i, r));
  }
  return FunctionalSample(s.grid(), std::move(out));
}

FunctionalSample ancova_residuals(const GroupedFunctionalSample& y,
                                  const GroupedFunctionalSample& x, int k) {
  if (y.groups() != x.groups())
    throw InvalidInput("ancova_residuals: response and covariate groupings differ");
  const Eigen::Index n = y.sample().n();
  if (k < 0 || k > n) throw InvalidInput("ancova_residuals: K must lie in [0, n]");

  const FunctionalSample y_tilde = anova_residuals(y, AnovaMode::GroupLoo);
  if (k == 0) return y_tilde;
  const FunctionalSample x_tilde = anova_residuals(x, AnovaMode::GroupLoo);

  // Principal directions of the pooled centered covariate via its n x n
  // gram matrix; eigenvector kappa holds the scores c_{. kappa} with
  // sum of squares 1, and the eigenvalue is the squared singular value.
  const Grid& grid = *x_tilde.grid();
  Eigen::MatrixXd gram(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = a; b < n; ++b) {
      const double value = row_inner_product(grid, x_tilde.data(), a, x_tilde.data(), b);
      gram(a, b) = value;
      gram(b, a) = value;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
  if (solver.info() != Eigen::Success)
    throw NumericError("ancova_residuals: eigensolver failed to converge");
  const double top = std::max(solver.eigenvalues()(n - 1), 0.0);
  Eigen::MatrixXd scores(n, k);
  for (int kappa = 0; kappa < k; ++kappa) {
    const double value = solver.eigenvalues()(n - 1 - kappa);
    if (value <= 1e-16 * top)
      throw RankError("ancova_residuals: covariate rank below K at direction " +
                      std::to_string(kappa + 1));
    scores.col(kappa) = solver.eigenvectors().col(n - 1 - kappa);
  }

  // U_ij = Ytilde_ij - sum_kappa c_ij.kappa (P_kappa - c_ij.kappa Ytilde_ij)
  // with P_kappa(t) = sum_kl c_kl.kappa Ytilde_kl(t).
  const Eigen::Index m = y_tilde.m();
  Eigen::MatrixXd projections(k, m);
  for (int kappa = 0; kappa < k; ++kappa) {
    for (Eigen::Index r = 0; r < m; ++r) {
      double acc = 0.0;
      for (Eigen::Index a = 0; a < n; ++a) acc += scores(a, kappa) * y_tilde.data()(a, r);
      projections(kappa, r) = acc;
    }
  }
  Eigen::MatrixXd out = y_tilde.data();
  for (Eigen::Index a = 0; a < n; ++a) {
    double own = 0.0;
    for (int kappa = 0; kappa < k; ++kappa) own += scores(a, kappa) * scores(a, kappa);
    for (Eigen::Index r = 0; r < m; ++r) {
      double proj = 0.0;
      for (int kappa = 0; kappa < k; ++kappa) proj += scores(a, kappa) * projections(kappa, r);
      out(a, r) = y_tilde.data()(a, r) - proj + own * y_tilde.data()(a, r);
    }
  }
  return FunctionalSample(y_tilde.grid(), std::move(out));
}

FunctionalSample indicator_residuals(const Eigen::VectorXd& y, const GridPtr& grid) {
  const Eigen::Index n = y.size();
  if (n < 1) throw InvalidInput("indicator_residuals: empty response");
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(y(i) >= 0.0 && y(i) <= 1.0))
      throw InvalidInput("indicator_residuals: responses must lie in [0,1]");
  const Eigen::Index m = grid->size();
  Eigen::MatrixXd out(n, m);
  for (Eigen::Index r = 0; r < m; ++r) {
    const double t = grid->points()(r);
    int count = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      if (y(i) <= t) ++count;
    const double ecdf = static_cast<double>(count) / static_cast<double>(n);
    for (Eigen::Index i = 0; i < n; ++i) out(i, r) = (y(i) <= t ? 1.0 : 0.0) - ecdf;
  }
  return FunctionalSample(grid, std::move(out));
}

}  // namespace fcsig
