#pragma once

#include <vector>

#include "fcsig/funcspace.hpp"

namespace fcsig {

// Empirical covariance operator of a functional sample, stored as the m x m
// matrix of kernel values K(t_r, t_s) on the sample grid.
struct CovarianceOperator {
  GridPtr grid;
  Eigen::MatrixXd kernel_matrix;
};

// Estimated functional principal components: eigenvalues in descending order
// and L2-normalized eigenfunctions with a deterministic sign convention
// (component sum nonnegative, ties broken by the first nonzero coordinate).
struct EigenSystem {
  std::vector<double> eigenvalues;
  std::vector<Curve> eigenfunctions;

  int size() const { return static_cast<int>(eigenvalues.size()); }
};

// Coefficient matrix c_{ik} = <curve_i, phi_k>.
using ScoreMatrix = Eigen::MatrixXd;

// K_hat(t_r, t_s) = n^{-1} sum_i (X_i(t_r) - Xbar(t_r)) (X_i(t_s) - Xbar(t_s)).
CovarianceOperator estimate_covariance(const FunctionalSample& s);

// Solves the discretized integral eigenproblem on the sample grid using the
// trapezoid quadrature weights, so that returned eigenfunctions are exactly
// orthonormal under inner_product. Returns the top K pairs. Eigenvalues in
// [-1e-10, 0) are clamped to zero; anything lower is a numeric error.
EigenSystem eigendecompose(const CovarianceOperator& cov, int k);

ScoreMatrix project_scores(const FunctionalSample& s, const EigenSystem& basis, int k);

struct SplitSample {
  Eigen::VectorXd z_hat;      // first FPC score per observation
  FunctionalSample w_hat;     // remainder after removing the first component
};

// Z_i = <curve_i, phi_1>, W_i = curve_i - Z_i phi_1.
SplitSample split_first_component(const FunctionalSample& s, const EigenSystem& basis);

struct StandardizedSplit {
  Eigen::VectorXd z_std;
  FunctionalSample w_std;
  double z_scale;  // sqrt(n^{-1} sum z_i^2)
  double w_scale;  // sqrt(n^{-1} sum ||w_i||^2)
};

// Rescales so the empirical second moment of z is 1 and the mean squared
// L2 norm of w is 1.
StandardizedSplit standardize_split(const Eigen::VectorXd& z_hat, const FunctionalSample& w_hat);

}  // namespace fcsig
