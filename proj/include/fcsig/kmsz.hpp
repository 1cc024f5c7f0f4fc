#pragma once

#include "fcsig/fpc.hpp"

namespace fcsig {

// Eigenstructure of the empirical covariance operators of the (centered)
// covariate and response, plus the cross-covariance scores between them.
struct CrossOperators {
  EigenSystem gamma;            // eigenpairs of Gamma_n (covariate side)
  EigenSystem lambda;           // eigenpairs of Lambda_n (response side)
  Eigen::MatrixXd delta_scores; // (k, j) entry: <Delta_n v_k, u_j>
};

CrossOperators estimate_cross_operators(const FunctionalSample& x, const FunctionalSample& y,
                                        int p_tilde, int q_tilde);

struct KmszResult {
  double statistic = 0.0;
  int df = 0;
  double p_value = 1.0;
};

// Chi-square test of no linear effect of X on Y:
//   T(p, q) = n sum_{k <= p} sum_{j <= q} <Delta_n v_k, u_j>^2 / (gamma_k lambda_j),
// asymptotically chi-square with p*q degrees of freedom under the null.
// X and Y are mean-centered before the operators are estimated.
KmszResult kmsz_statistic(const FunctionalSample& x, const FunctionalSample& y, int p_tilde,
                          int q_tilde);

}  // namespace fcsig
