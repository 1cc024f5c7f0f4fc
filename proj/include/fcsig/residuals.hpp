#pragma once

#include <vector>

#include "fcsig/fpc.hpp"
#include "fcsig/ustat.hpp"

namespace fcsig {

// Functional sample with class labels g_i in {1..J}; every class nonempty.
class GroupedFunctionalSample {
 public:
  GroupedFunctionalSample(FunctionalSample sample, std::vector<int> groups);

  const FunctionalSample& sample() const { return sample_; }
  const std::vector<int>& groups() const { return groups_; }
  int n_groups() const { return n_groups_; }
  const std::vector<int>& group_sizes() const { return sizes_; }

 private:
  FunctionalSample sample_;
  std::vector<int> groups_;
  int n_groups_ = 0;
  std::vector<int> sizes_;
};

// U_i = Y_i - Ybar, for the no-effect model.
ResponseSample center_residuals(const ResponseSample& y);

struct FpcLinearFit {
  Eigen::VectorXd u_hat;
  double a_hat = 0.0;
  Curve b_hat;
  Eigen::VectorXd b_scores;  // coefficients of b_hat on the FPC basis
};

// Functional linear regression of a scalar response on the leading FPC of the
// covariate: b_j = g_j / theta_j with g(t) the empirical cross-covariance,
// then U_i = Y_i - a - <X_i, b>.
FpcLinearFit fpc_linear_residuals(const Eigen::VectorXd& y, const FunctionalSample& x,
                                  int j_comp = 5);

// Residual map of the score regression, prepared once and applied per
// bootstrap replicate. The FPC fit coincides with least squares on the
// design [1, scores], so applying the annihilator of that design to a
// regenerated response y* = fitted + zeta .* u gives exactly the residuals
// a refit would produce.
class FpcLinearRefitter {
 public:
  FpcLinearRefitter(const FunctionalSample& x, int j_comp);

  Eigen::VectorXd residuals(const Eigen::VectorXd& response) const;

 private:
  Eigen::MatrixXd design_;
  Eigen::LDLT<Eigen::MatrixXd> normal_;
};

enum class AnovaMode { OverallLoo, GroupLoo };

// Leave-one-out centered residuals: overall mode subtracts the mean of all
// other observations, group mode the mean of the other members of the class.
FunctionalSample anova_residuals(const GroupedFunctionalSample& y, AnovaMode mode);

// Leave-one-out ANCOVA residuals: both samples are group-loo centered, the
// pooled centered covariate is expanded over K principal directions with
// scores normalized to sum(c^2) = 1 per direction, and the projection of the
// centered response onto those score directions is removed leave-one-out.
// K = 0 returns the centered response unchanged.
FunctionalSample ancova_residuals(const GroupedFunctionalSample& y,
                                  const GroupedFunctionalSample& x, int k);

// U_i(t) = 1{Y_i <= t} - ECDF_n(t) for responses in the unit interval.
FunctionalSample indicator_residuals(const Eigen::VectorXd& y, const GridPtr& grid);

}  // namespace fcsig
