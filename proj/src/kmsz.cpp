#include "fcsig/kmsz.hpp"

#include <string>

#include "fcsig/stats.hpp"

namespace fcsig {

namespace {

void check_rank(const EigenSystem& sys, int wanted, const char* side) {
  const double top = sys.eigenvalues.front();
  for (int k = 0; k < wanted; ++k) {
    if (sys.eigenvalues[static_cast<std::size_t>(k)] <= 1e-10 * top)
      throw RankError(std::string("kmsz: ") + side + " operator rank below " +
                      std::to_string(wanted));
  }
}

}  // namespace

CrossOperators estimate_cross_operators(const FunctionalSample& x, const FunctionalSample& y,
                                        int p_tilde, int q_tilde) {
  if (x.n() != y.n()) throw InvalidInput("kmsz: samples have different sizes");
  if (p_tilde < 1 || q_tilde < 1) throw InvalidInput("kmsz: p and q must be at least 1");
  const Eigen::Index n = x.n();

  const FunctionalSample xc = center_sample(x);
  const FunctionalSample yc = center_sample(y);

  CrossOperators ops;
  ops.gamma = eigendecompose(estimate_covariance(x), p_tilde);
  ops.lambda = eigendecompose(estimate_covariance(y), q_tilde);
  check_rank(ops.gamma, p_tilde, "covariate");
  check_rank(ops.lambda, q_tilde, "response");

  const ScoreMatrix a = project_scores(xc, ops.gamma, p_tilde);
  const ScoreMatrix b = project_scores(yc, ops.lambda, q_tilde);

  // <Delta_n v_k, u_j> = n^{-1} sum_i <X_i, v_k> <Y_i, u_j>
  ops.delta_scores.resize(p_tilde, q_tilde);
  for (int k = 0; k < p_tilde; ++k)
    for (int j = 0; j < q_tilde; ++j) {
      double acc = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) acc += a(i, k) * b(i, j);
      ops.delta_scores(k, j) = acc / static_cast<double>(n);
    }
  return ops;
}

KmszResult kmsz_statistic(const FunctionalSample& x, const FunctionalSample& y, int p_tilde,
                          int q_tilde) {
  const CrossOperators ops = estimate_cross_operators(x, y, p_tilde, q_tilde);
  const Eigen::Index n = x.n();
  double stat = 0.0;
  for (int k = 0; k < p_tilde; ++k) {
    double row = 0.0;
    for (int j = 0; j < q_tilde; ++j) {
      const double d = ops.delta_scores(k, j);
      row += d * d / (ops.gamma.eigenvalues[static_cast<std::size_t>(k)] *
                      ops.lambda.eigenvalues[static_cast<std::size_t>(j)]);
    }
    stat += row;
  }
  stat *= static_cast<double>(n);
  KmszResult out;
  out.statistic = stat;
  out.df = p_tilde * q_tilde;
  out.p_value = chi_square_upper_tail(stat, out.df);
  return out;
}

}  // namespace fcsig
