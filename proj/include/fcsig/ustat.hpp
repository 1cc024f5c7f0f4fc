#pragma once

#include <optional>
#include <variant>

#include "fcsig/kernels.hpp"

namespace fcsig {

// Response sample U_i omega(Z_i): either n scalars or n curves. Any weight
// function omega is expected to be premultiplied into the values.
class ResponseSample {
 public:
  explicit ResponseSample(Eigen::VectorXd scalars);
  explicit ResponseSample(FunctionalSample curves);

  bool is_scalar() const { return std::holds_alternative<Eigen::VectorXd>(data_); }
  Eigen::Index n() const;

  const Eigen::VectorXd& scalars() const { return std::get<Eigen::VectorXd>(data_); }
  const FunctionalSample& curves() const { return std::get<FunctionalSample>(data_); }

  // Elementwise multiply scalars, or scale curve i by factors(i).
  ResponseSample scaled(const Eigen::VectorXd& factors) const;

 private:
  std::variant<Eigen::VectorXd, FunctionalSample> data_;
};

// Everything the statistic consumes: responses, the q-dimensional smoothing
// scores Z, the remainder curves W, and the bandwidth.
struct TestInput {
  ResponseSample u;
  Eigen::MatrixXd z;    // n x q
  FunctionalSample w;
  double h = 0.0;
  int q = 1;

  void validate() const;
};

struct TestResult {
  double i_n = 0.0;
  double v_n2 = 0.0;
  double t_n = 0.0;
  double p_asym = 1.0;
  // Filled by the bootstrap module when requested.
  std::optional<double> p_boot;
  std::optional<double> boot_crit;
  int boot_excluded = 0;
  int boot_b = 0;
};

// Pairwise response inner products <U_i, U_j>.
Eigen::MatrixXd u_gram(const ResponseSample& u);

GramSet assemble_grams(const TestInput& input, const MultiplicativeKernel& kernel,
                       const WeightSequence& weights, const EigenSystem* basis = nullptr);

// I_n(h) = [n(n-1)h^q]^{-1} sum_{i != j} <U_i, U_j> K_ij(h) phi_ij.
// Summation runs row-major over i < j and doubles by symmetry, so the result
// does not depend on thread count or scheduling.
double compute_In(const Eigen::MatrixXd& u_gram, const Eigen::MatrixXd& k_gram,
                  const Eigen::MatrixXd& phi_gram, Eigen::Index n, double h, int q);

inline double compute_In(const GramSet& grams, Eigen::Index n, double h, int q) {
  return compute_In(grams.u_gram, grams.k_gram, grams.phi_gram, n, h, q);
}

// v_n^2(h) = 2 [n^2 (n-1)^2 h^{2q}]^{-1} sum_{i != j} <U_i,U_j>^2 K_ij^2 phi_ij^2.
double compute_vn2(const Eigen::MatrixXd& u_gram, const Eigen::MatrixXd& k_gram,
                   const Eigen::MatrixXd& phi_gram, Eigen::Index n, double h, int q);

inline double compute_vn2(const GramSet& grams, Eigen::Index n, double h, int q) {
  return compute_vn2(grams.u_gram, grams.k_gram, grams.phi_gram, n, h, q);
}

// T_n = I_n / v_n. A zero variance estimate is reported as a degenerate
// statistic instead of an infinity.
double compute_Tn(double i_n, double v_n2);

struct PValue {
  double p = 1.0;
  bool reject = false;
};

// One-sided p = 1 - Phi(t_n); rejects when t_n >= z_{1-alpha}.
PValue asymptotic_pvalue(double t_n, double alpha);

}  // namespace fcsig
