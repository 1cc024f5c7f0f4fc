#pragma once

#include <string>
#include <vector>

#include "fcsig/fpc.hpp"
#include "fcsig/funcspace.hpp"

namespace fcsig {

enum class KernelType { Epanechnikov, Gaussian, Triangle };

KernelType kernel_from_name(const std::string& name);
std::string kernel_name(KernelType type);

// Symmetric univariate density used as the smoothing kernel. The Gaussian and
// triangle kernels have positive Fourier transform; the Epanechnikov kernel
// does not but is kept as the default to match common practice.
struct UnivariateKernel {
  KernelType variant = KernelType::Epanechnikov;

  double operator()(double x) const;
  double at_zero() const { return (*this)(0.0); }
  bool ft_positive() const { return variant != KernelType::Epanechnikov; }
};

// K(z) = prod_d Ktilde(z_d) on R^q.
struct MultiplicativeKernel {
  UnivariateKernel base;
  int q = 1;

  double at_zero() const;
};

double kernel_eval(const MultiplicativeKernel& kernel, const Eigen::RowVectorXd& z);

// Weights a_k of the weighted norm ||u||_A^2 = sum_k a_k u_k^2, or the raw
// L2 mode where the plain Hilbert norm is used instead.
struct WeightSequence {
  enum class Mode { RawL2, WeightedA };

  Mode mode = Mode::RawL2;
  double beta = 2.0;
  double epsilon = 0.5;
  int k_trunc = 0;
  std::vector<double> a;  // empty in RawL2 mode

  static WeightSequence raw_l2() { return WeightSequence{}; }
};

// Realizes the decay-rate regimes for a_k, normalized so a_1 = 1 and with
// ln(k) replaced by ln(k+1):
//   beta >  2 : a_k = k^{-beta/2}
//   1 < beta <= 2 : a_k ~ k^{-1} ln^{-(1+eps)}(k+1)
//   0 < beta <= 1 : a_k ~ k^{beta-2} ln^{-2(1+eps)}(k+1)
WeightSequence a_weights(double beta, double epsilon, int k_trunc);

// K_ij(h) = K((Z_i - Z_j)/h) for an n x q score matrix.
Eigen::MatrixXd k_gram(const Eigen::MatrixXd& z, const MultiplicativeKernel& kernel, double h);

// phi_ij = exp(-||W_i - W_j||^2 / 2), with the norm either raw L2 or the
// weighted norm over the first k_trunc basis scores. The basis is required in
// WeightedA mode.
Eigen::MatrixXd phi_gram(const FunctionalSample& w, const WeightSequence& weights,
                         const EigenSystem* basis = nullptr);

// Precomputed pairwise matrices reused across bootstrap replicates.
struct GramSet {
  Eigen::MatrixXd u_gram;
  Eigen::MatrixXd k_gram;
  Eigen::MatrixXd phi_gram;
};

}  // namespace fcsig
