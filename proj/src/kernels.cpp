#include "fcsig/kernels.hpp"

#include <cmath>

namespace fcsig {

namespace {
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
}

KernelType kernel_from_name(const std::string& name) {
  if (name == "epanechnikov") return KernelType::Epanechnikov;
  if (name == "gaussian") return KernelType::Gaussian;
  if (name == "triangle") return KernelType::Triangle;
  throw InvalidInput("unknown kernel: " + name);
}

std::string kernel_name(KernelType type) {
  switch (type) {
    case KernelType::Epanechnikov: return "epanechnikov";
    case KernelType::Gaussian: return "gaussian";
    case KernelType::Triangle: return "triangle";
  }
  return "?";
}

double UnivariateKernel::operator()(double x) const {
  switch (variant) {
    case KernelType::Epanechnikov:
      return std::fabs(x) < 1.0 ? 0.75 * (1.0 - x * x) : 0.0;
    case KernelType::Gaussian:
      return kInvSqrt2Pi * std::exp(-0.5 * x * x);
    case KernelType::Triangle:
      return std::fabs(x) < 1.0 ? 1.0 - std::fabs(x) : 0.0;
  }
  return 0.0;
}

double MultiplicativeKernel::at_zero() const {
  double acc = 1.0;
  for (int d = 0; d < q; ++d) acc *= base.at_zero();
  return acc;
}

double kernel_eval(const MultiplicativeKernel& kernel, const Eigen::RowVectorXd& z) {
  if (z.size() != kernel.q) throw InvalidInput("kernel_eval: dimension mismatch");
  if (!z.allFinite()) throw InvalidInput("kernel_eval: argument must be finite");
  double acc = 1.0;
  for (int d = 0; d < kernel.q; ++d) acc *= kernel.base(z(d));
  return acc;
}

WeightSequence a_weights(double beta, double epsilon, int k_trunc) {
  if (!(beta > 0.0)) throw InvalidInput("a_weights: beta must be positive");
  if (!(epsilon > 0.0)) throw InvalidInput("a_weights: epsilon must be positive");
  if (k_trunc < 1) throw InvalidInput("a_weights: K_trunc must be at least 1");

  const auto rate = [beta, epsilon](int k) {
    const double kd = static_cast<double>(k);
    const double lk = std::log(kd + 1.0);
    if (beta > 2.0) return std::pow(kd, -beta / 2.0);
    if (beta > 1.0) return 1.0 / (kd * std::pow(lk, 1.0 + epsilon));
    return std::pow(kd, beta - 2.0) * std::pow(lk, -2.0 * (1.0 + epsilon));
  };

  WeightSequence out;
  out.mode = WeightSequence::Mode::WeightedA;
  out.beta = beta;
  out.epsilon = epsilon;
  out.k_trunc = k_trunc;
  out.a.resize(static_cast<std::size_t>(k_trunc));
  const double norm = rate(1);
  for (int k = 1; k <= k_trunc; ++k) out.a[static_cast<std::size_t>(k - 1)] = rate(k) / norm;
  return out;
}

Eigen::MatrixXd k_gram(const Eigen::MatrixXd& z, const MultiplicativeKernel& kernel, double h) {
  if (!(h > 0.0)) throw InvalidInput("k_gram: bandwidth must be positive");
  if (z.cols() != kernel.q) throw InvalidInput("k_gram: score matrix has wrong dimension");
  const Eigen::Index n = z.rows();
  Eigen::MatrixXd gram(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      double acc = 1.0;
      for (int d = 0; d < kernel.q; ++d) acc *= kernel.base((z(i, d) - z(j, d)) / h);
      gram(i, j) = acc;
      gram(j, i) = acc;
    }
  }
  return gram;
}

Eigen::MatrixXd phi_gram(const FunctionalSample& w, const WeightSequence& weights,
                         const EigenSystem* basis) {
  const Eigen::Index n = w.n();
  Eigen::MatrixXd gram(n, n);

  if (weights.mode == WeightSequence::Mode::RawL2) {
    for (Eigen::Index i = 0; i < n; ++i) {
      gram(i, i) = 1.0;
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double d2 = row_diff_norm_sq(*w.grid(), w.data(), i, j);
        const double value = std::exp(-0.5 * d2);
        gram(i, j) = value;
        gram(j, i) = value;
      }
    }
    return gram;
  }

  if (basis == nullptr)
    throw InvalidInput("phi_gram: WeightedA mode requires an FPC basis");
  if (basis->size() < weights.k_trunc)
    throw InvalidInput("phi_gram: basis has fewer components than K_trunc");
  const ScoreMatrix scores = project_scores(w, *basis, weights.k_trunc);
  for (Eigen::Index i = 0; i < n; ++i) {
    gram(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double d2 = 0.0;
      for (int k = 0; k < weights.k_trunc; ++k) {
        const double gap = scores(i, k) - scores(j, k);
        d2 += weights.a[static_cast<std::size_t>(k)] * gap * gap;
      }
      const double value = std::exp(-0.5 * d2);
      gram(i, j) = value;
      gram(j, i) = value;
    }
  }
  return gram;
}

}  // namespace fcsig
