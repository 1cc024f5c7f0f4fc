#include "fcsig/ustat.hpp"

#include <cmath>

#include "fcsig/stats.hpp"

namespace fcsig {

ResponseSample::ResponseSample(Eigen::VectorXd scalars) : data_(std::move(scalars)) {
  const auto& v = std::get<Eigen::VectorXd>(data_);
  if (v.size() < 1) throw InvalidInput("ResponseSample: empty scalar sample");
  if (!v.allFinite()) throw InvalidInput("ResponseSample: values must be finite");
}

ResponseSample::ResponseSample(FunctionalSample curves) : data_(std::move(curves)) {}

Eigen::Index ResponseSample::n() const {
  return is_scalar() ? scalars().size() : curves().n();
}

ResponseSample ResponseSample::scaled(const Eigen::VectorXd& factors) const {
  if (factors.size() != n()) throw InvalidInput("ResponseSample::scaled: size mismatch");
  if (is_scalar()) {
    return ResponseSample(Eigen::VectorXd(scalars().cwiseProduct(factors)));
  }
  Eigen::MatrixXd data = curves().data();
  for (Eigen::Index i = 0; i < data.rows(); ++i) data.row(i) *= factors(i);
  return ResponseSample(FunctionalSample(curves().grid(), std::move(data)));
}

void TestInput::validate() const {
  const Eigen::Index n = u.n();
  if (z.rows() != n || w.n() != n) throw InvalidInput("TestInput: inconsistent sample sizes");
  if (q < 1 || z.cols() != q) throw InvalidInput("TestInput: z must be n x q with q >= 1");
  if (!(h > 0.0)) throw InvalidInput("TestInput: bandwidth must be positive");
  if (!z.allFinite()) throw InvalidInput("TestInput: z must be finite");
}

Eigen::MatrixXd u_gram(const ResponseSample& u) {
  const Eigen::Index n = u.n();
  Eigen::MatrixXd gram(n, n);
  if (u.is_scalar()) {
    const Eigen::VectorXd& v = u.scalars();
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i; j < n; ++j) {
        const double value = v(i) * v(j);
        gram(i, j) = value;
        gram(j, i) = value;
      }
    return gram;
  }
  const FunctionalSample& s = u.curves();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      const double value = row_inner_product(*s.grid(), s.data(), i, s.data(), j);
      gram(i, j) = value;
      gram(j, i) = value;
    }
  return gram;
}

GramSet assemble_grams(const TestInput& input, const MultiplicativeKernel& kernel,
                       const WeightSequence& weights, const EigenSystem* basis) {
  input.validate();
  if (kernel.q != input.q) throw InvalidInput("assemble_grams: kernel dimension mismatch");
  return GramSet{u_gram(input.u), k_gram(input.z, kernel, input.h),
                 phi_gram(input.w, weights, basis)};
}

double compute_In(const Eigen::MatrixXd& u_gram, const Eigen::MatrixXd& k_gram,
                  const Eigen::MatrixXd& phi_gram, Eigen::Index n, double h, int q) {
  if (n < 2) throw InvalidInput("compute_In: need n >= 2");
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double row = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j)
      row += u_gram(i, j) * k_gram(i, j) * phi_gram(i, j);
    total += row;
  }
  const double nd = static_cast<double>(n);
  return 2.0 * total / (nd * (nd - 1.0) * std::pow(h, q));
}

double compute_vn2(const Eigen::MatrixXd& u_gram, const Eigen::MatrixXd& k_gram,
                   const Eigen::MatrixXd& phi_gram, Eigen::Index n, double h, int q) {
  if (n < 2) throw InvalidInput("compute_vn2: need n >= 2");
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double row = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double term = u_gram(i, j) * k_gram(i, j) * phi_gram(i, j);
      row += term * term;
    }
    total += row;
  }
  const double nd = static_cast<double>(n);
  return 4.0 * total / (nd * nd * (nd - 1.0) * (nd - 1.0) * std::pow(h, 2 * q));
}

double compute_Tn(double i_n, double v_n2) {
  if (v_n2 < 0.0) throw NumericError("compute_Tn: negative variance estimate");
  if (v_n2 == 0.0)
    throw DegenerateError(
        "compute_Tn: zero variance estimate; no sample pairs interact at this "
        "bandwidth, increase h");
  return i_n / std::sqrt(v_n2);
}

PValue asymptotic_pvalue(double t_n, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("asymptotic_pvalue: alpha in (0,1)");
  PValue out;
  out.p = normal_upper_tail(t_n);
  out.reject = t_n >= normal_quantile(1.0 - alpha);
  return out;
}

}  // namespace fcsig
