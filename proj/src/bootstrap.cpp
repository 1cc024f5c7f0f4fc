#include "fcsig/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fcsig/parallel.hpp"

namespace fcsig {

MammenLaw::MammenLaw() {
  const double s5 = std::sqrt(5.0);
  v_minus = -(s5 - 1.0) / 2.0;
  v_plus = (s5 + 1.0) / 2.0;
  p_minus = (s5 + 1.0) / (2.0 * s5);
  p_plus = (s5 - 1.0) / (2.0 * s5);
}

Eigen::VectorXd mammen_draw(RngStream& rng, Eigen::Index n) {
  if (n < 1) throw InvalidInput("mammen_draw: n must be at least 1");
  const MammenLaw law;
  Eigen::VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i)
    out(i) = rng.uniform() < law.p_minus ? law.v_minus : law.v_plus;
  return out;
}

BootstrapResult wild_bootstrap(const TestInput& input, const GramSet& grams,
                               double t_observed, const BootstrapOptions& options,
                               std::uint64_t seed, const ReplicateBuilder& rebuild) {
  if (options.b < 1) throw InvalidInput("wild_bootstrap: B must be at least 1");
  if (!(options.alpha > 0.0 && options.alpha < 1.0))
    throw InvalidInput("wild_bootstrap: alpha must lie in (0,1)");
  input.validate();
  const Eigen::Index n = input.u.n();

  std::vector<double> replicate(static_cast<std::size_t>(options.b));
  parallel_for(options.b, options.threads, [&](int b) {
    RngStream rng = RngStream::derive(seed, {static_cast<std::uint64_t>(b)});
    Eigen::VectorXd zeta = options.unit_multipliers ? Eigen::VectorXd::Ones(n)
                                                    : mammen_draw(rng, n);
    const Eigen::MatrixXd u_star =
        u_gram(rebuild ? rebuild(zeta) : input.u.scaled(zeta));
    const double i_star = compute_In(u_star, grams.k_gram, grams.phi_gram, n, input.h, input.q);
    const double v_star = compute_vn2(u_star, grams.k_gram, grams.phi_gram, n, input.h, input.q);
    replicate[static_cast<std::size_t>(b)] =
        v_star == 0.0 ? std::numeric_limits<double>::quiet_NaN() : i_star / std::sqrt(v_star);
  });

  BootstrapResult out;
  out.stats.reserve(replicate.size());
  for (double t : replicate) {
    if (std::isnan(t))
      ++out.excluded;
    else
      out.stats.push_back(t);
  }
  if (out.excluded > options.b / 10)
    throw DegenerateError("wild_bootstrap: " + std::to_string(out.excluded) + " of " +
                          std::to_string(options.b) +
                          " replicates degenerate (zero variance); increase h");

  std::sort(out.stats.begin(), out.stats.end());
  const int b_valid = static_cast<int>(out.stats.size());
  int idx = static_cast<int>(std::ceil((1.0 - options.alpha) * b_valid));
  idx = std::max(1, std::min(idx, b_valid));
  out.crit = out.stats[static_cast<std::size_t>(idx - 1)];

  int count_ge = 0;
  for (double t : out.stats)
    if (t >= t_observed) ++count_ge;
  out.p_boot = static_cast<double>(1 + count_ge) / static_cast<double>(b_valid + 1);
  return out;
}

}  // namespace fcsig
