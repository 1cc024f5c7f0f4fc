#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "fcsig/rng.hpp"
#include "fcsig/ustat.hpp"

namespace fcsig {

// Mammen two-point multiplier law: mean 0, variance 1, third moment 1.
struct MammenLaw {
  double v_minus;  // -(sqrt(5)-1)/2
  double v_plus;   //  (sqrt(5)+1)/2
  double p_minus;  //  (sqrt(5)+1)/(2 sqrt(5)), probability of v_minus
  double p_plus;   //  (sqrt(5)-1)/(2 sqrt(5))

  MammenLaw();
};

Eigen::VectorXd mammen_draw(RngStream& rng, Eigen::Index n);

struct BootstrapOptions {
  int b = 199;
  double alpha = 0.10;
  int threads = 1;
  // Test hook: forces every multiplier to 1 so T* reproduces T_n exactly.
  bool unit_multipliers = false;
};

struct BootstrapResult {
  std::vector<double> stats;  // valid T* replicates, sorted ascending
  double crit = 0.0;          // empirical (1-alpha) quantile
  double p_boot = 1.0;        // (1 + #{T* >= T_n}) / (B_valid + 1)
  int excluded = 0;           // replicates dropped for a zero variance estimate
};

// Maps a multiplier vector zeta to the bootstrap response sample. When the
// observed responses are estimated residuals of a fitted model, the builder
// should regenerate y* = fitted + zeta .* u and re-estimate the residuals,
// so each T* carries the same estimation effect as the observed statistic.
using ReplicateBuilder = std::function<ResponseSample(const Eigen::VectorXd& zeta)>;

// Wild bootstrap of T_n. Without a builder the replicate responses are
// U*_i = zeta_i U_i, the rule for directly observed responses. The response
// gram is recomputed per replicate; k_gram and phi_gram are reused from
// `grams` since they do not depend on U. Replicate r draws its multipliers
// from a stream derived from (seed, r), so results do not depend on thread
// count. Errors out if more than 10% of replicates are degenerate.
BootstrapResult wild_bootstrap(const TestInput& input, const GramSet& grams,
                               double t_observed, const BootstrapOptions& options,
                               std::uint64_t seed, const ReplicateBuilder& rebuild = {});

}  // namespace fcsig
