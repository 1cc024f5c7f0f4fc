#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fcsig/bootstrap.hpp"
#include "test_oracles.hpp"

using namespace fcsig;

namespace {

TestInput random_input(std::uint64_t seed, Eigen::Index n, Eigen::Index m, double h) {
  RngStream rng(seed);
  Eigen::VectorXd u(n);
  for (Eigen::Index i = 0; i < n; ++i) u(i) = rng.normal();
  const GridPtr grid = Grid::uniform(m);
  return TestInput{ResponseSample(u), oracle::random_matrix(rng, n, 1),
                   FunctionalSample(grid, oracle::random_matrix(rng, n, m)), h, 1};
}

GramSet grams_for(const TestInput& input) {
  return assemble_grams(input,
                        MultiplicativeKernel{UnivariateKernel{KernelType::Epanechnikov}, 1},
                        WeightSequence::raw_l2());
}

}  // namespace

TEST_CASE("Mammen law closed-form moments") {
  const MammenLaw law;
  CHECK(law.p_minus + law.p_plus == doctest::Approx(1.0).epsilon(1e-15));
  const double mean = law.p_minus * law.v_minus + law.p_plus * law.v_plus;
  const double m2 = law.p_minus * law.v_minus * law.v_minus +
                    law.p_plus * law.v_plus * law.v_plus;
  const double m3 = law.p_minus * std::pow(law.v_minus, 3) +
                    law.p_plus * std::pow(law.v_plus, 3);
  CHECK(std::fabs(mean) <= 1e-12);
  CHECK(m2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m3 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(law.v_minus == doctest::Approx(-0.618033988749895).epsilon(1e-12));
  CHECK(law.v_plus == doctest::Approx(1.618033988749895).epsilon(1e-12));
}

TEST_CASE("Mammen draws take only the two admissible values") {
  RngStream rng(5);
  const MammenLaw law;
  const Eigen::VectorXd draws = mammen_draw(rng, 1000);
  for (Eigen::Index i = 0; i < draws.size(); ++i) {
    const bool ok = draws(i) == law.v_minus || draws(i) == law.v_plus;
    CHECK(ok);
  }
}

TEST_CASE("Mammen sample moments over one million draws") {
  RngStream rng(6);
  const Eigen::Index n = 1000000;
  const Eigen::VectorXd draws = mammen_draw(rng, n);
  double s1 = 0.0, s2 = 0.0, s3 = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    s1 += draws(i);
    s2 += draws(i) * draws(i);
    s3 += draws(i) * draws(i) * draws(i);
  }
  CHECK(std::fabs(s1 / n) <= 0.005);
  CHECK(std::fabs(s2 / n - 1.0) <= 0.01);
  CHECK(std::fabs(s3 / n - 1.0) <= 0.02);
}

TEST_CASE("unit multipliers reproduce the observed statistic exactly") {
  const TestInput input = random_input(11, 14, 17, 1.2);
  const GramSet grams = grams_for(input);
  const double t_obs = compute_Tn(compute_In(grams, 14, input.h, 1),
                                  compute_vn2(grams, 14, input.h, 1));
  BootstrapOptions opts;
  opts.b = 1;
  opts.alpha = 0.10;
  opts.unit_multipliers = true;
  const BootstrapResult result = wild_bootstrap(input, grams, t_obs, opts, 99);
  REQUIRE(result.stats.size() == 1);
  CHECK(result.stats[0] == t_obs);
  CHECK(result.p_boot == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("all-zero responses exercise the degeneracy error path") {
  TestInput input = random_input(12, 10, 9, 1.0);
  input.u = ResponseSample(Eigen::VectorXd::Zero(10));
  const GramSet grams = grams_for(input);
  BootstrapOptions opts;
  opts.b = 20;
  CHECK_THROWS_AS(wild_bootstrap(input, grams, 0.0, opts, 7), DegenerateError);
}

TEST_CASE("cached grams equal a from-scratch replicate") {
  const TestInput input = random_input(13, 12, 15, 1.1);
  const GramSet grams = grams_for(input);
  BootstrapOptions opts;
  opts.b = 1;
  const std::uint64_t seed = 4242;
  const BootstrapResult result = wild_bootstrap(input, grams, 0.0, opts, seed);
  REQUIRE(result.stats.size() == 1);

  // Reproduce replicate 0 from scratch: same multiplier stream, but all three
  // grams rebuilt from the scaled response.
  RngStream rng = RngStream::derive(seed, {0});
  const Eigen::VectorXd zeta = mammen_draw(rng, 12);
  TestInput scratch = input;
  scratch.u = input.u.scaled(zeta);
  const GramSet fresh = grams_for(scratch);
  const double t_star = compute_Tn(compute_In(fresh, 12, input.h, 1),
                                   compute_vn2(fresh, 12, input.h, 1));
  CHECK(result.stats[0] == doctest::Approx(t_star).epsilon(1e-12));
}

TEST_CASE("bootstrap output is identical across thread counts") {
  const TestInput input = random_input(14, 16, 13, 1.3);
  const GramSet grams = grams_for(input);
  const double t_obs = compute_Tn(compute_In(grams, 16, input.h, 1),
                                  compute_vn2(grams, 16, input.h, 1));
  BootstrapOptions serial;
  serial.b = 64;
  serial.threads = 1;
  BootstrapOptions parallel = serial;
  parallel.threads = 4;
  const BootstrapResult a = wild_bootstrap(input, grams, t_obs, serial, 505);
  const BootstrapResult b = wild_bootstrap(input, grams, t_obs, parallel, 505);
  REQUIRE(a.stats.size() == b.stats.size());
  for (std::size_t i = 0; i < a.stats.size(); ++i) CHECK(a.stats[i] == b.stats[i]);
  CHECK(a.crit == b.crit);
  CHECK(a.p_boot == b.p_boot);
}

TEST_CASE("critical value is monotone in alpha and matches the order statistic") {
  const TestInput input = random_input(15, 18, 11, 1.4);
  const GramSet grams = grams_for(input);
  const double t_obs = compute_Tn(compute_In(grams, 18, input.h, 1),
                                  compute_vn2(grams, 18, input.h, 1));
  BootstrapOptions opts;
  opts.b = 199;
  double previous = std::numeric_limits<double>::infinity();
  for (double alpha : {0.05, 0.10, 0.20, 0.50}) {
    opts.alpha = alpha;
    const BootstrapResult result = wild_bootstrap(input, grams, t_obs, opts, 321);
    CHECK(result.crit <= previous);
    previous = result.crit;
    if (alpha == 0.10) {
      // ceil(0.9 * 199) = 180th order statistic.
      CHECK(result.crit == result.stats[179]);
    }
  }
}

TEST_CASE("bootstrap of the functional response scales curves") {
  const GridPtr grid = Grid::uniform(13);
  RngStream rng(77);
  const Eigen::Index n = 10;
  TestInput input{ResponseSample(FunctionalSample(grid, oracle::random_matrix(rng, n, 13))),
                  oracle::random_matrix(rng, n, 1),
                  FunctionalSample(grid, oracle::random_matrix(rng, n, 13)), 1.0, 1};
  const GramSet grams = grams_for(input);
  const double t_obs = compute_Tn(compute_In(grams, n, 1.0, 1),
                                  compute_vn2(grams, n, 1.0, 1));
  BootstrapOptions opts;
  opts.b = 99;
  const BootstrapResult result = wild_bootstrap(input, grams, t_obs, opts, 88);
  CHECK(result.excluded == 0);
  CHECK(result.p_boot > 0.0);
  CHECK(result.p_boot <= 1.0);
}
