#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fcsig/simulate.hpp"
#include "fcsig/ustat.hpp"
#include "test_oracles.hpp"

using namespace fcsig;

namespace {

// The worked two-observation instance: <U_1,U_2> = 2, K_12 = K(0) = 0.75,
// phi_12 = 1, h = 1, q = 1.
TestInput worked_instance() {
  const GridPtr grid = Grid::uniform(5);
  Eigen::VectorXd u(2);
  u << 1.0, 2.0;
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(2, 1);
  Eigen::MatrixXd w = Eigen::MatrixXd::Ones(2, 5);
  return TestInput{ResponseSample(u), z, FunctionalSample(grid, w), 1.0, 1};
}

GramSet worked_grams(const TestInput& input) {
  return assemble_grams(input, MultiplicativeKernel{UnivariateKernel{KernelType::Epanechnikov}, 1},
                        WeightSequence::raw_l2());
}

}  // namespace

TEST_CASE("u_gram for scalar and functional responses") {
  SUBCASE("scalar outer product") {
    Eigen::VectorXd u(2);
    u << 1.0, 2.0;
    const Eigen::MatrixXd g = u_gram(ResponseSample(u));
    CHECK(g(0, 0) == 1.0);
    CHECK(g(0, 1) == 2.0);
    CHECK(g(1, 0) == 2.0);
    CHECK(g(1, 1) == 4.0);
  }

  SUBCASE("identical functional rows with squared norm three") {
    const GridPtr grid = Grid::uniform(31);
    Eigen::MatrixXd data(2, 31);
    data.setConstant(std::sqrt(3.0));
    const Eigen::MatrixXd g = u_gram(ResponseSample(FunctionalSample(grid, data)));
    for (Eigen::Index i = 0; i < 2; ++i)
      for (Eigen::Index j = 0; j < 2; ++j)
        CHECK(g(i, j) == doctest::Approx(3.0).epsilon(1e-10));
  }

  SUBCASE("orthogonal functional rows") {
    const GridPtr grid = Grid::uniform(41);
    Eigen::MatrixXd data(2, 41);
    data.row(0).setOnes();
    for (Eigen::Index r = 0; r < 41; ++r) data(1, r) = grid->points()(r) - 0.5;
    const Eigen::MatrixXd g = u_gram(ResponseSample(FunctionalSample(grid, data)));
    CHECK(std::fabs(g(0, 1)) <= 1e-8);
  }
}

TEST_CASE("worked instance: I_2 = 1.5, v_2^2 = 2.25, T_2 = 1") {
  const TestInput input = worked_instance();
  const GramSet grams = worked_grams(input);
  const double i_n = compute_In(grams, 2, input.h, input.q);
  const double v_n2 = compute_vn2(grams, 2, input.h, input.q);
  CHECK(i_n == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(v_n2 == doctest::Approx(2.25).epsilon(1e-12));
  CHECK(compute_Tn(i_n, v_n2) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("zero responses give a zero statistic") {
  TestInput input = worked_instance();
  input.u = ResponseSample(Eigen::VectorXd::Zero(2));
  const GramSet grams = worked_grams(input);
  CHECK(compute_In(grams, 2, input.h, input.q) == 0.0);
  CHECK(compute_vn2(grams, 2, input.h, input.q) == 0.0);
  CHECK_THROWS_AS(compute_Tn(0.0, 0.0), DegenerateError);
}

TEST_CASE("optimized statistics match the naive triple loop") {
  RngStream rng(101);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index n = 8;
    const GridPtr grid = Grid::uniform(17);
    const Eigen::MatrixXd w = oracle::random_matrix(rng, n, 17);
    const Eigen::MatrixXd z = oracle::random_matrix(rng, n, 1);
    Eigen::VectorXd u(n);
    for (Eigen::Index i = 0; i < n; ++i) u(i) = rng.normal();
    const double h = 0.9;

    TestInput input{ResponseSample(u), z, FunctionalSample(grid, w), h, 1};
    const GramSet grams = assemble_grams(
        input, MultiplicativeKernel{UnivariateKernel{KernelType::Epanechnikov}, 1},
        WeightSequence::raw_l2());
    const double i_n = compute_In(grams, n, h, 1);
    const double v_n2 = compute_vn2(grams, n, h, 1);

    const oracle::UStatOracle ref =
        oracle::naive_ustat(u, Eigen::MatrixXd(), z, w, h, 1, &oracle::epanechnikov);
    CHECK(i_n == doctest::Approx(ref.i_n).epsilon(1e-12));
    CHECK(v_n2 == doctest::Approx(ref.v_n2).epsilon(1e-12));
  }
}

TEST_CASE("asymptotic p-values") {
  CHECK(asymptotic_pvalue(0.0, 0.10).p == doctest::Approx(0.5).epsilon(1e-12));
  const PValue boundary = asymptotic_pvalue(1.6449, 0.05);
  CHECK(boundary.p == doctest::Approx(0.05).epsilon(1e-3));
  CHECK(boundary.reject);
  CHECK_FALSE(asymptotic_pvalue(1.6448, 0.05).reject);
  CHECK_THROWS_AS(asymptotic_pvalue(1.0, 0.0), InvalidInput);
}

TEST_CASE("T_n is scale invariant and permutation invariant") {
  RngStream rng(103);
  const Eigen::Index n = 12;
  const GridPtr grid = Grid::uniform(21);
  const Eigen::MatrixXd w = oracle::random_matrix(rng, n, 21);
  const Eigen::MatrixXd z = oracle::random_matrix(rng, n, 1);
  Eigen::VectorXd u(n);
  for (Eigen::Index i = 0; i < n; ++i) u(i) = rng.normal();
  const double h = 1.1;
  const MultiplicativeKernel kernel{UnivariateKernel{KernelType::Epanechnikov}, 1};

  TestInput input{ResponseSample(u), z, FunctionalSample(grid, w), h, 1};
  const GramSet grams = assemble_grams(input, kernel, WeightSequence::raw_l2());
  const double t_base =
      compute_Tn(compute_In(grams, n, h, 1), compute_vn2(grams, n, h, 1));

  SUBCASE("scaling u by c > 0") {
    for (double c : {0.5, 3.0, 17.0}) {
      TestInput scaled{ResponseSample(Eigen::VectorXd(c * u)), z,
                       FunctionalSample(grid, w), h, 1};
      const GramSet g2 = assemble_grams(scaled, kernel, WeightSequence::raw_l2());
      const double i2 = compute_In(g2, n, h, 1);
      const double v2 = compute_vn2(g2, n, h, 1);
      CHECK(i2 == doctest::Approx(c * c * compute_In(grams, n, h, 1)).epsilon(1e-10));
      CHECK(v2 ==
            doctest::Approx(c * c * c * c * compute_vn2(grams, n, h, 1)).epsilon(1e-10));
      CHECK(compute_Tn(i2, v2) == doctest::Approx(t_base).epsilon(1e-10));
    }
  }

  SUBCASE("permuting the sample") {
    std::vector<Eigen::Index> perm{5, 2, 9, 0, 11, 7, 1, 10, 4, 8, 3, 6};
    Eigen::VectorXd up(n);
    Eigen::MatrixXd zp(n, 1), wp(n, 21);
    for (Eigen::Index i = 0; i < n; ++i) {
      up(i) = u(perm[static_cast<std::size_t>(i)]);
      zp.row(i) = z.row(perm[static_cast<std::size_t>(i)]);
      wp.row(i) = w.row(perm[static_cast<std::size_t>(i)]);
    }
    TestInput permuted{ResponseSample(up), zp, FunctionalSample(grid, wp), h, 1};
    const GramSet g2 = assemble_grams(permuted, kernel, WeightSequence::raw_l2());
    const double t_perm =
        compute_Tn(compute_In(g2, n, h, 1), compute_vn2(g2, n, h, 1));
    CHECK(t_perm == doctest::Approx(t_base).epsilon(1e-12));
  }
}

TEST_CASE("compact kernel with isolated points degenerates loudly") {
  const GridPtr grid = Grid::uniform(5);
  Eigen::VectorXd u(3);
  u << 1.0, 2.0, 3.0;
  Eigen::MatrixXd z(3, 1);
  z << 0.0, 10.0, 20.0;
  TestInput input{ResponseSample(u), z, FunctionalSample(grid, Eigen::MatrixXd::Ones(3, 5)),
                  0.5, 1};
  const GramSet grams = assemble_grams(
      input, MultiplicativeKernel{UnivariateKernel{KernelType::Epanechnikov}, 1},
      WeightSequence::raw_l2());
  const double v = compute_vn2(grams, 3, input.h, input.q);
  CHECK(v == 0.0);
  CHECK_THROWS_WITH_AS(compute_Tn(0.0, v), doctest::Contains("increase h"), DegenerateError);
}

TEST_CASE("I_n is centered under the null with true residuals") {
  // Null data: U independent of (Z, W). The Monte Carlo mean of I_n must sit
  // within three standard errors of zero.
  const int reps = 200;
  const Eigen::Index n = 30;
  const GridPtr grid = Grid::uniform(21);
  const MultiplicativeKernel kernel{UnivariateKernel{KernelType::Epanechnikov}, 1};
  double sum = 0.0, sum_sq = 0.0;
  for (int rep = 0; rep < reps; ++rep) {
    RngStream rng = RngStream::derive(2024, {static_cast<std::uint64_t>(rep)});
    Eigen::MatrixXd w(n, 21);
    Eigen::MatrixXd z(n, 1);
    Eigen::VectorXd u(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      w.row(i) = brownian_bridge(grid, rng).values.transpose();
      z(i, 0) = rng.normal();
      u(i) = 0.25 * rng.normal();
    }
    TestInput input{ResponseSample(u), z, FunctionalSample(grid, w), 0.6, 1};
    const GramSet grams = assemble_grams(input, kernel, WeightSequence::raw_l2());
    const double i_n = compute_In(grams, n, input.h, input.q);
    sum += i_n;
    sum_sq += i_n * i_n;
  }
  const double mean = sum / reps;
  const double variance = (sum_sq - reps * mean * mean) / (reps - 1);
  const double se = std::sqrt(variance / reps);
  CHECK(std::fabs(mean) <= 3.0 * se);
}
