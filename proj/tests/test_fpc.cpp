#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fcsig/fpc.hpp"
#include "fcsig/simulate.hpp"
#include "test_oracles.hpp"

using namespace fcsig;

namespace {
constexpr double kPi = 3.14159265358979323846;

FunctionalSample wiener_sample(Eigen::Index n, Eigen::Index m, std::uint64_t seed) {
  const GridPtr grid = Grid::uniform(m);
  RngStream rng(seed);
  Eigen::MatrixXd data(n, m);
  for (Eigen::Index i = 0; i < n; ++i)
    data.row(i) = wiener_path(grid, rng).values.transpose();
  return FunctionalSample(grid, data);
}

}  // namespace

TEST_CASE("covariance of identical rows is zero") {
  const GridPtr g = Grid::uniform(11);
  RngStream rng(1);
  Eigen::MatrixXd data(3, 11);
  const Eigen::VectorXd row = oracle::random_matrix(rng, 1, 11).row(0);
  for (int i = 0; i < 3; ++i) data.row(i) = row;
  const CovarianceOperator cov = estimate_covariance(FunctionalSample(g, data));
  // n = 3 means the mean/n division rounds, leaving squared-roundoff residue.
  CHECK(cov.kernel_matrix.cwiseAbs().maxCoeff() <= 1e-30);
}

TEST_CASE("covariance of an antisymmetric pair is the rank-one product") {
  const GridPtr g = Grid::uniform(17);
  RngStream rng(2);
  Eigen::MatrixXd data(2, 17);
  const Eigen::VectorXd f = oracle::random_matrix(rng, 1, 17).row(0);
  data.row(0) = f;
  data.row(1) = -f;
  const CovarianceOperator cov = estimate_covariance(FunctionalSample(g, data));
  for (Eigen::Index r = 0; r < 17; ++r)
    for (Eigen::Index s = 0; s < 17; ++s)
      CHECK(cov.kernel_matrix(r, s) == doctest::Approx(f(r) * f(s)).epsilon(1e-14));
}

TEST_CASE("covariance requires two curves and stays symmetric") {
  const GridPtr g = Grid::uniform(5);
  CHECK_THROWS_AS(estimate_covariance(FunctionalSample(g, Eigen::MatrixXd::Zero(1, 5))),
                  InvalidInput);
  RngStream rng(3);
  const CovarianceOperator cov =
      estimate_covariance(FunctionalSample(g, oracle::random_matrix(rng, 9, 5)));
  for (Eigen::Index r = 0; r < 5; ++r)
    for (Eigen::Index s = 0; s < 5; ++s) {
      CHECK(cov.kernel_matrix(r, s) == cov.kernel_matrix(s, r));
      if (r == s) CHECK(cov.kernel_matrix(r, r) >= 0.0);
    }
}

TEST_CASE("wiener covariance estimate approaches min(s,t)") {
  const FunctionalSample sample = wiener_sample(2000, 201, 11);
  const CovarianceOperator cov = estimate_covariance(sample);
  const Eigen::VectorXd& t = sample.grid()->points();
  double worst = 0.0;
  for (Eigen::Index r = 0; r < 201; ++r)
    for (Eigen::Index s = 0; s < 201; ++s)
      worst = std::max(worst, std::fabs(cov.kernel_matrix(r, s) - std::min(t(r), t(s))));
  CHECK(worst <= 0.1);
}

TEST_CASE("eigendecompose handles the zero operator") {
  const GridPtr g = Grid::uniform(9);
  const CovarianceOperator cov{g, Eigen::MatrixXd::Zero(9, 9)};
  const EigenSystem sys = eigendecompose(cov, 4);
  for (double value : sys.eigenvalues) CHECK(value == 0.0);
}

TEST_CASE("eigendecompose recovers a rank-one spectrum") {
  const GridPtr g = Grid::uniform(41);
  Eigen::VectorXd f(41);
  for (Eigen::Index r = 0; r < 41; ++r) f(r) = 1.0 + std::sin(3.0 * g->points()(r));
  Eigen::MatrixXd kernel(41, 41);
  for (Eigen::Index r = 0; r < 41; ++r)
    for (Eigen::Index s = 0; s < 41; ++s) kernel(r, s) = f(r) * f(s);
  const double c = l2_norm_sq(Curve(g, f));
  const EigenSystem sys = eigendecompose(CovarianceOperator{g, kernel}, 5);
  CHECK(sys.eigenvalues[0] == doctest::Approx(c).epsilon(1e-6));
  for (int k = 1; k < 5; ++k) CHECK(std::fabs(sys.eigenvalues[k]) <= 1e-10);
}

TEST_CASE("eigendecompose validates K and rejects broken operators") {
  const GridPtr g = Grid::uniform(9);
  const CovarianceOperator cov{g, Eigen::MatrixXd::Identity(9, 9)};
  CHECK_THROWS_AS(eigendecompose(cov, 10), InvalidInput);
  CHECK_THROWS_AS(eigendecompose(cov, 0), InvalidInput);
  const CovarianceOperator negative{g, -Eigen::MatrixXd::Identity(9, 9)};
  CHECK_THROWS_AS(eigendecompose(negative, 2), NumericError);
}

TEST_CASE("wiener FPC matches the known eigensystem") {
  const FunctionalSample sample = wiener_sample(2000, 201, 19);
  const EigenSystem sys = eigendecompose(estimate_covariance(sample), 6);

  const double lambda1 = 4.0 / (kPi * kPi);
  CHECK(std::fabs(sys.eigenvalues[0] - lambda1) <= 0.15 * lambda1);

  const GridPtr grid = sample.grid();
  Eigen::VectorXd e1(grid->size());
  for (Eigen::Index r = 0; r < grid->size(); ++r)
    e1(r) = std::sqrt(2.0) * std::sin(0.5 * kPi * grid->points()(r));
  const double align = inner_product(sys.eigenfunctions[0], Curve(grid, e1));
  CHECK(std::fabs(align) >= 0.95);

  // Orthonormality in the trapezoid inner product.
  for (int j = 0; j < 6; ++j)
    for (int k = j; k < 6; ++k) {
      const double ip = inner_product(sys.eigenfunctions[j], sys.eigenfunctions[k]);
      CHECK(ip == doctest::Approx(j == k ? 1.0 : 0.0).epsilon(1e-6).scale(1.0));
    }
}

TEST_CASE("eigendecompose invariants: trace, residual, deterministic signs") {
  const FunctionalSample sample = wiener_sample(60, 31, 23);
  const CovarianceOperator cov = estimate_covariance(sample);
  const Grid& grid = *sample.grid();
  const Eigen::Index m = grid.size();
  const EigenSystem full = eigendecompose(cov, static_cast<int>(m));

  double eig_sum = 0.0;
  for (double value : full.eigenvalues) eig_sum += value;
  double quad_trace = 0.0;
  for (Eigen::Index r = 0; r < m; ++r) quad_trace += grid.weight(r) * cov.kernel_matrix(r, r);
  CHECK(eig_sum == doctest::Approx(quad_trace).epsilon(1e-8));

  // Residual of the weighted eigenproblem (K D) v = theta v.
  Eigen::VectorXd weights(m);
  for (Eigen::Index r = 0; r < m; ++r) weights(r) = grid.weight(r);
  const double top = std::max(full.eigenvalues[0], 1.0);
  for (int k = 0; k < full.size(); ++k) {
    const Eigen::VectorXd& v = full.eigenfunctions[static_cast<std::size_t>(k)].values;
    const Eigen::VectorXd residual =
        cov.kernel_matrix * weights.cwiseProduct(v) - full.eigenvalues[static_cast<std::size_t>(k)] * v;
    CHECK(residual.norm() <= 1e-8 * top);
  }

  const EigenSystem again = eigendecompose(cov, static_cast<int>(m));
  for (int k = 0; k < full.size(); ++k) {
    CHECK(full.eigenvalues[static_cast<std::size_t>(k)] ==
          again.eigenvalues[static_cast<std::size_t>(k)]);
    for (Eigen::Index r = 0; r < m; ++r)
      CHECK(full.eigenfunctions[static_cast<std::size_t>(k)].values(r) ==
            again.eigenfunctions[static_cast<std::size_t>(k)].values(r));
  }

  // Sign rule: component sums are nonnegative.
  for (const Curve& phi : full.eigenfunctions) {
    if (phi.values.cwiseAbs().maxCoeff() == 0.0) continue;
    double comp_sum = 0.0;
    for (Eigen::Index r = 0; r < m; ++r) comp_sum += phi.values(r);
    if (comp_sum != 0.0) CHECK(comp_sum > 0.0);
  }
}

TEST_CASE("score projection examples") {
  const FunctionalSample sample = wiener_sample(50, 41, 29);
  const EigenSystem basis = eigendecompose(estimate_covariance(sample), 4);
  const GridPtr grid = sample.grid();

  SUBCASE("a basis function projects to a unit coordinate") {
    Eigen::MatrixXd data(1, 41);
    data.row(0) = basis.eigenfunctions[0].values.transpose();
    const ScoreMatrix scores = project_scores(FunctionalSample(grid, data), basis, 4);
    CHECK(scores(0, 0) == doctest::Approx(1.0).epsilon(1e-6));
    for (int k = 1; k < 4; ++k) CHECK(std::fabs(scores(0, k)) <= 1e-6);
  }

  SUBCASE("zero curve gives a zero row") {
    const ScoreMatrix scores =
        project_scores(FunctionalSample(grid, Eigen::MatrixXd::Zero(1, 41)), basis, 4);
    CHECK(scores.cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("scores equal direct inner products") {
    RngStream rng(5);
    const FunctionalSample one(grid, oracle::random_matrix(rng, 1, 41));
    const ScoreMatrix scores = project_scores(one, basis, 3);
    for (int k = 0; k < 3; ++k)
      CHECK(scores(0, k) == inner_product(one.row(0), basis.eigenfunctions[static_cast<std::size_t>(k)]));
  }

  SUBCASE("grid mismatch is rejected") {
    const GridPtr other = Grid::uniform(13);
    CHECK_THROWS_AS(project_scores(FunctionalSample(other, Eigen::MatrixXd::Zero(1, 13)),
                                   basis, 2),
                    InvalidInput);
  }
}

TEST_CASE("first component split") {
  const FunctionalSample sample = wiener_sample(40, 41, 31);
  const EigenSystem basis = eigendecompose(estimate_covariance(sample), 3);
  const GridPtr grid = sample.grid();

  SUBCASE("multiple of phi_1") {
    Eigen::MatrixXd data(1, 41);
    data.row(0) = 3.0 * basis.eigenfunctions[0].values.transpose();
    const SplitSample split = split_first_component(FunctionalSample(grid, data), basis);
    CHECK(split.z_hat(0) == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(l2_norm_sq(split.w_hat.row(0)) <= 1e-10);
  }

  SUBCASE("curve orthogonal to phi_1") {
    Eigen::MatrixXd data(1, 41);
    data.row(0) = basis.eigenfunctions[1].values.transpose();
    const SplitSample split = split_first_component(FunctionalSample(grid, data), basis);
    CHECK(std::fabs(split.z_hat(0)) <= 1e-6);
    for (Eigen::Index r = 0; r < 41; ++r)
      CHECK(split.w_hat.data()(0, r) == doctest::Approx(data(0, r)).epsilon(1e-6).scale(1.0));
  }

  SUBCASE("reconstruction and orthogonality of the remainder") {
    const SplitSample split = split_first_component(sample, basis);
    const Eigen::VectorXd& phi1 = basis.eigenfunctions[0].values;
    for (Eigen::Index i = 0; i < sample.n(); ++i) {
      for (Eigen::Index r = 0; r < 41; ++r) {
        const double rebuilt = split.z_hat(i) * phi1(r) + split.w_hat.data()(i, r);
        CHECK(rebuilt == doctest::Approx(sample.data()(i, r)).epsilon(1e-10).scale(1.0));
      }
      CHECK(std::fabs(inner_product(split.w_hat.row(i), basis.eigenfunctions[0])) <= 1e-6);
    }
  }
}

TEST_CASE("standardize_split examples and postconditions") {
  const GridPtr grid = Grid::uniform(11);

  SUBCASE("already standardized") {
    Eigen::VectorXd z(2);
    z << 1.0, -1.0;
    Eigen::MatrixXd w = Eigen::MatrixXd::Ones(2, 11);
    const StandardizedSplit out = standardize_split(z, FunctionalSample(grid, w));
    CHECK(out.z_std(0) == 1.0);
    CHECK(out.z_std(1) == -1.0);
  }

  SUBCASE("scaling by two") {
    Eigen::VectorXd z(2);
    z << 2.0, -2.0;
    const StandardizedSplit out =
        standardize_split(z, FunctionalSample(grid, Eigen::MatrixXd::Ones(2, 11)));
    CHECK(out.z_std(0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(out.z_std(1) == doctest::Approx(-1.0).epsilon(1e-14));
  }

  SUBCASE("random input satisfies the moment postconditions") {
    RngStream rng(77);
    const Eigen::Index n = 13;
    Eigen::VectorXd z(n);
    for (Eigen::Index i = 0; i < n; ++i) z(i) = rng.normal();
    const FunctionalSample w(grid, oracle::random_matrix(rng, n, 11));
    const StandardizedSplit out = standardize_split(z, w);
    double zm2 = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) zm2 += out.z_std(i) * out.z_std(i);
    CHECK(zm2 / static_cast<double>(n) == doctest::Approx(1.0).epsilon(1e-12));
    double wm2 = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) wm2 += l2_norm_sq(out.w_std.row(i));
    CHECK(wm2 / static_cast<double>(n) == doctest::Approx(1.0).epsilon(1e-10));
  }

  SUBCASE("zero denominators are degenerate") {
    const Eigen::VectorXd z = Eigen::VectorXd::Zero(3);
    CHECK_THROWS_AS(standardize_split(z, FunctionalSample(grid, Eigen::MatrixXd::Ones(3, 11))),
                    DegenerateError);
    Eigen::VectorXd ok(3);
    ok << 1.0, 2.0, 3.0;
    CHECK_THROWS_AS(standardize_split(ok, FunctionalSample(grid, Eigen::MatrixXd::Zero(3, 11))),
                    DegenerateError);
  }
}
