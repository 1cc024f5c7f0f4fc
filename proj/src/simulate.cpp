#include "fcsig/simulate.hpp"

#include <cmath>

namespace fcsig {

namespace {
constexpr double kPi = 3.14159265358979323846;

// Stream tags keep the covariate and noise substreams disjoint.
constexpr std::uint64_t kCovariateTag = 0x636f76;  // "cov"
constexpr std::uint64_t kNoiseTag = 0x6e6f69;      // "noi"
}  // namespace

DgpFamily dgp_from_name(const std::string& name) {
  if (name == "scalar-quadratic") return DgpFamily::ScalarQuadratic;
  if (name == "scalar-far") return DgpFamily::ScalarFar;
  if (name == "func-concurrent") return DgpFamily::FuncConcurrent;
  if (name == "func-quadratic") return DgpFamily::FuncQuadratic;
  if (name == "func-far") return DgpFamily::FuncFar;
  throw InvalidInput("unknown DGP: " + name);
}

std::string dgp_name(DgpFamily family) {
  switch (family) {
    case DgpFamily::ScalarQuadratic: return "scalar-quadratic";
    case DgpFamily::ScalarFar: return "scalar-far";
    case DgpFamily::FuncConcurrent: return "func-concurrent";
    case DgpFamily::FuncQuadratic: return "func-quadratic";
    case DgpFamily::FuncFar: return "func-far";
  }
  return "?";
}

bool dgp_is_scalar(DgpFamily family) {
  return family == DgpFamily::ScalarQuadratic || family == DgpFamily::ScalarFar;
}

void DgpSpec::validate() const {
  if (delta < 0.0) throw InvalidInput("DgpSpec: delta must be nonnegative");
  if (k < 1) throw InvalidInput("DgpSpec: k must be at least 1");
  if (n < 2) throw InvalidInput("DgpSpec: n must be at least 2");
  if (m < 2) throw InvalidInput("DgpSpec: m must be at least 2");
  if (sigma2 < 0.0) throw InvalidInput("DgpSpec: sigma2 must be nonnegative");
}

Curve wiener_path(const GridPtr& grid, RngStream& rng) {
  const Eigen::Index m = grid->size();
  const double sd = std::sqrt(grid->spacing());
  Eigen::VectorXd values(m);
  values(0) = 0.0;
  for (Eigen::Index r = 1; r < m; ++r) values(r) = values(r - 1) + sd * rng.normal();
  return Curve(grid, std::move(values));
}

Curve brownian_bridge(const GridPtr& grid, RngStream& rng) {
  Curve path = wiener_path(grid, rng);
  const double terminal = path.values(path.values.size() - 1);
  const Eigen::Index m = grid->size();
  for (Eigen::Index r = 0; r < m; ++r) path.values(r) -= grid->points()(r) * terminal;
  path.values(0) = 0.0;
  path.values(m - 1) = 0.0;
  return path;
}

Curve slope_curve(const GridPtr& grid) {
  Eigen::VectorXd values(grid->size());
  for (Eigen::Index r = 0; r < grid->size(); ++r) {
    const double t = grid->points()(r);
    const double s = std::sin(2.0 * kPi * t * t * t);
    values(r) = s * s * s;
  }
  return Curve(grid, std::move(values));
}

Curve basis_curve(const GridPtr& grid, int k) {
  if (k < 1) throw InvalidInput("basis_curve: k must be at least 1");
  Eigen::VectorXd values(grid->size());
  const double freq = (static_cast<double>(k) - 0.5) * kPi;
  for (Eigen::Index r = 0; r < grid->size(); ++r)
    values(r) = std::sqrt(2.0) * std::sin(freq * grid->points()(r));
  return Curve(grid, std::move(values));
}

double basis_eigenvalue(int k) {
  if (k < 1) throw InvalidInput("basis_eigenvalue: k must be at least 1");
  const double freq = (static_cast<double>(k) - 0.5) * kPi;
  return 1.0 / (freq * freq);
}

Curve bump_curve(const GridPtr& grid) {
  Eigen::VectorXd values(grid->size());
  for (Eigen::Index r = 0; r < grid->size(); ++r) {
    const double d = grid->points()(r) - 0.3;
    values(r) = std::exp(-4.0 * d * d);
  }
  return Curve(grid, std::move(values));
}

namespace {

FunctionalSample draw_paths(const GridPtr& grid, Eigen::Index n, RngStream& rng, bool bridge) {
  Eigen::MatrixXd data(n, grid->size());
  for (Eigen::Index i = 0; i < n; ++i) {
    const Curve path = bridge ? brownian_bridge(grid, rng) : wiener_path(grid, rng);
    data.row(i) = path.values.transpose();
  }
  return FunctionalSample(grid, std::move(data));
}

}  // namespace

SimulatedData gen_scalar_quadratic(const DgpSpec& spec, RngStream& covariate, RngStream& noise) {
  spec.validate();
  const GridPtr grid = Grid::uniform(spec.m);
  FunctionalSample x = draw_paths(grid, spec.n, covariate, false);
  const Curve b = slope_curve(grid);
  const double sigma = std::sqrt(spec.sigma2);
  Eigen::VectorXd y(spec.n);
  for (Eigen::Index i = 0; i < spec.n; ++i) {
    const double s = row_curve_inner(*grid, x.data(), i, b.values);
    y(i) = s + spec.delta * s * s + sigma * noise.normal();
  }
  return SimulatedData{ResponseSample(std::move(y)), std::move(x)};
}

SimulatedData gen_scalar_far(const DgpSpec& spec, RngStream& covariate, RngStream& noise) {
  spec.validate();
  const GridPtr grid = Grid::uniform(spec.m);
  FunctionalSample x = draw_paths(grid, spec.n, covariate, false);
  const Curve e_k = basis_curve(grid, spec.k);
  const double lambda = basis_eigenvalue(spec.k);
  const double sigma = std::sqrt(spec.sigma2);
  Eigen::VectorXd y(spec.n);
  for (Eigen::Index i = 0; i < spec.n; ++i) {
    const double s = row_curve_inner(*grid, x.data(), i, e_k.values);
    y(i) = spec.delta * (s * s / lambda - 1.0) + sigma * noise.normal();
  }
  return SimulatedData{ResponseSample(std::move(y)), std::move(x)};
}

SimulatedData gen_func_concurrent(const DgpSpec& spec, RngStream& covariate, RngStream& noise) {
  spec.validate();
  const GridPtr grid = Grid::uniform(spec.m);
  FunctionalSample x = draw_paths(grid, spec.n, covariate, true);
  const Curve beta = bump_curve(grid);
  Eigen::MatrixXd y(spec.n, spec.m);
  for (Eigen::Index i = 0; i < spec.n; ++i) {
    const Curve eps = brownian_bridge(grid, noise);
    for (Eigen::Index r = 0; r < spec.m; ++r)
      y(i, r) = spec.delta * beta.values(r) * x.data()(i, r) + eps.values(r);
  }
  return SimulatedData{ResponseSample(FunctionalSample(grid, std::move(y))), std::move(x)};
}

SimulatedData gen_func_quadratic(const DgpSpec& spec, RngStream& covariate, RngStream& noise) {
  spec.validate();
  const GridPtr grid = Grid::uniform(spec.m);
  FunctionalSample x = draw_paths(grid, spec.n, covariate, false);
  Eigen::MatrixXd y(spec.n, spec.m);
  for (Eigen::Index i = 0; i < spec.n; ++i) {
    const Curve eps = brownian_bridge(grid, noise);
    for (Eigen::Index r = 0; r < spec.m; ++r) {
      const double bt = x.data()(i, r);
      y(i, r) = spec.delta * (bt * bt - 1.0) + eps.values(r);
    }
  }
  return SimulatedData{ResponseSample(FunctionalSample(grid, std::move(y))), std::move(x)};
}

SimulatedData gen_func_far(const DgpSpec& spec, RngStream& covariate, RngStream& noise) {
  spec.validate();
  const GridPtr grid = Grid::uniform(spec.m);
  FunctionalSample x = draw_paths(grid, spec.n, covariate, false);
  const Curve e_k = basis_curve(grid, spec.k);
  const double scale = 1.0 / std::sqrt(basis_eigenvalue(spec.k));
  Eigen::MatrixXd y(spec.n, spec.m);
  for (Eigen::Index i = 0; i < spec.n; ++i) {
    const double s = row_curve_inner(*grid, x.data(), i, e_k.values);
    const Curve eps = brownian_bridge(grid, noise);
    for (Eigen::Index r = 0; r < spec.m; ++r)
      y(i, r) = spec.delta * scale * s + eps.values(r);
  }
  return SimulatedData{ResponseSample(FunctionalSample(grid, std::move(y))), std::move(x)};
}

SimulatedData generate(const DgpSpec& spec, std::uint64_t seed) {
  RngStream covariate = RngStream::derive(seed, {kCovariateTag});
  RngStream noise = RngStream::derive(seed, {kNoiseTag});
  switch (spec.family) {
    case DgpFamily::ScalarQuadratic: return gen_scalar_quadratic(spec, covariate, noise);
    case DgpFamily::ScalarFar: return gen_scalar_far(spec, covariate, noise);
    case DgpFamily::FuncConcurrent: return gen_func_concurrent(spec, covariate, noise);
    case DgpFamily::FuncQuadratic: return gen_func_quadratic(spec, covariate, noise);
    case DgpFamily::FuncFar: return gen_func_far(spec, covariate, noise);
  }
  throw InvalidInput("generate: unknown DGP family");
}

}  // namespace fcsig
