#pragma once

#include <cstdint>
#include <string>

#include "fcsig/rng.hpp"
#include "fcsig/ustat.hpp"

namespace fcsig {

enum class DgpFamily {
  ScalarQuadratic,  // Y = <X,b> + delta <X,b>^2 + U,  X Wiener
  ScalarFar,        // Y = delta (lambda_k^{-1} <X,e_k>^2 - 1) + U,  X Wiener
  FuncConcurrent,   // Y(t) = delta beta(t) X(t) + eps(t),  X, eps bridges
  FuncQuadratic,    // Y(t) = delta (B(t)^2 - 1) + eps(t),  B Wiener, eps bridge
  FuncFar           // Y(t) = delta lambda_k^{-1/2} <B,e_k> + eps(t)
};

DgpFamily dgp_from_name(const std::string& name);
std::string dgp_name(DgpFamily family);
bool dgp_is_scalar(DgpFamily family);

struct DgpSpec {
  DgpFamily family = DgpFamily::ScalarQuadratic;
  double delta = 0.0;        // drift amplitude; 0 is the null hypothesis
  int k = 1;                 // frequency index for the Far families
  int n = 40;
  int m = 101;
  double sigma2 = 1.0 / 16;  // noise variance, scalar families (0 = noiseless hook)

  void validate() const;
};

// Sample-path generators on a uniform grid. Wiener paths start at 0 with
// independent N(0, dt) increments; the bridge is W(t) - t W(1), so both
// endpoints are exactly 0.
Curve wiener_path(const GridPtr& grid, RngStream& rng);
Curve brownian_bridge(const GridPtr& grid, RngStream& rng);

// b(t) = sin^3(2 pi t^3), the regression slope of the scalar model.
Curve slope_curve(const GridPtr& grid);
// e_k(t) = sqrt(2) sin((k - 1/2) pi t) and the matching lambda_k.
Curve basis_curve(const GridPtr& grid, int k);
double basis_eigenvalue(int k);
// beta(t) = exp(-4 (t - 0.3)^2), the concurrent-effect bump.
Curve bump_curve(const GridPtr& grid);

struct SimulatedData {
  ResponseSample y;
  FunctionalSample x;
};

// Covariate paths and noise come from the two supplied streams, so the
// covariate sample is unchanged when only the noise stream is reseeded.
SimulatedData gen_scalar_quadratic(const DgpSpec& spec, RngStream& covariate, RngStream& noise);
SimulatedData gen_scalar_far(const DgpSpec& spec, RngStream& covariate, RngStream& noise);
SimulatedData gen_func_concurrent(const DgpSpec& spec, RngStream& covariate, RngStream& noise);
SimulatedData gen_func_quadratic(const DgpSpec& spec, RngStream& covariate, RngStream& noise);
SimulatedData gen_func_far(const DgpSpec& spec, RngStream& covariate, RngStream& noise);

// Dispatch on spec.family with substreams derived from one seed.
SimulatedData generate(const DgpSpec& spec, std::uint64_t seed);

}  // namespace fcsig
