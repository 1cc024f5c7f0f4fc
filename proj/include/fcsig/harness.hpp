#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "fcsig/bootstrap.hpp"
#include "fcsig/residuals.hpp"
#include "fcsig/simulate.hpp"

namespace fcsig {

enum class ResidualModel { Raw, NoEffect, FpcLinear, Anova, Ancova, Indicator };

ResidualModel model_from_name(const std::string& name);
std::string model_name(ResidualModel model);

// All knobs of a single significance test.
struct TestOptions {
  KernelType kernel = KernelType::Epanechnikov;
  WeightSequence::Mode phi_mode = WeightSequence::Mode::RawL2;
  double beta = 2.0;
  double epsilon = 0.5;
  int k_trunc = 0;     // 0 = min(n, m, 50)
  int q = 1;
  double h = 0.0;      // explicit bandwidth; when 0, h = c n^{-1/(q+4)}
  double c = 1.0;
  int b = 199;         // bootstrap replicates, 0 = asymptotic p-value only
  double alpha = 0.10;
  std::uint64_t seed = 0;
  int threads = 1;

  double bandwidth(Eigen::Index n) const;
  WeightSequence weights(Eigen::Index n, Eigen::Index m) const;
};

struct TestRecord {
  TestResult result;
  double h = 0.0;
  int q = 1;
  Eigen::Index n = 0;
  KernelType kernel = KernelType::Epanechnikov;
  WeightSequence::Mode phi_mode = WeightSequence::Mode::RawL2;
  std::uint64_t seed = 0;
};

// FPC route: splits the covariate into the leading q scores Z and the
// remainder W (both standardized) and runs the test on the residuals u.
// `rebuild`, when set, regenerates the residual sample per bootstrap
// replicate so T* is built the same way as the observed statistic.
TestRecord run_split_test(const ResponseSample& u, const FunctionalSample& x,
                          const TestOptions& options, const ReplicateBuilder& rebuild = {});

// Raw route: Z and W are supplied directly and used as given.
TestRecord run_raw_test(const TestInput& input, const TestOptions& options,
                        const ReplicateBuilder& rebuild = {});

std::string test_record_json(const TestRecord& record, ResidualModel model,
                             const std::string& config_hash);

// One Monte Carlo experiment: a DGP, a drift grid, a bandwidth-constant grid,
// and the test configuration applied to every replication.
struct ExperimentConfig {
  DgpSpec dgp;
  std::vector<double> delta_grid{0.0};
  std::vector<double> c_grid{0.5, 0.70710678118654752440, 1.0, 1.4142135623730950488, 2.0};
  int replications = 500;
  ResidualModel model = ResidualModel::FpcLinear;
  int j_comp = 5;
  TestOptions test;
  std::uint64_t seed = 0;
  int threads = 1;

  void validate() const;
};

// Flat key=value configuration files; CLI flags override file entries.
ExperimentConfig config_from_map(const std::map<std::string, std::string>& entries);
std::map<std::string, std::string> read_config_file(const std::string& path);
std::string canonical_config(const ExperimentConfig& config);
std::string config_hash_hex(const ExperimentConfig& config);

struct PowerStudyOutput {
  std::string csv;         // deterministic: identical for equal (config, seed)
  std::string timing_csv;  // wall-clock sidecar, excluded from that guarantee
};

// Runs R replications per delta, sharing each dataset across the bandwidth
// grid, and reports rejection rates for the asymptotic and bootstrap tests.
// Replication tasks own derived RNG streams, so the csv member is
// byte-identical across thread counts.
PowerStudyOutput run_power_study(const ExperimentConfig& config);

}  // namespace fcsig
