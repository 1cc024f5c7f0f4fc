// Command line front end: significance test, Monte Carlo power studies, FPC
// extraction, dataset simulation, and the chi-square baseline.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>

#include "fcsig/csv_io.hpp"
#include "fcsig/harness.hpp"
#include "fcsig/kmsz.hpp"

namespace {

using namespace fcsig;

struct TestCli {
  std::string x_path;
  std::string y_path;
  std::string z_path;
  std::string weights_path;
  std::string out_path;
  std::string model = "no-effect";
  std::string kernel = "epanechnikov";
  std::string phi = "l2";
  std::string anova_mode = "group";
  double beta = 2.0, epsilon = 0.5, h = 0.0, c = 1.0, alpha = 0.10;
  int k_trunc = 0, q = 1, b = 199, j_comp = 5, ancova_k = 13;
  bool select_k = false;
  std::uint64_t seed = 0;
  int threads = 1;
};

TestOptions to_options(const TestCli& cli) {
  TestOptions opts;
  opts.kernel = kernel_from_name(cli.kernel);
  if (cli.phi == "l2") opts.phi_mode = WeightSequence::Mode::RawL2;
  else if (cli.phi == "weighted") opts.phi_mode = WeightSequence::Mode::WeightedA;
  else throw InvalidInput("--phi must be l2 or weighted");
  opts.beta = cli.beta;
  opts.epsilon = cli.epsilon;
  opts.k_trunc = cli.k_trunc;
  opts.q = cli.q;
  opts.h = cli.h;
  opts.c = cli.c;
  opts.b = cli.b;
  opts.alpha = cli.alpha;
  opts.seed = cli.seed;
  opts.threads = cli.threads;
  return opts;
}

Eigen::VectorXd load_weights(const std::string& path, Eigen::Index n) {
  const ScalarTable table = read_scalar_csv(path);
  if (table.values.size() != n)
    throw InvalidInput("--weights: expected " + std::to_string(n) + " rows");
  return table.values;
}

GroupedFunctionalSample grouped_from_table(const CurveTable& table, const char* what) {
  if (!table.has_groups())
    throw InvalidInput(std::string(what) + ": this model needs a g column with group labels");
  return GroupedFunctionalSample(table.sample(), table.groups);
}

// Bootstrap rebuilder for leave-one-out residual models: regenerate
// y* = (y - u) + zeta .* u and rerun the residual construction.
ReplicateBuilder loo_rebuilder(const GroupedFunctionalSample& y, const FunctionalSample& u_hat,
                               const std::function<FunctionalSample(const FunctionalSample&)>& redo) {
  const Eigen::MatrixXd fitted = y.sample().data() - u_hat.data();
  const Eigen::MatrixXd residual = u_hat.data();
  const GridPtr grid = y.sample().grid();
  return [fitted, residual, grid, redo](const Eigen::VectorXd& zeta) {
    Eigen::MatrixXd y_star = fitted;
    for (Eigen::Index i = 0; i < y_star.rows(); ++i) y_star.row(i) += zeta(i) * residual.row(i);
    return ResponseSample(redo(FunctionalSample(grid, std::move(y_star))));
  };
}

int run_test_command(const TestCli& cli) {
  const ResidualModel model = model_from_name(cli.model);
  const CurveTable x_table = read_curve_csv(cli.x_path);
  const FunctionalSample x = x_table.sample();
  TestOptions opts = to_options(cli);

  std::optional<ResponseSample> u;
  ReplicateBuilder rebuild;
  int chosen_k = cli.ancova_k;
  switch (model) {
    case ResidualModel::Raw: {
      // Observed responses: replicates are zeta_i U_i directly.
      if (csv_is_scalar(cli.y_path))
        u.emplace(read_scalar_csv(cli.y_path).values);
      else
        u.emplace(read_curve_csv(cli.y_path).sample());
      break;
    }
    case ResidualModel::NoEffect: {
      if (csv_is_scalar(cli.y_path))
        u = center_residuals(ResponseSample(read_scalar_csv(cli.y_path).values));
      else
        u = center_residuals(ResponseSample(read_curve_csv(cli.y_path).sample()));
      const ResponseSample centered = *u;
      rebuild = [centered](const Eigen::VectorXd& zeta) {
        return center_residuals(centered.scaled(zeta));
      };
      break;
    }
    case ResidualModel::FpcLinear: {
      const ScalarTable y = read_scalar_csv(cli.y_path);
      Eigen::VectorXd u_hat = fpc_linear_residuals(y.values, x, cli.j_comp).u_hat;
      const auto refit = std::make_shared<FpcLinearRefitter>(x, cli.j_comp);
      rebuild = [refit, u_hat](const Eigen::VectorXd& zeta) {
        return ResponseSample(refit->residuals(zeta.cwiseProduct(u_hat)));
      };
      u.emplace(std::move(u_hat));
      break;
    }
    case ResidualModel::Anova: {
      const GroupedFunctionalSample y = grouped_from_table(read_curve_csv(cli.y_path), "anova");
      const AnovaMode mode = cli.anova_mode == "overall" ? AnovaMode::OverallLoo
                                                         : AnovaMode::GroupLoo;
      const FunctionalSample u_hat = anova_residuals(y, mode);
      const std::vector<int> labels = y.groups();
      rebuild = loo_rebuilder(y, u_hat, [labels, mode](const FunctionalSample& y_star) {
        return anova_residuals(GroupedFunctionalSample(y_star, labels), mode);
      });
      u.emplace(u_hat);
      break;
    }
    case ResidualModel::Ancova: {
      const GroupedFunctionalSample y = grouped_from_table(read_curve_csv(cli.y_path), "ancova");
      const GroupedFunctionalSample xg = grouped_from_table(x_table, "ancova");
      if (cli.select_k) {
        // Pick the K that minimizes the total squared residual norm.
        double best = -1.0;
        for (int k = 0; k <= static_cast<int>(y.sample().n()); ++k) {
          FunctionalSample res(Grid::uniform(2), Eigen::MatrixXd::Zero(1, 2));
          try {
            res = ancova_residuals(y, xg, k);
          } catch (const RankError&) {
            break;
          }
          double total = 0.0;
          for (Eigen::Index i = 0; i < res.n(); ++i)
            total += row_inner_product(*res.grid(), res.data(), i, res.data(), i);
          if (best < 0.0 || total < best) {
            best = total;
            chosen_k = k;
          }
        }
        std::cerr << "ancova: selected K = " << chosen_k << "\n";
      }
      const FunctionalSample u_hat = ancova_residuals(y, xg, chosen_k);
      const std::vector<int> labels = y.groups();
      const auto xg_shared = std::make_shared<GroupedFunctionalSample>(xg);
      const int k_used = chosen_k;
      rebuild = loo_rebuilder(y, u_hat,
                              [labels, xg_shared, k_used](const FunctionalSample& y_star) {
                                return ancova_residuals(
                                    GroupedFunctionalSample(y_star, labels), *xg_shared, k_used);
                              });
      u.emplace(u_hat);
      break;
    }
    case ResidualModel::Indicator: {
      const ScalarTable y = read_scalar_csv(cli.y_path);
      u.emplace(indicator_residuals(y.values, x.grid()));
      // The only estimation here is the ECDF centering; replicates recenter.
      const ResponseSample u_ind = *u;
      rebuild = [u_ind](const Eigen::VectorXd& zeta) {
        return center_residuals(u_ind.scaled(zeta));
      };
      break;
    }
  }

  if (!cli.weights_path.empty()) {
    const Eigen::VectorXd omega = load_weights(cli.weights_path, u->n());
    u = u->scaled(omega);
    if (rebuild) {
      const ReplicateBuilder inner = rebuild;
      rebuild = [inner, omega](const Eigen::VectorXd& zeta) {
        return inner(zeta).scaled(omega);
      };
    }
  }

  TestRecord record;
  if (model == ResidualModel::Raw) {
    if (cli.z_path.empty()) throw InvalidInput("raw model needs --z with the smoothing scores");
    const MatrixTable z = read_matrix_csv(cli.z_path);
    if (z.data.cols() != cli.q)
      throw InvalidInput("--z: expected q = " + std::to_string(cli.q) + " columns");
    TestInput input{*u, z.data, x, opts.bandwidth(x.n()), cli.q};
    if (cli.h <= 0.0) input.h = opts.bandwidth(x.n());
    record = run_raw_test(input, opts);
  } else {
    record = run_split_test(*u, x, opts, rebuild);
  }

  const std::string json = test_record_json(record, model, "-");
  if (cli.out_path.empty()) {
    std::cout << json << "\n";
  } else {
    std::ofstream out(cli.out_path);
    if (!out) throw InvalidInput(cli.out_path + ": cannot open for writing");
    out << json << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kernel significance test for functional covariates"};
  app.require_subcommand(1);

  // --- test ---------------------------------------------------------------
  TestCli test_cli;
  CLI::App* test = app.add_subcommand("test", "Run the significance test on CSV data");
  test->add_option("--x", test_cli.x_path, "functional covariate CSV")->required();
  test->add_option("--y", test_cli.y_path, "response CSV (scalar or curves)")->required();
  test->add_option("--z", test_cli.z_path, "smoothing scores CSV (raw model only)");
  test->add_option("--weights", test_cli.weights_path, "per-observation omega weights CSV");
  test->add_option("--model", test_cli.model,
                   "raw|no-effect|fpc-linear|anova|ancova|indicator");
  test->add_option("--kernel", test_cli.kernel, "epanechnikov|gaussian|triangle");
  test->add_option("--phi", test_cli.phi, "l2|weighted");
  test->add_option("--beta", test_cli.beta, "weighted-norm decay exponent");
  test->add_option("--epsilon", test_cli.epsilon, "weighted-norm log exponent");
  test->add_option("--k-trunc", test_cli.k_trunc, "weighted-norm truncation (0 = auto)");
  test->add_option("--q", test_cli.q, "smoothing dimension");
  test->add_option("--h", test_cli.h, "explicit bandwidth (overrides --c)");
  test->add_option("--c", test_cli.c, "bandwidth constant, h = c n^{-1/(q+4)}");
  test->add_option("--bootstrap", test_cli.b, "bootstrap replicates (0 = asymptotic only)");
  test->add_option("--alpha", test_cli.alpha, "test level");
  test->add_option("--seed", test_cli.seed, "RNG seed for the bootstrap");
  test->add_option("--threads", test_cli.threads, "bootstrap worker threads");
  test->add_option("--anova-mode", test_cli.anova_mode, "group|overall");
  test->add_option("--k", test_cli.ancova_k, "ANCOVA projection dimension");
  test->add_flag("--select-k", test_cli.select_k,
                 "pick the ANCOVA K minimizing the residual norm");
  test->add_option("--j-comp", test_cli.j_comp, "FPC regression components");
  test->add_option("--out", test_cli.out_path, "write the JSON record here");

  // --- power-study ----------------------------------------------------------
  std::string config_path, study_out, timing_out;
  std::vector<std::string> overrides;
  CLI::App* study = app.add_subcommand("power-study", "Monte Carlo level/power study");
  study->add_option("--config", config_path, "key=value config file");
  study->add_option("--set", overrides, "config overrides, key=value (flags win)");
  study->add_option("--out", study_out, "output CSV path (default stdout)");
  study->add_option("--timing", timing_out, "write the wall-clock sidecar CSV here");
  std::uint64_t study_seed = 0;
  bool seed_given = false;
  study->add_option("--seed", study_seed, "master seed (required)")
      ->each([&](const std::string&) { seed_given = true; });
  int study_threads = 0;
  study->add_option("--threads", study_threads, "replication worker threads");

  // --- fpc ------------------------------------------------------------------
  std::string fpc_x, fpc_values = "eigenvalues.csv", fpc_functions = "eigenfunctions.csv";
  int fpc_k = 5;
  CLI::App* fpc = app.add_subcommand("fpc", "Eigendecompose the empirical covariance");
  fpc->add_option("--x", fpc_x, "functional sample CSV")->required();
  fpc->add_option("--k", fpc_k, "number of components");
  fpc->add_option("--values", fpc_values, "eigenvalue CSV output");
  fpc->add_option("--functions", fpc_functions, "eigenfunction CSV output");

  // --- simulate ---------------------------------------------------------------
  std::string sim_dgp = "scalar-quadratic", sim_x = "x.csv", sim_y = "y.csv";
  DgpSpec sim_spec;
  std::uint64_t sim_seed = 0;
  CLI::App* sim = app.add_subcommand("simulate", "Draw a dataset from a study DGP");
  sim->add_option("--dgp", sim_dgp,
                  "scalar-quadratic|scalar-far|func-concurrent|func-quadratic|func-far");
  sim->add_option("--delta", sim_spec.delta, "drift amplitude");
  sim->add_option("--freq-k", sim_spec.k, "frequency index for the far families");
  sim->add_option("--n", sim_spec.n, "sample size");
  sim->add_option("--m", sim_spec.m, "grid points");
  sim->add_option("--sigma2", sim_spec.sigma2, "noise variance (scalar families)");
  sim->add_option("--seed", sim_seed, "RNG seed")->required();
  sim->add_option("--x-out", sim_x, "covariate CSV output");
  sim->add_option("--y-out", sim_y, "response CSV output");

  // --- baseline kmsz ---------------------------------------------------------
  CLI::App* baseline = app.add_subcommand("baseline", "Comparison baselines");
  baseline->require_subcommand(1);
  std::string kmsz_x, kmsz_y;
  int kmsz_p = 1, kmsz_q = 6;
  CLI::App* kmsz_cmd = baseline->add_subcommand("kmsz", "Chi-square test of no linear effect");
  kmsz_cmd->add_option("--x", kmsz_x, "functional covariate CSV")->required();
  kmsz_cmd->add_option("--y", kmsz_y, "functional response CSV")->required();
  kmsz_cmd->add_option("--p", kmsz_p, "covariate components");
  kmsz_cmd->add_option("--q", kmsz_q, "response components");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*test) return run_test_command(test_cli);

    if (*study) {
      std::map<std::string, std::string> entries;
      if (!config_path.empty()) entries = read_config_file(config_path);
      for (const std::string& kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw InvalidInput("--set needs key=value: " + kv);
        entries[kv.substr(0, eq)] = kv.substr(eq + 1);
      }
      ExperimentConfig config = config_from_map(entries);
      if (seed_given) config.seed = study_seed;
      if (study_threads > 0) config.threads = study_threads;
      if (!seed_given && entries.find("seed") == entries.end())
        throw InvalidInput("power-study: --seed is required");
      const PowerStudyOutput output = run_power_study(config);
      if (study_out.empty()) {
        std::cout << output.csv;
      } else {
        std::ofstream out(study_out);
        if (!out) throw InvalidInput(study_out + ": cannot open for writing");
        out << output.csv;
      }
      if (!timing_out.empty()) {
        std::ofstream out(timing_out);
        if (!out) throw InvalidInput(timing_out + ": cannot open for writing");
        out << output.timing_csv;
      }
      return 0;
    }

    if (*fpc) {
      const CurveTable table = read_curve_csv(fpc_x);
      const EigenSystem basis = eigendecompose(estimate_covariance(table.sample()), fpc_k);
      std::ofstream values(fpc_values);
      if (!values) throw InvalidInput(fpc_values + ": cannot open for writing");
      values << "k,eigenvalue\n";
      for (int k = 0; k < basis.size(); ++k)
        values << (k + 1) << "," << format_double(basis.eigenvalues[k]) << "\n";
      CurveTable funcs;
      funcs.grid = table.grid;
      funcs.data.resize(basis.size(), table.grid->size());
      for (int k = 0; k < basis.size(); ++k) {
        funcs.ids.push_back("phi_" + std::to_string(k + 1));
        funcs.data.row(k) = basis.eigenfunctions[k].values.transpose();
      }
      write_curve_csv(fpc_functions, funcs);
      return 0;
    }

    if (*sim) {
      DgpSpec spec = sim_spec;
      spec.family = dgp_from_name(sim_dgp);
      const SimulatedData data = generate(spec, sim_seed);
      CurveTable x_out;
      x_out.grid = data.x.grid();
      x_out.data = data.x.data();
      for (Eigen::Index i = 0; i < data.x.n(); ++i)
        x_out.ids.push_back(std::to_string(i + 1));
      write_curve_csv(sim_x, x_out);
      if (data.y.is_scalar()) {
        ScalarTable y_out;
        y_out.values = data.y.scalars();
        for (Eigen::Index i = 0; i < data.y.n(); ++i)
          y_out.ids.push_back(std::to_string(i + 1));
        write_scalar_csv(sim_y, y_out);
      } else {
        CurveTable y_out;
        y_out.grid = data.y.curves().grid();
        y_out.data = data.y.curves().data();
        for (Eigen::Index i = 0; i < data.y.n(); ++i)
          y_out.ids.push_back(std::to_string(i + 1));
        write_curve_csv(sim_y, y_out);
      }
      return 0;
    }

    if (*kmsz_cmd) {
      const FunctionalSample x = read_curve_csv(kmsz_x).sample();
      const FunctionalSample y = read_curve_csv(kmsz_y).sample();
      const KmszResult result = kmsz_statistic(x, y, kmsz_p, kmsz_q);
      nlohmann::ordered_json j;
      j["statistic"] = result.statistic;
      j["df"] = result.df;
      j["p_value"] = result.p_value;
      std::cout << j.dump() << "\n";
      return 0;
    }
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  }
  return 0;
}
