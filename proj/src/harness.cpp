#include "fcsig/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fcsig/csv_io.hpp"
#include "fcsig/parallel.hpp"

namespace fcsig {

namespace {

constexpr std::uint64_t kDataTag = 0xda7a;
constexpr std::uint64_t kBootTag = 0xb007;

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

}  // namespace

ResidualModel model_from_name(const std::string& name) {
  if (name == "raw") return ResidualModel::Raw;
  if (name == "no-effect") return ResidualModel::NoEffect;
  if (name == "fpc-linear") return ResidualModel::FpcLinear;
  if (name == "anova") return ResidualModel::Anova;
  if (name == "ancova") return ResidualModel::Ancova;
  if (name == "indicator") return ResidualModel::Indicator;
  throw InvalidInput("unknown residual model: " + name);
}

std::string model_name(ResidualModel model) {
  switch (model) {
    case ResidualModel::Raw: return "raw";
    case ResidualModel::NoEffect: return "no-effect";
    case ResidualModel::FpcLinear: return "fpc-linear";
    case ResidualModel::Anova: return "anova";
    case ResidualModel::Ancova: return "ancova";
    case ResidualModel::Indicator: return "indicator";
  }
  return "?";
}

double TestOptions::bandwidth(Eigen::Index n) const {
  if (h > 0.0) return h;
  if (!(c > 0.0)) throw InvalidInput("TestOptions: bandwidth constant must be positive");
  return c * std::pow(static_cast<double>(n), -1.0 / (static_cast<double>(q) + 4.0));
}

WeightSequence TestOptions::weights(Eigen::Index n, Eigen::Index m) const {
  if (phi_mode == WeightSequence::Mode::RawL2) return WeightSequence::raw_l2();
  int kt = k_trunc;
  if (kt <= 0) kt = static_cast<int>(std::min<Eigen::Index>({n, m, 50}));
  return a_weights(beta, epsilon, kt);
}

namespace {

TestResult evaluate_test(const TestInput& input, const GramSet& grams,
                         const TestOptions& options, const ReplicateBuilder& rebuild) {
  TestResult result;
  result.i_n = compute_In(grams, input.u.n(), input.h, input.q);
  result.v_n2 = compute_vn2(grams, input.u.n(), input.h, input.q);
  result.t_n = compute_Tn(result.i_n, result.v_n2);
  result.p_asym = asymptotic_pvalue(result.t_n, options.alpha).p;
  if (options.b > 0) {
    BootstrapOptions boot;
    boot.b = options.b;
    boot.alpha = options.alpha;
    boot.threads = options.threads;
    const BootstrapResult br =
        wild_bootstrap(input, grams, result.t_n, boot,
                       RngStream::derive(options.seed, {kBootTag}).next_u64(), rebuild);
    result.p_boot = br.p_boot;
    result.boot_crit = br.crit;
    result.boot_excluded = br.excluded;
    result.boot_b = static_cast<int>(br.stats.size());
  }
  return result;
}

}  // namespace

TestRecord run_split_test(const ResponseSample& u, const FunctionalSample& x,
                          const TestOptions& options, const ReplicateBuilder& rebuild) {
  const Eigen::Index n = x.n();
  if (u.n() != n) throw InvalidInput("run_split_test: response/covariate size mismatch");
  if (options.q < 1 || options.q >= x.m())
    throw InvalidInput("run_split_test: q must lie in [1, m)");

  const WeightSequence weights = options.weights(n, x.m());
  const int basis_size =
      std::max(options.q, weights.mode == WeightSequence::Mode::WeightedA ? weights.k_trunc : 0);
  const EigenSystem basis = eigendecompose(estimate_covariance(x), basis_size);

  // Z = leading q scores of the raw curves, W = the remainder, both
  // standardized by their empirical second moments.
  const ScoreMatrix scores = project_scores(x, basis, options.q);
  Eigen::MatrixXd rest = x.data();
  for (int k = 0; k < options.q; ++k) {
    const Eigen::VectorXd& phi = basis.eigenfunctions[static_cast<std::size_t>(k)].values;
    for (Eigen::Index i = 0; i < n; ++i) rest.row(i) -= scores(i, k) * phi.transpose();
  }
  FunctionalSample w_tilde(x.grid(), std::move(rest));

  Eigen::MatrixXd z_std = scores;
  for (int k = 0; k < options.q; ++k) {
    double m2 = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) m2 += scores(i, k) * scores(i, k);
    m2 /= static_cast<double>(n);
    if (!(m2 > 0.0)) throw DegenerateError("run_split_test: score column has zero second moment");
    z_std.col(k) /= std::sqrt(m2);
  }
  double w_m2 = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    w_m2 += row_inner_product(*w_tilde.grid(), w_tilde.data(), i, w_tilde.data(), i);
  w_m2 /= static_cast<double>(n);
  if (!(w_m2 > 0.0)) throw DegenerateError("run_split_test: remainder has zero mean norm");
  FunctionalSample w_std(w_tilde.grid(), w_tilde.data() / std::sqrt(w_m2));

  TestInput input{u, std::move(z_std), std::move(w_std), options.bandwidth(n), options.q};
  const MultiplicativeKernel kernel{UnivariateKernel{options.kernel}, options.q};
  const GramSet grams = assemble_grams(input, kernel, weights, &basis);

  TestRecord record;
  record.result = evaluate_test(input, grams, options, rebuild);
  record.h = input.h;
  record.q = options.q;
  record.n = n;
  record.kernel = options.kernel;
  record.phi_mode = options.phi_mode;
  record.seed = options.seed;
  return record;
}

TestRecord run_raw_test(const TestInput& input, const TestOptions& options,
                        const ReplicateBuilder& rebuild) {
  input.validate();
  const WeightSequence weights = options.weights(input.w.n(), input.w.m());
  const MultiplicativeKernel kernel{UnivariateKernel{options.kernel}, input.q};
  EigenSystem basis;
  const EigenSystem* basis_ptr = nullptr;
  if (weights.mode == WeightSequence::Mode::WeightedA) {
    basis = eigendecompose(estimate_covariance(input.w), weights.k_trunc);
    basis_ptr = &basis;
  }
  const GramSet grams = assemble_grams(input, kernel, weights, basis_ptr);

  TestRecord record;
  record.result = evaluate_test(input, grams, options, rebuild);
  record.h = input.h;
  record.q = input.q;
  record.n = input.u.n();
  record.kernel = options.kernel;
  record.phi_mode = options.phi_mode;
  record.seed = options.seed;
  return record;
}

std::string test_record_json(const TestRecord& record, ResidualModel model,
                             const std::string& config_hash) {
  nlohmann::ordered_json j;
  j["i_n"] = record.result.i_n;
  j["v_n2"] = record.result.v_n2;
  j["t_n"] = record.result.t_n;
  j["p_asym"] = record.result.p_asym;
  if (record.result.p_boot) {
    j["p_boot"] = *record.result.p_boot;
    j["boot_crit"] = *record.result.boot_crit;
    j["boot_valid"] = record.result.boot_b;
    j["boot_excluded"] = record.result.boot_excluded;
  } else {
    j["p_boot"] = nullptr;
  }
  j["h"] = record.h;
  j["q"] = record.q;
  j["n"] = static_cast<long long>(record.n);
  j["kernel"] = kernel_name(record.kernel);
  j["phi_mode"] = record.phi_mode == WeightSequence::Mode::RawL2 ? "l2" : "weighted";
  j["model"] = model_name(model);
  j["seed"] = record.seed;
  j["config_hash"] = config_hash;
  return j.dump();
}

void ExperimentConfig::validate() const {
  dgp.validate();
  if (replications < 1) throw InvalidInput("ExperimentConfig: R must be at least 1");
  if (test.b < 0) throw InvalidInput("ExperimentConfig: B must be nonnegative");
  if (!(test.alpha > 0.0 && test.alpha < 1.0))
    throw InvalidInput("ExperimentConfig: alpha must lie in (0,1)");
  if (delta_grid.empty()) throw InvalidInput("ExperimentConfig: empty delta grid");
  if (c_grid.empty()) throw InvalidInput("ExperimentConfig: empty c grid");
  for (double d : delta_grid)
    if (d < 0.0) throw InvalidInput("ExperimentConfig: delta must be nonnegative");
  for (double c : c_grid)
    if (!(c > 0.0)) throw InvalidInput("ExperimentConfig: c must be positive");
  if (model != ResidualModel::NoEffect && model != ResidualModel::FpcLinear)
    throw InvalidInput("ExperimentConfig: power studies support the no-effect and fpc-linear models");
  if (model == ResidualModel::FpcLinear && !dgp_is_scalar(dgp.family))
    throw InvalidInput("ExperimentConfig: fpc-linear residuals need a scalar-response DGP");
}

namespace {

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> values;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) {
    if (token.empty()) continue;
    values.push_back(std::stod(token));
  }
  if (values.empty()) throw InvalidInput("empty grid specification: " + text);
  return values;
}

}  // namespace

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput(path + ": cannot open config file");
  std::map<std::string, std::string> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto strip = [](std::string s) {
      const auto first = s.find_first_not_of(" \t\r");
      if (first == std::string::npos) return std::string();
      const auto last = s.find_last_not_of(" \t\r");
      return s.substr(first, last - first + 1);
    };
    line = strip(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidInput(path + ":" + std::to_string(line_no) + ": expected key=value");
    entries[strip(line.substr(0, eq))] = strip(line.substr(eq + 1));
  }
  return entries;
}

ExperimentConfig config_from_map(const std::map<std::string, std::string>& entries) {
  ExperimentConfig config;
  bool model_set = false;
  for (const auto& [key, value] : entries) {
    if (key == "dgp") config.dgp.family = dgp_from_name(value);
    else if (key == "delta_grid") config.delta_grid = parse_grid(value);
    else if (key == "c_grid") config.c_grid = parse_grid(value);
    else if (key == "n") config.dgp.n = std::stoi(value);
    else if (key == "m") config.dgp.m = std::stoi(value);
    else if (key == "sigma2") config.dgp.sigma2 = std::stod(value);
    else if (key == "freq_k") config.dgp.k = std::stoi(value);
    else if (key == "R") config.replications = std::stoi(value);
    else if (key == "B") config.test.b = std::stoi(value);
    else if (key == "alpha") config.test.alpha = std::stod(value);
    else if (key == "kernel") config.test.kernel = kernel_from_name(value);
    else if (key == "phi") {
      if (value == "l2") config.test.phi_mode = WeightSequence::Mode::RawL2;
      else if (value == "weighted") config.test.phi_mode = WeightSequence::Mode::WeightedA;
      else throw InvalidInput("config: phi must be l2 or weighted");
    } else if (key == "beta") config.test.beta = std::stod(value);
    else if (key == "epsilon") config.test.epsilon = std::stod(value);
    else if (key == "k_trunc") config.test.k_trunc = std::stoi(value);
    else if (key == "q") config.test.q = std::stoi(value);
    else if (key == "h") config.test.h = std::stod(value);
    else if (key == "model") { config.model = model_from_name(value); model_set = true; }
    else if (key == "j_comp") config.j_comp = std::stoi(value);
    else if (key == "seed") config.seed = std::stoull(value);
    else if (key == "threads") config.threads = std::stoi(value);
    else throw InvalidInput("config: unknown key '" + key + "'");
  }
  if (!model_set)
    config.model = dgp_is_scalar(config.dgp.family) ? ResidualModel::FpcLinear
                                                    : ResidualModel::NoEffect;
  return config;
}

std::string canonical_config(const ExperimentConfig& config) {
  std::ostringstream out;
  out << "dgp=" << dgp_name(config.dgp.family) << "\n";
  out << "delta_grid=";
  for (std::size_t i = 0; i < config.delta_grid.size(); ++i)
    out << (i ? "," : "") << format_double(config.delta_grid[i]);
  out << "\nc_grid=";
  for (std::size_t i = 0; i < config.c_grid.size(); ++i)
    out << (i ? "," : "") << format_double(config.c_grid[i]);
  out << "\nn=" << config.dgp.n << "\nm=" << config.dgp.m
      << "\nsigma2=" << format_double(config.dgp.sigma2) << "\nfreq_k=" << config.dgp.k
      << "\nR=" << config.replications << "\nB=" << config.test.b
      << "\nalpha=" << format_double(config.test.alpha)
      << "\nkernel=" << kernel_name(config.test.kernel)
      << "\nphi=" << (config.test.phi_mode == WeightSequence::Mode::RawL2 ? "l2" : "weighted")
      << "\nbeta=" << format_double(config.test.beta)
      << "\nepsilon=" << format_double(config.test.epsilon)
      << "\nk_trunc=" << config.test.k_trunc << "\nq=" << config.test.q
      << "\nh=" << format_double(config.test.h) << "\nmodel=" << model_name(config.model)
      << "\nj_comp=" << config.j_comp << "\nseed=" << config.seed << "\n";
  return out.str();
}

std::string config_hash_hex(const ExperimentConfig& config) {
  char buffer[24];
  std::snprintf(buffer, sizeof(buffer), "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical_config(config))));
  return buffer;
}

PowerStudyOutput run_power_study(const ExperimentConfig& config) {
  config.validate();
  const std::size_t n_delta = config.delta_grid.size();
  const std::size_t n_c = config.c_grid.size();
  const int reps = config.replications;

  struct CellDecision {
    std::vector<unsigned char> asym;
    std::vector<unsigned char> boot;
    std::vector<double> seconds;
  };
  // One slot per replication task; written only by its owner.
  std::vector<CellDecision> slots(n_delta * static_cast<std::size_t>(reps));

  const int total_tasks = static_cast<int>(n_delta) * reps;
  parallel_for(total_tasks, config.threads, [&](int task) {
    const std::size_t d = static_cast<std::size_t>(task) / reps;
    const int r = task % reps;

    DgpSpec dgp = config.dgp;
    dgp.delta = config.delta_grid[d];
    const std::uint64_t data_seed =
        RngStream::derive(config.seed, {kDataTag, static_cast<std::uint64_t>(d),
                                        static_cast<std::uint64_t>(r)})
            .next_u64();
    const SimulatedData data = generate(dgp, data_seed);

    // Residuals plus the matching bootstrap rebuilder: every replicate
    // re-estimates the model on y* = fitted + zeta .* u so T* carries the
    // same estimation effect as the observed statistic.
    ReplicateBuilder rebuild;
    ResponseSample u = [&]() {
      if (config.model == ResidualModel::FpcLinear) {
        const auto refit = std::make_shared<FpcLinearRefitter>(data.x, config.j_comp);
        Eigen::VectorXd u_hat =
            fpc_linear_residuals(data.y.scalars(), data.x, config.j_comp).u_hat;
        rebuild = [refit, u_hat](const Eigen::VectorXd& zeta) {
          return ResponseSample(refit->residuals(zeta.cwiseProduct(u_hat)));
        };
        return ResponseSample(std::move(u_hat));
      }
      ResponseSample centered = center_residuals(data.y);
      rebuild = [centered](const Eigen::VectorXd& zeta) {
        return center_residuals(centered.scaled(zeta));
      };
      return centered;
    }();

    CellDecision& slot = slots[static_cast<std::size_t>(task)];
    slot.asym.resize(n_c);
    slot.boot.resize(n_c);
    slot.seconds.resize(n_c);
    for (std::size_t ci = 0; ci < n_c; ++ci) {
      TestOptions opts = config.test;
      opts.h = 0.0;
      opts.c = config.c_grid[ci];
      opts.threads = 1;  // replication-level parallelism only
      opts.seed = RngStream::derive(config.seed,
                                    {kBootTag, static_cast<std::uint64_t>(d),
                                     static_cast<std::uint64_t>(r)})
                      .next_u64();
      const auto start = std::chrono::steady_clock::now();
      const TestRecord record = run_split_test(u, data.x, opts, rebuild);
      const auto stop = std::chrono::steady_clock::now();
      slot.seconds[ci] = std::chrono::duration<double>(stop - start).count();
      slot.asym[ci] =
          record.result.t_n >= normal_quantile(1.0 - config.test.alpha) ? 1 : 0;
      slot.boot[ci] = config.test.b > 0 && record.result.boot_crit &&
                              record.result.t_n >= *record.result.boot_crit
                          ? 1
                          : 0;
    }
  });

  const std::string hash = config_hash_hex(config);
  std::ostringstream csv;
  std::ostringstream timing;
  csv << "delta,c,h,method,reject_rate,mc_stderr,R,config_hash,seed\n";
  timing << "delta,c,mean_test_seconds\n";
  char rate_buf[32];
  for (std::size_t d = 0; d < n_delta; ++d) {
    for (std::size_t ci = 0; ci < n_c; ++ci) {
      int asym_count = 0;
      int boot_count = 0;
      double seconds = 0.0;
      for (int r = 0; r < reps; ++r) {
        const CellDecision& slot = slots[d * static_cast<std::size_t>(reps) +
                                         static_cast<std::size_t>(r)];
        asym_count += slot.asym[ci];
        boot_count += slot.boot[ci];
        seconds += slot.seconds[ci];
      }
      const double h = config.c_grid[ci] *
                       std::pow(static_cast<double>(config.dgp.n),
                                -1.0 / (static_cast<double>(config.test.q) + 4.0));
      const auto emit = [&](const char* method, int count) {
        const double rate = static_cast<double>(count) / reps;
        const double stderr_mc = std::sqrt(rate * (1.0 - rate) / reps);
        std::snprintf(rate_buf, sizeof(rate_buf), "%.6f,%.6f", rate, stderr_mc);
        csv << format_double(config.delta_grid[d]) << "," << format_double(config.c_grid[ci])
            << "," << format_double(h) << "," << method << "," << rate_buf << "," << reps
            << "," << hash << "," << config.seed << "\n";
      };
      emit("asym", asym_count);
      if (config.test.b > 0) emit("boot", boot_count);
      timing << format_double(config.delta_grid[d]) << "," << format_double(config.c_grid[ci])
             << "," << format_double(seconds / reps) << "\n";
    }
  }
  return PowerStudyOutput{csv.str(), timing.str()};
}

}  // namespace fcsig
