// Command-line front end: experiment sweeps, closed-form predictions,
// matrix inspection and the built-in example reproductions.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qcs/experiment.hpp"
#include "qcs/sensing.hpp"
#include "qcs/theory.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

struct ExperimentArgs {
  std::string config;
  std::string out;
  std::string plot;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::string bits;
  std::string mode;
  std::string fold_bits;
  std::optional<double> fold_sigma;
  std::string algo;
  std::string k;
  std::optional<double> tau;
  std::optional<int> iters;
  std::optional<double> threshold;
  std::string family;
  std::optional<int> threads;
};

struct TheoryArgs {
  qcs::Index N = 256;
  qcs::Index M = 128;
  qcs::Index K = 10;
  int B = 6;
  std::string family = "partial_dft";
  bool real = false;
  std::optional<double> energy;
  double jitter = 0.4;
  double tail_energy = 0.0;
  double fold_sigma = 0.0;
  std::string mode = "fixed";
  std::optional<double> sigma_x_sq;
  bool csv = false;
};

struct MatrixArgs {
  std::string family = "partial_dft";
  qcs::Index M = 128;
  qcs::Index N = 256;
  std::uint64_t seed = 1;
  std::string export_path;
  std::string in_path;
};

struct ReproduceArgs {
  std::string name;
  std::string out_dir;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
};

std::optional<std::uint64_t> env_seed() {
  const char* v = std::getenv("QCS_SEED");
  if (!v || !*v) return std::nullopt;
  try {
    std::size_t used = 0;
    const unsigned long long s = std::stoull(v, &used);
    if (used != std::string(v).size()) throw std::invalid_argument("trailing characters");
    return s;
  } catch (const std::exception&) {
    throw qcs::InvalidSpec(std::string("QCS_SEED is not an unsigned integer: '") + v + "'");
  }
}

void write_outputs(const qcs::ExperimentConfig& cfg, const qcs::ExperimentResult& result) {
  if (cfg.output_path.empty()) {
    qcs::write_csv(result, std::cout);
  } else {
    std::ofstream out(cfg.output_path);
    if (!out) throw std::ios_base::failure("cannot open '" + cfg.output_path + "' for writing");
    qcs::write_csv(result, out);
  }
  if (!cfg.plot_path.empty()) {
    std::ofstream out(cfg.plot_path);
    if (!out) throw std::ios_base::failure("cannot open '" + cfg.plot_path + "' for writing");
    qcs::write_plot_json(cfg, result, out);
  }
  for (const auto& r : result.rows) {
    if (r.in_regime) continue;
    std::cerr << "excluded: M=" << r.M << " K=" << r.K << " B=" << r.B << " (" << r.support_misses
              << " support misses, " << r.failures << " failures in " << r.trials << " trials)\n";
    if (!r.failure_messages.empty()) std::cerr << "  first failure: " << r.failure_messages.front() << '\n';
  }
}

int run_experiment_cmd(const ExperimentArgs& a) {
  qcs::ExperimentConfig cfg = qcs::load_config(a.config);
  if (auto s = env_seed()) cfg.seed = *s;
  if (a.seed) cfg.seed = *a.seed;
  if (a.trials) cfg.trials = *a.trials;
  if (!a.bits.empty()) qcs::apply_setting(cfg, "B", a.bits);
  if (!a.k.empty()) qcs::apply_setting(cfg, "K", a.k);
  if (!a.mode.empty()) qcs::apply_setting(cfg, "mode", a.mode);
  if (!a.fold_bits.empty()) qcs::apply_setting(cfg, "fold_bits", a.fold_bits);
  if (a.fold_sigma) cfg.fold.additive_noise_sigma = *a.fold_sigma;
  if (!a.algo.empty()) qcs::apply_setting(cfg, "algorithm", a.algo);
  if (!a.family.empty()) qcs::apply_setting(cfg, "family", a.family);
  if (a.tau) cfg.algo.iht_tau = *a.tau;
  if (a.iters) cfg.algo.iht_iterations = *a.iters;
  if (a.threshold) cfg.algo.bayes_threshold = *a.threshold;
  if (a.threads) cfg.threads = *a.threads;
  if (!a.out.empty()) cfg.output_path = a.out;
  if (!a.plot.empty()) cfg.plot_path = a.plot;

  const qcs::ExperimentResult result = qcs::run_experiment(cfg);
  write_outputs(cfg, result);
  return 0;
}

int run_theory_cmd(const TheoryArgs& a) {
  qcs::ScenarioSpec s;
  s.N = a.N;
  s.M = a.M;
  s.K = a.K;
  s.B = a.B;
  s.family = qcs::parse_family(a.family);
  s.complex_signal = !a.real;
  s.tail_energy = a.tail_energy;
  s.sigma_z_sq = a.fold_sigma * a.fold_sigma;
  s.mode = qcs::parse_mode(a.mode);
  if (a.energy) {
    s.signal_energy_K = *a.energy;
  } else {
    // Expected ||X_K||^2 of the generator: K (M / K^2) E{(1 - nu)^2}, nu ~ U[0, jitter).
    if (!(a.jitter >= 0.0 && a.jitter < 1.0)) throw qcs::InvalidSpec("jitter must lie in [0, 1)");
    const double j = a.jitter;
    const double moment = 1.0 - j + j * j / 3.0;
    s.signal_energy_K = static_cast<double>(a.M) / static_cast<double>(a.K) * moment;
  }
  s.sigma_X_sq = a.sigma_x_sq ? *a.sigma_x_sq : s.signal_energy_K / static_cast<double>(a.K);

  const qcs::TheoryPrediction p = qcs::predict(s);
  if (a.csv) {
    std::cout << "N,M,K,B,family,mode,signal_energy_K,quantization,nonsparsity,folding,expected_error_energy,"
                 "snr_th_db,dominant_term\n";
    std::cout << std::setprecision(10) << s.N << ',' << s.M << ',' << s.K << ',' << s.B << ','
              << qcs::to_string(s.family) << ',' << qcs::to_string(s.mode) << ',' << s.signal_energy_K << ','
              << p.components.quantization << ',' << p.components.nonsparsity << ',' << p.components.folding
              << ',' << p.expected_error_energy << ',' << p.snr_th_db << ',' << qcs::to_string(p.dominant_term)
              << '\n';
    return 0;
  }
  std::cout << std::setprecision(6);
  std::cout << "scenario: N=" << s.N << " M=" << s.M << " K=" << s.K << " B=" << s.B
            << " family=" << qcs::to_string(s.family) << " mode=" << qcs::to_string(s.mode)
            << (s.complex_signal ? " complex" : " real") << '\n';
  std::cout << "sigma_e^2: " << p.sigma_e_sq << '\n';
  std::cout << "sigma_mu^2: " << p.sigma_mu_sq << '\n';
  if (p.quantization_multiplier != 1.0) std::cout << "quantization multiplier: " << p.quantization_multiplier << '\n';
  std::cout << "signal energy ||X_K||^2: " << s.signal_energy_K << '\n';
  std::cout << "components:\n";
  std::cout << "  quantization: " << p.components.quantization << '\n';
  std::cout << "  nonsparsity: " << p.components.nonsparsity << '\n';
  std::cout << "  folding: " << p.components.folding << '\n';
  std::cout << "expected error energy: " << p.expected_error_energy << '\n';
  std::cout << "dominant term: " << qcs::to_string(p.dominant_term) << '\n';
  if (p.folding_assumes_dft) std::cout << "note: the folding term assumes A A^H = (N/M) I (partial DFT)\n";
  std::cout << std::fixed << std::setprecision(2) << "SNR_th: " << p.snr_th_db << " dB\n";
  return 0;
}

int run_matrix_cmd(const MatrixArgs& a) {
  std::optional<qcs::SensingMatrix> A;
  if (!a.in_path.empty()) {
    std::ifstream in(a.in_path);
    if (!in) throw std::ios_base::failure("cannot open '" + a.in_path + "'");
    A.emplace(qcs::read_matrix_csv(in));
  } else {
    A.emplace(qcs::build_matrix(qcs::parse_family(a.family), a.M, a.N, a.seed));
  }
  const qcs::CoherenceReport r = qcs::coherence_report(*A);
  double worst_column = 0.0;
  for (qcs::Index k = 0; k < A->cols(); ++k)
    worst_column = std::max(worst_column, std::abs(A->entries().col(k).squaredNorm() - 1.0));
  const double m = static_cast<double>(A->rows());
  const double n = static_cast<double>(A->cols());
  const double welch = A->cols() > A->rows() ? std::sqrt((n - m) / (m * (n - 1.0))) : 0.0;

  std::cout << std::setprecision(6);
  std::cout << "family: " << qcs::to_string(A->family()) << '\n';
  std::cout << "M: " << A->rows() << "\nN: " << A->cols() << '\n';
  std::cout << "mu: " << r.mu << '\n';
  std::cout << "welch bound: " << welch << '\n';
  std::cout << "sigma_mu^2 (table): " << r.sigma_mu_sq_theoretical << '\n';
  std::cout << "sigma_mu^2 (empirical): " << r.sigma_mu_sq_empirical << '\n';
  std::cout << "K_max_unique: " << r.K_max_unique << '\n';
  std::cout << "max column energy deviation: " << worst_column << '\n';

  if (!a.export_path.empty()) {
    std::ofstream out(a.export_path);
    if (!out) throw std::ios_base::failure("cannot open '" + a.export_path + "' for writing");
    qcs::write_matrix_csv(*A, out);
  }
  return 0;
}

int run_reproduce_cmd(const ReproduceArgs& a) {
  std::vector<qcs::ExperimentConfig> configs = qcs::preset(a.name);
  const auto seed = a.seed ? a.seed : env_seed();
  if (!a.out_dir.empty()) std::filesystem::create_directories(a.out_dir);

  for (std::size_t i = 0; i < configs.size(); ++i) {
    qcs::ExperimentConfig& cfg = configs[i];
    if (seed) cfg.seed = *seed;
    if (a.trials) cfg.trials = *a.trials;
    if (a.threads) cfg.threads = *a.threads;
    std::string stem = a.name + "_" + std::string(qcs::to_string(cfg.family)) + "_" +
                       std::string(qcs::to_string(cfg.scenario)) + "_" + std::string(qcs::to_string(cfg.algorithm));
    if (!a.out_dir.empty()) {
      cfg.output_path = (std::filesystem::path(a.out_dir) / (stem + ".csv")).string();
      cfg.plot_path = (std::filesystem::path(a.out_dir) / (stem + ".json")).string();
    }
    const qcs::ExperimentResult result = qcs::run_experiment(cfg);
    if (a.name == "example1") {
      const auto& r = result.rows.front();
      std::cout << std::fixed << std::setprecision(2) << qcs::to_string(cfg.scenario) << ": SNR_st = " << r.snr_st_db
                << " dB, SNR_th = " << r.snr_th_db << " dB (" << r.trials << " trials)\n";
      if (!a.out_dir.empty()) write_outputs(cfg, result);
      continue;
    }
    if (a.out_dir.empty()) std::cout << "# " << stem << '\n';
    write_outputs(cfg, result);
    if (!a.out_dir.empty()) std::cout << "wrote " << cfg.output_path << " and " << cfg.plot_path << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantized compressive sensing: reconstruction experiments and error predictions"};
  app.require_subcommand(1);

  ExperimentArgs ea;
  auto* experiment = app.add_subcommand("experiment", "Monte Carlo sweeps");
  experiment->require_subcommand(1);
  auto* run = experiment->add_subcommand("run", "Run a sweep described by a config file");
  run->add_option("--config", ea.config, "Config file (key = value lines)")->required();
  run->add_option("--out", ea.out, "CSV output path (default: stdout)");
  run->add_option("--plot", ea.plot, "Plot description output path (JSON)");
  run->add_option("--seed", ea.seed, "Base seed (overrides QCS_SEED and the config)");
  run->add_option("--trials", ea.trials, "Trials per point");
  run->add_option("--bits", ea.bits, "B list, e.g. 4,6,8 or 4:24:2");
  run->add_option("--k", ea.k, "K list");
  run->add_option("--mode", ea.mode, "fixed | floating");
  run->add_option("--fold-bits", ea.fold_bits, "Coefficient bits: integer, match or none");
  run->add_option("--fold-sigma", ea.fold_sigma, "Standard deviation of coefficient noise");
  run->add_option("--algo", ea.algo, "omp | iht | bayes");
  run->add_option("--family", ea.family, "Matrix family");
  run->add_option("--tau", ea.tau, "IHT step");
  run->add_option("--iters", ea.iters, "IHT iterations");
  run->add_option("--threshold", ea.threshold, "Bayesian pruning threshold");
  run->add_option("--threads", ea.threads, "Worker threads (0 = all cores)");

  TheoryArgs ta;
  auto* theory = app.add_subcommand("theory", "Closed-form predictions");
  theory->require_subcommand(1);
  auto* predict = theory->add_subcommand("predict", "Expected error energy and SNR_th");
  predict->add_option("--n", ta.N, "Signal length")->capture_default_str();
  predict->add_option("--m", ta.M, "Measurements")->capture_default_str();
  predict->add_option("--k", ta.K, "Sparsity")->capture_default_str();
  predict->add_option("--b,--bits", ta.B, "Register bits")->capture_default_str();
  predict->add_option("--family", ta.family, "Matrix family")->capture_default_str();
  auto* complex_flag = predict->add_flag("--complex", "Complex signal (default)");
  predict->add_flag("--real", ta.real, "Real signal")->excludes(complex_flag);
  predict->add_option("--energy", ta.energy, "||X_K||^2 (default: generator expectation)");
  predict->add_option("--jitter", ta.jitter, "Amplitude jitter bound for the default energy")->capture_default_str();
  predict->add_option("--tail-energy", ta.tail_energy, "||X - X_K||^2")->capture_default_str();
  predict->add_option("--fold-sigma", ta.fold_sigma, "Coefficient noise standard deviation")->capture_default_str();
  predict->add_option("--mode", ta.mode, "fixed | floating")->capture_default_str();
  predict->add_option("--sigma-x-sq", ta.sigma_x_sq, "Coefficient variance for floating point");
  predict->add_flag("--csv", ta.csv, "Print one CSV row instead of text");

  MatrixArgs ma;
  auto* matrix = app.add_subcommand("matrix", "Measurement matrices");
  matrix->require_subcommand(1);
  auto* info = matrix->add_subcommand("info", "Coherence and interference statistics");
  info->add_option("--family", ma.family, "Matrix family")->capture_default_str();
  info->add_option("--m", ma.M, "Rows")->capture_default_str();
  info->add_option("--n", ma.N, "Columns")->capture_default_str();
  info->add_option("--seed", ma.seed, "Seed for random families")->capture_default_str();
  info->add_option("--export", ma.export_path, "Write the matrix to this file");
  info->add_option("--in", ma.in_path, "Read the matrix from this file instead of building it");

  ReproduceArgs ra;
  auto* reproduce = app.add_subcommand("reproduce", "Run a built-in example sweep");
  reproduce->add_option("example", ra.name, "example1 .. example6")->required();
  reproduce->add_option("--out", ra.out_dir, "Directory for CSV and plot files");
  reproduce->add_option("--trials", ra.trials, "Trials per point");
  reproduce->add_option("--seed", ra.seed, "Base seed");
  reproduce->add_option("--threads", ra.threads, "Worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*run) return run_experiment_cmd(ea);
    if (*predict) return run_theory_cmd(ta);
    if (*info) return run_matrix_cmd(ma);
    if (*reproduce) return run_reproduce_cmd(ra);
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const qcs::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitConfig;
}
