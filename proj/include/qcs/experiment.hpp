#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qcs/quantizer.hpp"
#include "qcs/reconstruction.hpp"
#include "qcs/sensing.hpp"
#include "qcs/theory.hpp"

namespace qcs {

/// sparse: strictly K-sparse signal. nonsparse: K large coefficients plus an
/// exponential tail. folded / folded_nonsparse: the same signals with noise in
/// the coefficients before measurement.
enum class Scenario { sparse, nonsparse, folded, folded_nonsparse };
enum class MatrixMode { fresh, fixed };
enum class SnrAverage { energy, db };

std::string_view to_string(Scenario s) noexcept;
std::string_view to_string(MatrixMode m) noexcept;
std::string_view to_string(SnrAverage a) noexcept;
Scenario parse_scenario(std::string_view name);
MatrixMode parse_matrix_mode(std::string_view name);
SnrAverage parse_snr_average(std::string_view name);

bool scenario_has_tail(Scenario s) noexcept;
bool scenario_is_folded(Scenario s) noexcept;

struct ExperimentConfig {
  Index N = 256;
  std::vector<Index> M_list{128};
  std::vector<Index> K_list{10};
  std::vector<int> B_list{6};
  MatrixFamily family = MatrixFamily::partial_dft;
  Scenario scenario = Scenario::sparse;
  Algorithm algorithm = Algorithm::omp;
  int trials = 100;
  std::uint64_t seed = 1;
  double jitter = 0.4;
  double tail_rate = 1.0;
  /// Coefficient noise for folded scenarios. fold_bits_match_B quantizes the
  /// coefficients with the measurement bit count of each point.
  FoldingSpec fold;
  bool fold_bits_match_B = false;
  ArithmeticMode mode = ArithmeticMode::fixed_point;
  /// Floating point only: the signal is rescaled per trial so that
  /// ||y||^2 / M equals this value. Zero keeps the natural scale.
  double measurement_power = 1.0;
  MatrixMode matrix_mode = MatrixMode::fresh;
  SnrAverage snr_average = SnrAverage::energy;
  /// Template for the reconstruction settings; K is set per point.
  AlgoConfig algo;
  /// A point is flagged outside the recovery regime when more than this
  /// fraction of its trials miss at least one support position.
  double miss_tolerance = 0.05;
  /// Worker threads; 0 picks the hardware concurrency.
  int threads = 0;
  std::string output_path;
  std::string plot_path;

  void validate() const;
};

struct PointSpec {
  Index M = 128;
  Index K = 10;
  int B = 6;
};

struct TrialResult {
  bool ok = true;
  std::string failure;
  double error_energy = 0.0;     // ||X_R - X_K||^2
  double signal_energy_K = 0.0;  // ||X_K||^2
  double tail_energy = 0.0;
  double theory_error_energy = 0.0;
  Index saturations = 0;
  Index support_misses = 0;
  int iterations = 0;
  ErrorComponents theory_components;
};

/// Seed of one trial. Depends on (family, M, K, scenario, trial) but not on B
/// or the algorithm, so every bit count and algorithm sees the same signals
/// and matrices.
std::uint64_t trial_seed(const ExperimentConfig& cfg, Index M, Index K, int trial);

/// One seeded trial: generate, (fold), measure, quantize, reconstruct, score.
/// Failures are reported in the result, not thrown.
TrialResult run_trial(const ExperimentConfig& cfg, const PointSpec& point, int trial);

/// All trials of one (M, K) pair for every B in `bits`, indexed [b][trial].
/// Each trial's signal and matrix are drawn once and reused across bits.
std::vector<std::vector<TrialResult>> run_point(const ExperimentConfig& cfg, Index M, Index K,
                                                const std::vector<int>& bits);

struct ResultRow {
  MatrixFamily family = MatrixFamily::partial_dft;
  Index M = 0;
  Index K = 0;
  int B = 0;
  Scenario scenario = Scenario::sparse;
  Algorithm algorithm = Algorithm::omp;
  double snr_st_db = 0.0;
  double snr_th_db = 0.0;
  double gap_db = 0.0;  // snr_st - snr_th
  Index saturation_count = 0;
  int trials = 0;
  int failures = 0;
  MatrixMode matrix_mode = MatrixMode::fresh;
  int support_misses = 0;  // trials that missed at least one support position
  DominantTerm dominant_term = DominantTerm::quantization;
  double mean_error_energy = 0.0;
  double mean_theory_error_energy = 0.0;
  double mean_signal_energy = 0.0;
  bool in_regime = true;
  std::vector<std::string> failure_messages;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
};

/// Full sweep over M_list x K_list x B_list, rows in that nesting order.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Aggregates per-trial results into a row.
ResultRow aggregate(const ExperimentConfig& cfg, const PointSpec& point, const std::vector<TrialResult>& trials);

void write_csv(const ExperimentResult& result, std::ostream& out);
/// Plot description: SNR versus B, one statistical and one theoretical series per (M, K).
void write_plot_json(const ExperimentConfig& cfg, const ExperimentResult& result, std::ostream& out);

/// Parses the key = value configuration format (see README).
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

/// Applies one key = value assignment, as used by the parser and CLI overrides.
void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value);

/// Built-in sweeps for the worked examples, "example1" .. "example6".
std::vector<ExperimentConfig> preset(std::string_view name);

}  // namespace qcs
