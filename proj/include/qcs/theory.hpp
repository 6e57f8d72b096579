#pragma once

#include <optional>
#include <string_view>

#include "qcs/quantizer.hpp"
#include "qcs/sensing.hpp"
#include "qcs/types.hpp"

namespace qcs {

/// delta^2 / 12 (real) or delta^2 / 6 (complex) with delta = 2^-B.
double sigma_e_sq(int B, bool complex_signal);

enum class DominantTerm { quantization, nonsparsity, folding };
std::string_view to_string(DominantTerm term) noexcept;

struct ScenarioSpec {
  Index N = 256;
  Index M = 128;
  Index K = 10;
  MatrixFamily family = MatrixFamily::partial_dft;
  int B = 6;
  bool complex_signal = true;
  double tail_energy = 0.0;      // ||X - X_K||^2
  double sigma_z_sq = 0.0;       // folding noise variance
  double signal_energy_K = 0.0;  // ||X_K||^2
  ArithmeticMode mode = ArithmeticMode::fixed_point;
  /// Per-coefficient variance of the large coefficients; floating point only.
  double sigma_X_sq = 0.0;
  /// Scale the quantization term for bernoulli matrices at small K.
  bool bernoulli_correction = true;

  void validate() const;
};

struct ErrorComponents {
  double quantization = 0.0;
  double nonsparsity = 0.0;
  double folding = 0.0;

  double total() const noexcept { return quantization + nonsparsity + folding; }
};

struct TheoryPrediction {
  double expected_error_energy = 0.0;
  double snr_th_db = 0.0;
  DominantTerm dominant_term = DominantTerm::quantization;
  ErrorComponents components;
  double sigma_mu_sq = 0.0;
  double sigma_e_sq = 0.0;
  /// Factor applied to K sigma_e^2 (bernoulli small-K correction, otherwise 1).
  double quantization_multiplier = 1.0;
  /// The folding term rests on A A^H = (N/M) I, which only partial DFT matrices satisfy.
  bool folding_assumes_dft = false;
};

TheoryPrediction predict(const ScenarioSpec& spec);

/// 10 log10(signal / error). Throws NumericalError when both are zero.
double snr_db(double signal_energy, double error_energy);

/// 10 log10(K 2^-2B / 6), the error level of a complex K-sparse reconstruction.
double log_error_db(Index K, int B);

/// Same quantity from the rounded constants 3.01 log2 K - 6.02 B - 7.78.
double log_error_db_rounded(Index K, int B);

/// Upper bound on K for unique recovery: (1 + 1/mu) / 2, or with B bits
/// (1 + 1/mu - sqrt(M) delta / mu) / 2.
double uniqueness_bound_value(double mu, Index M, std::optional<int> B);

/// Largest integer strictly below uniqueness_bound_value; 0 if none.
Index uniqueness_bound(double mu, Index M, std::optional<int> B);

/// Above this sparsity the bernoulli correction is exactly 1.
inline constexpr Index kBernoulliCorrectionMaxK = 7;

/// Multiplier on sigma_e^2 for the per-coefficient error with bernoulli
/// matrices. K = 1 gives M / 2. For 2 <= K <= kBernoulliCorrectionMaxK the
/// measurements take 2^K sign patterns, each sharing one quantization error,
/// and the multiplier is E[sum_l n_l^2] / M = 1 - 2^-K + M 2^-K for
/// multinomial pattern counts n_l. Larger K gives 1.
double bernoulli_small_k_correction(Index K, Index M);

/// Gaussian approximations of the normalized initial estimate: on-support
/// entries ~ N(1, (K-1) sigma_mu^2 + sigma_e^2), off-support ~ N(0, K sigma_mu^2 + sigma_e^2).
/// Reported as diagnostics, not as recovery guarantees.
struct DetectionDiagnostics {
  double on_support_mean = 1.0;
  double on_support_variance = 0.0;
  double off_support_mean = 0.0;
  double off_support_variance = 0.0;
};

DetectionDiagnostics detection_diagnostics(Index K, double sigma_mu_sq, double sigma_e_sq);

}  // namespace qcs
