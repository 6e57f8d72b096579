#include "qcs/theory.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace qcs {

double sigma_e_sq(int B, bool complex_signal) {
  QuantizerSpec q;
  q.B = B;
  q.complex_input = complex_signal;
  return q.noise_variance();
}

std::string_view to_string(DominantTerm term) noexcept {
  switch (term) {
    case DominantTerm::quantization: return "quantization";
    case DominantTerm::nonsparsity: return "nonsparsity";
    case DominantTerm::folding: return "folding";
  }
  return "unknown";
}

void ScenarioSpec::validate() const {
  if (K < 1 || K > M || M > N) throw InvalidSpec("scenario needs 1 <= K <= M <= N");
  if (B < 1) throw InvalidSpec("bit count B must be at least 1");
  if (tail_energy < 0.0 || sigma_z_sq < 0.0 || signal_energy_K < 0.0 || sigma_X_sq < 0.0)
    throw InvalidSpec("scenario energies and variances must be non-negative");
}

TheoryPrediction predict(const ScenarioSpec& spec) {
  spec.validate();
  TheoryPrediction p;
  const double k = static_cast<double>(spec.K);
  const double m = static_cast<double>(spec.M);
  p.sigma_e_sq = sigma_e_sq(spec.B, spec.complex_signal);
  p.sigma_mu_sq = table_interference_variance(spec.family, spec.M, spec.N);

  if (spec.mode == ArithmeticMode::fixed_point) {
    if (spec.family == MatrixFamily::bernoulli && spec.bernoulli_correction)
      p.quantization_multiplier = bernoulli_small_k_correction(spec.K, spec.M);
    p.components.quantization = p.quantization_multiplier * k * p.sigma_e_sq;
  } else {
    p.components.quantization = (k * k / m) * spec.sigma_X_sq * p.sigma_e_sq;
  }
  p.components.nonsparsity = k * p.sigma_mu_sq * spec.tail_energy;
  p.components.folding = (k / m) * spec.sigma_z_sq;
  p.folding_assumes_dft = spec.sigma_z_sq > 0.0 && spec.family != MatrixFamily::partial_dft;

  p.expected_error_energy = p.components.total();
  p.snr_th_db = snr_db(spec.signal_energy_K, p.expected_error_energy);

  p.dominant_term = DominantTerm::quantization;
  double largest = p.components.quantization;
  if (p.components.nonsparsity > largest) {
    largest = p.components.nonsparsity;
    p.dominant_term = DominantTerm::nonsparsity;
  }
  if (p.components.folding > largest) p.dominant_term = DominantTerm::folding;
  return p;
}

double snr_db(double signal_energy, double error_energy) {
  if (signal_energy == 0.0 && error_energy == 0.0)
    throw NumericalError("SNR is undefined for zero signal and zero error");
  if (error_energy == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(signal_energy / error_energy);
}

double log_error_db(Index K, int B) {
  if (K < 1 || B < 1) throw InvalidSpec("log error needs K >= 1 and B >= 1");
  return 10.0 * std::log10(static_cast<double>(K) * std::ldexp(1.0, -2 * B) / 6.0);
}

double log_error_db_rounded(Index K, int B) {
  if (K < 1 || B < 1) throw InvalidSpec("log error needs K >= 1 and B >= 1");
  return 3.01 * std::log2(static_cast<double>(K)) - 6.02 * static_cast<double>(B) - 7.78;
}

double uniqueness_bound_value(double mu, Index M, std::optional<int> B) {
  if (!(mu > 0.0 && mu <= 1.0)) throw InvalidSpec("coherence must satisfy 0 < mu <= 1");
  double bound = 1.0 + 1.0 / mu;
  if (B) {
    if (*B < 1) throw InvalidSpec("bit count B must be at least 1");
    if (M < 1) throw InvalidSpec("measurement count must be positive");
    bound -= std::sqrt(static_cast<double>(M)) * std::ldexp(1.0, -*B) / mu;
  }
  return bound / 2.0;
}

Index uniqueness_bound(double mu, Index M, std::optional<int> B) {
  return largest_integer_below(uniqueness_bound_value(mu, M, B));
}

double bernoulli_small_k_correction(Index K, Index M) {
  if (K < 1 || M < 1) throw InvalidSpec("bernoulli correction needs K >= 1 and M >= 1");
  const double m = static_cast<double>(M);
  if (K == 1) return m / 2.0;
  if (K > kBernoulliCorrectionMaxK) return 1.0;
  const double p = std::ldexp(1.0, -static_cast<int>(K));
  return 1.0 - p + m * p;
}

DetectionDiagnostics detection_diagnostics(Index K, double sigma_mu_sq, double sigma_e_sq) {
  if (K < 1 || sigma_mu_sq < 0.0 || sigma_e_sq < 0.0) throw InvalidSpec("invalid detection diagnostic inputs");
  DetectionDiagnostics d;
  const double k = static_cast<double>(K);
  d.on_support_variance = (k - 1.0) * sigma_mu_sq + sigma_e_sq;
  d.off_support_variance = k * sigma_mu_sq + sigma_e_sq;
  return d;
}

}  // namespace qcs
