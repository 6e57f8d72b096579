#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "qcs/theory.hpp"

using namespace qcs;

namespace {

ScenarioSpec example1(double signal_energy) {
  ScenarioSpec s;
  s.N = 256;
  s.M = 128;
  s.K = 10;
  s.B = 6;
  s.signal_energy_K = signal_energy;
  return s;
}

// Average of sum_l n_l^2 / M over every assignment of M rows to 2^K equally
// likely sign patterns, by exhaustive enumeration.
double enumerate_pattern_collisions(int M, int K) {
  const int patterns = 1 << K;
  std::vector<int> rows(static_cast<std::size_t>(M), 0);
  double total = 0.0;
  double count = 0.0;
  std::function<void(int)> walk = [&](int r) {
    if (r == M) {
      std::vector<int> n(static_cast<std::size_t>(patterns), 0);
      for (int p : rows) ++n[static_cast<std::size_t>(p)];
      double s = 0.0;
      for (int c : n) s += static_cast<double>(c) * c;
      total += s / M;
      count += 1.0;
      return;
    }
    for (int p = 0; p < patterns; ++p) {
      rows[static_cast<std::size_t>(r)] = p;
      walk(r + 1);
    }
  };
  walk(0);
  return total / count;
}

}  // namespace

TEST_CASE("quantization noise variance") {
  CHECK(sigma_e_sq(6, true) == doctest::Approx(4.0690e-5).epsilon(1e-4));
  CHECK(sigma_e_sq(1, false) == doctest::Approx(1.0 / 48.0));
  for (int B = 2; B < 30; ++B) CHECK(sigma_e_sq(B - 1, true) == doctest::Approx(4.0 * sigma_e_sq(B, true)));
}

TEST_CASE("sparse prediction is K sigma_e^2") {
  const TheoryPrediction p = predict(example1(8.36));
  CHECK(p.expected_error_energy == doctest::Approx(10.0 * sigma_e_sq(6, true)));
  CHECK(p.components.nonsparsity == 0.0);
  CHECK(p.components.folding == 0.0);
  CHECK(p.dominant_term == DominantTerm::quantization);
  CHECK(p.snr_th_db == doctest::Approx(10.0 * std::log10(8.36 / (10.0 * std::ldexp(1.0, -12) / 6.0))).epsilon(1e-12));
  CHECK(p.snr_th_db == doctest::Approx(43.13).epsilon(1e-3));
}

TEST_CASE("prediction for a realized signal energy near the 42.56 dB example") {
  // ||X_K||^2 = 10^(4.256) * K sigma_e^2 reproduces the stated 42.56 dB exactly.
  const double e = std::pow(10.0, 4.256) * 10.0 * sigma_e_sq(6, true);
  CHECK(predict(example1(e)).snr_th_db == doctest::Approx(42.56).epsilon(1e-10));
  CHECK(e == doctest::Approx(7.32).epsilon(0.01));
}

TEST_CASE("components add up and the SNR follows the formula") {
  ScenarioSpec s = example1(9.0);
  s.tail_energy = 0.7;
  s.sigma_z_sq = 1e-6;
  const TheoryPrediction p = predict(s);
  CHECK(p.expected_error_energy == p.components.total());
  CHECK(p.components.quantization + p.components.nonsparsity + p.components.folding == p.expected_error_energy);
  CHECK(std::abs(p.snr_th_db - snr_db(9.0, p.expected_error_energy)) < 1e-12);
  CHECK(p.components.folding == doctest::Approx(10.0 / 128.0 * 1e-6));
}

TEST_CASE("partial DFT nonsparsity term") {
  ScenarioSpec s = example1(9.0);
  s.tail_energy = 0.37;
  const TheoryPrediction p = predict(s);
  CHECK(p.components.nonsparsity == doctest::Approx(10.0 * 128.0 / (128.0 * 255.0) * 0.37).epsilon(1e-14));
  s.family = MatrixFamily::gaussian;
  CHECK(predict(s).components.nonsparsity == doctest::Approx(10.0 / 128.0 * 0.37).epsilon(1e-14));
}

TEST_CASE("prediction is monotone in B and in tail energy") {
  ScenarioSpec s = example1(9.0);
  s.tail_energy = 0.01;
  double prev = predict(s).components.quantization;
  for (int B = 7; B <= 30; ++B) {
    s.B = B;
    const double q = predict(s).components.quantization;
    CHECK(q < prev);
    prev = q;
  }
  s.B = 10;
  double prev_tail = predict(s).components.nonsparsity;
  for (double t : {0.02, 0.1, 1.0, 4.0}) {
    s.tail_energy = t;
    const double n = predict(s).components.nonsparsity;
    CHECK(n > prev_tail);
    prev_tail = n;
  }
}

TEST_CASE("four times the sparsity at one more bit keeps the quantization term") {
  for (Index K : {1, 2, 5, 8}) {
    for (int B = 2; B < 20; ++B) {
      ScenarioSpec a = example1(1.0);
      a.K = K;
      a.B = B;
      ScenarioSpec b = a;
      b.K = 4 * K;
      b.B = B + 1;
      CHECK(predict(a).components.quantization == predict(b).components.quantization);
      CHECK(log_error_db(K, B) == doctest::Approx(log_error_db(4 * K, B + 1)).epsilon(1e-12));
    }
  }
}

TEST_CASE("log error in exact and rounded forms") {
  CHECK(log_error_db(1, 6) == doctest::Approx(10.0 * std::log10(std::ldexp(1.0, -12) / 6.0)));
  CHECK(std::abs(log_error_db(1, 6) + 43.90) < 0.01);
  CHECK(std::abs(log_error_db(10, 6) + 33.90) < 0.01);
  for (Index K : {1, 3, 10, 30}) {
    for (int B : {2, 6, 12, 24}) CHECK(std::abs(log_error_db(K, B) - log_error_db_rounded(K, B)) < 0.02);
  }
  CHECK(std::abs(log_error_db(1, 6) - log_error_db_rounded(1, 6)) < 0.01);
  CHECK(std::abs(log_error_db(10, 6) - log_error_db_rounded(10, 6)) < 0.01);
}

TEST_CASE("uniqueness bound") {
  CHECK(uniqueness_bound(1.0 / 9.0, 128, std::nullopt) == 4);
  CHECK(uniqueness_bound_value(1.0 / 9.0, 128, std::nullopt) == doctest::Approx(5.0));
  const double mu = 0.0627;
  const double quantized = uniqueness_bound_value(mu, 128, 4);
  CHECK(quantized == doctest::Approx(0.5 * (1.0 + 1.0 / mu - std::sqrt(128.0) / 16.0 / mu)));
  CHECK(quantized < uniqueness_bound_value(mu, 128, std::nullopt));
  CHECK(std::abs(uniqueness_bound_value(mu, 128, 40) - uniqueness_bound_value(mu, 128, std::nullopt)) < 1e-9);
  CHECK(uniqueness_bound(std::sqrt(1.0 / 255.0), 128, std::nullopt) == 8);
  CHECK_THROWS_AS(uniqueness_bound_value(0.0, 128, std::nullopt), InvalidSpec);
}

TEST_CASE("bernoulli correction against exhaustive pattern enumeration") {
  CHECK(bernoulli_small_k_correction(1, 128) == 64.0);
  CHECK(bernoulli_small_k_correction(1, 192) == 96.0);
  CHECK(bernoulli_small_k_correction(2, 4) == doctest::Approx(enumerate_pattern_collisions(4, 2)).epsilon(1e-12));
  CHECK(bernoulli_small_k_correction(2, 4) == doctest::Approx(1.75));
  CHECK(bernoulli_small_k_correction(2, 6) == doctest::Approx(enumerate_pattern_collisions(6, 2)).epsilon(1e-12));
  CHECK(bernoulli_small_k_correction(3, 5) == doctest::Approx(enumerate_pattern_collisions(5, 3)).epsilon(1e-12));
  CHECK(bernoulli_small_k_correction(2, 128) == doctest::Approx(32.75));
  for (Index K = 8; K <= 40; ++K) CHECK(bernoulli_small_k_correction(K, 192) == 1.0);
  for (Index K = 2; K < kBernoulliCorrectionMaxK; ++K)
    CHECK(bernoulli_small_k_correction(K + 1, 192) < bernoulli_small_k_correction(K, 192));
}

TEST_CASE("bernoulli correction enters the prediction only for bernoulli matrices") {
  ScenarioSpec s = example1(1.0);
  s.M = 192;
  s.K = 1;
  s.family = MatrixFamily::bernoulli;
  CHECK(predict(s).components.quantization == doctest::Approx(96.0 * sigma_e_sq(6, true)));
  s.bernoulli_correction = false;
  CHECK(predict(s).components.quantization == doctest::Approx(sigma_e_sq(6, true)));
  s.bernoulli_correction = true;
  s.family = MatrixFamily::gaussian;
  CHECK(predict(s).quantization_multiplier == 1.0);
}

TEST_CASE("floating point with unit measurement power matches fixed point") {
  // With ||y||^2 / M = 1 and K coefficients of variance sigma_X^2,
  // K sigma_X^2 = M, so (K^2 / M) sigma_X^2 sigma_e^2 = K sigma_e^2.
  ScenarioSpec fixed = example1(128.0);
  ScenarioSpec floating = fixed;
  floating.mode = ArithmeticMode::floating_point;
  floating.sigma_X_sq = 128.0 / 10.0;
  CHECK(predict(floating).expected_error_energy == doctest::Approx(predict(fixed).expected_error_energy).epsilon(1e-14));
  floating.sigma_X_sq = 12.8 * 0.1;
  CHECK(predict(floating).expected_error_energy ==
        doctest::Approx(predict(fixed).expected_error_energy / 10.0).epsilon(1e-14));
}

TEST_CASE("dominant term and the folding flag") {
  ScenarioSpec s = example1(9.0);
  s.sigma_z_sq = 1e-8;
  s.B = 20;
  TheoryPrediction p = predict(s);
  CHECK(p.dominant_term == DominantTerm::folding);
  CHECK_FALSE(p.folding_assumes_dft);
  s.family = MatrixFamily::gaussian;
  CHECK(predict(s).folding_assumes_dft);
  s.sigma_z_sq = 0.0;
  s.tail_energy = 1e-3;
  CHECK(predict(s).dominant_term == DominantTerm::nonsparsity);
  CHECK(to_string(DominantTerm::nonsparsity) == "nonsparsity");
}

TEST_CASE("snr edge cases and validation") {
  CHECK(std::isinf(snr_db(1.0, 0.0)));
  CHECK(snr_db(10.0, 1.0) == doctest::Approx(10.0));
  CHECK_THROWS_AS(snr_db(0.0, 0.0), NumericalError);
  ScenarioSpec s = example1(1.0);
  s.K = 0;
  CHECK_THROWS_AS(predict(s), InvalidSpec);
  s = example1(1.0);
  s.tail_energy = -1.0;
  CHECK_THROWS_AS(predict(s), InvalidSpec);
  s = example1(1.0);
  s.M = 300;
  CHECK_THROWS_AS(predict(s), InvalidSpec);
}

TEST_CASE("detection diagnostics") {
  const DetectionDiagnostics d = detection_diagnostics(10, 0.004, 1e-5);
  CHECK(d.on_support_mean == 1.0);
  CHECK(d.off_support_mean == 0.0);
  CHECK(d.on_support_variance == doctest::Approx(9 * 0.004 + 1e-5));
  CHECK(d.off_support_variance == doctest::Approx(10 * 0.004 + 1e-5));
}
