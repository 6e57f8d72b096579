#pragma once

#include <cstdint>

#include "qcs/signal_model.hpp"
#include "qcs/types.hpp"

namespace qcs {

enum class ArithmeticMode { fixed_point, floating_point };

std::string_view to_string(ArithmeticMode mode) noexcept;
ArithmeticMode parse_mode(std::string_view name);

/// Register model: B magnitude bits plus sign, step delta = 2^-B.
struct QuantizerSpec {
  int B = 6;
  ArithmeticMode mode = ArithmeticMode::fixed_point;
  bool complex_input = true;

  double delta() const;
  /// delta^2 / 12 for real samples, delta^2 / 6 for complex ones.
  double noise_variance() const;
};

struct QuantizedSignal {
  CVector values;  // y_B
  CVector error;   // e = y - y_B
  Index saturations = 0;  // real components clamped to the register range
};

/// Mid-tread rounding of each real component to a multiple of delta,
/// clamped to [-1, 1 - delta].
double quantize_real(double v, int B, Index* saturations = nullptr);

QuantizedSignal quantize_fixed(const CVector& y, const QuantizerSpec& spec);
RVector quantize_fixed(const RVector& y, const QuantizerSpec& spec, Index* saturations = nullptr);

/// Multiplicative error model y (1 + e): e uniform on (-delta/2, delta/2),
/// drawn independently for the real and imaginary part of e. The noise
/// power per sample is |y|^2 times the complex-mode noise variance.
CVector quantize_floating(const CVector& y, const QuantizerSpec& spec, std::uint64_t seed);
RVector quantize_floating(const RVector& y, const QuantizerSpec& spec, std::uint64_t seed);

/// Noise present in the coefficients before measurement.
struct FoldingSpec {
  bool quantize_coefficients = false;
  int B_z = 16;
  /// Standard deviation of the complex Gaussian noise; sigma^2 / 2 per component.
  double additive_noise_sigma = 0.0;

  bool active() const noexcept { return quantize_coefficients || additive_noise_sigma > 0.0; }
  /// Total complex variance sigma_z^2 of the additive noise.
  double noise_variance() const noexcept { return additive_noise_sigma * additive_noise_sigma; }
};

/// X + z. Quantization touches only the nonzero coefficients and never
/// saturates; Gaussian noise touches every coefficient. The support is kept.
SpectralVector fold_coefficients(const SpectralVector& x, const FoldingSpec& fold, std::uint64_t seed);

}  // namespace qcs
