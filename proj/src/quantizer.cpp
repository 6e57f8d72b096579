#include "qcs/quantizer.hpp"

#include <cmath>
#include <string>

#include "qcs/random.hpp"

namespace qcs {

namespace {

void check_bits(int B) {
  if (B < 1 || B > 52) throw InvalidSpec("bit count B must lie in [1, 52], got " + std::to_string(B));
}

}  // namespace

std::string_view to_string(ArithmeticMode mode) noexcept {
  return mode == ArithmeticMode::fixed_point ? "fixed" : "floating";
}

ArithmeticMode parse_mode(std::string_view name) {
  if (name == "fixed" || name == "fixed_point") return ArithmeticMode::fixed_point;
  if (name == "floating" || name == "floating_point" || name == "float") return ArithmeticMode::floating_point;
  throw InvalidSpec("unknown arithmetic mode '" + std::string(name) + "'");
}

double QuantizerSpec::delta() const {
  check_bits(B);
  return std::ldexp(1.0, -B);
}

double QuantizerSpec::noise_variance() const {
  const double d = delta();
  return d * d / (complex_input ? 6.0 : 12.0);
}

double quantize_real(double v, int B, Index* saturations) {
  check_bits(B);
  const double delta = std::ldexp(1.0, -B);
  const double top = 1.0 - delta;
  double q = std::round(v / delta) * delta;
  if (q > top || q < -1.0) {
    q = q > top ? top : -1.0;
    if (saturations) ++*saturations;
  }
  return q;
}

QuantizedSignal quantize_fixed(const CVector& y, const QuantizerSpec& spec) {
  if (spec.mode != ArithmeticMode::fixed_point) throw InvalidSpec("quantize_fixed needs fixed-point mode");
  QuantizedSignal out;
  out.values.resize(y.size());
  for (Index m = 0; m < y.size(); ++m)
    out.values[m] = Complex(quantize_real(y[m].real(), spec.B, &out.saturations),
                            quantize_real(y[m].imag(), spec.B, &out.saturations));
  out.error = y - out.values;
  return out;
}

RVector quantize_fixed(const RVector& y, const QuantizerSpec& spec, Index* saturations) {
  if (spec.mode != ArithmeticMode::fixed_point) throw InvalidSpec("quantize_fixed needs fixed-point mode");
  RVector out(y.size());
  for (Index m = 0; m < y.size(); ++m) out[m] = quantize_real(y[m], spec.B, saturations);
  return out;
}

CVector quantize_floating(const CVector& y, const QuantizerSpec& spec, std::uint64_t seed) {
  if (spec.mode != ArithmeticMode::floating_point)
    throw InvalidSpec("quantize_floating needs floating-point mode");
  const double half = spec.delta() / 2.0;
  Rng rng(seed);
  std::uniform_real_distribution<double> u(-half, half);
  CVector out(y.size());
  for (Index m = 0; m < y.size(); ++m) {
    const double er = u(rng);
    const double ei = u(rng);
    out[m] = y[m] * Complex(1.0 + er, ei);
  }
  return out;
}

RVector quantize_floating(const RVector& y, const QuantizerSpec& spec, std::uint64_t seed) {
  if (spec.mode != ArithmeticMode::floating_point)
    throw InvalidSpec("quantize_floating needs floating-point mode");
  const double half = spec.delta() / 2.0;
  Rng rng(seed);
  std::uniform_real_distribution<double> u(-half, half);
  RVector out(y.size());
  for (Index m = 0; m < y.size(); ++m) out[m] = y[m] * (1.0 + u(rng));
  return out;
}

SpectralVector fold_coefficients(const SpectralVector& x, const FoldingSpec& fold, std::uint64_t seed) {
  if (!fold.active()) throw InvalidSpec("folding needs coefficient quantization or additive noise");
  if (fold.quantize_coefficients) check_bits(fold.B_z);
  if (fold.additive_noise_sigma < 0.0) throw InvalidSpec("folding noise sigma must be non-negative");

  SpectralVector out = x;
  if (fold.quantize_coefficients) {
    const double step = std::ldexp(1.0, -fold.B_z);
    auto q = [step](double v) { return std::round(v / step) * step; };
    for (Index k = 0; k < out.size(); ++k) {
      const Complex c = out.coefficients[k];
      if (c != Complex(0.0, 0.0)) out.coefficients[k] = Complex(q(c.real()), q(c.imag()));
    }
  }
  if (fold.additive_noise_sigma > 0.0) {
    Rng rng(seed);
    std::normal_distribution<double> g(0.0, fold.additive_noise_sigma / std::sqrt(2.0));
    for (Index k = 0; k < out.size(); ++k) {
      const double re = g(rng);
      const double im = g(rng);
      out.coefficients[k] += Complex(re, im);
    }
  }
  return out;
}

}  // namespace qcs
