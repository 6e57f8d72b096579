#pragma once

#include <cstdint>

#include "qcs/types.hpp"

namespace qcs {

enum class TailModel { none, exponential };

/// Sparsity-domain coefficient vector X together with its support.
struct SpectralVector {
  CVector coefficients;
  IndexSet support;  // ascending, distinct, within [0, N)

  Index size() const noexcept { return coefficients.size(); }
  Index sparsity() const noexcept { return static_cast<Index>(support.size()); }
  double energy() const { return coefficients.squaredNorm(); }
};

/// Parameters of the test signal generator.
///
/// Large coefficients have magnitude scale * (1 - nu), nu ~ U[0, jitter),
/// with scale = sqrt(M) / K. Tail coefficients (rank p = K+1..N) have
/// magnitude scale * exp(-tail_rate * p / K). Every coefficient carries a
/// uniform random phase.
struct SignalSpec {
  Index N = 256;
  Index K = 10;
  Index M = 128;
  double amplitude_jitter_max = 0.4;
  TailModel tail = TailModel::none;
  double tail_rate = 1.0;
  /// Caps the scale at min(sqrt(M)/K, 1) and rejects magnitudes that reach it.
  bool enforce_register_range = false;
  std::uint64_t rng_seed = 0;
};

/// Amplitude scale applied to the large coefficients.
double amplitude_scale(const SignalSpec& spec);

/// Strictly K-sparse signal at uniformly random distinct positions.
SpectralVector generate_sparse(const SignalSpec& spec);

/// Approximately sparse signal: the K large coefficients of generate_sparse
/// (bit-identical for the same seed) plus an exponentially decaying tail on
/// the remaining positions in random order.
SpectralVector generate_nonsparse(const SignalSpec& spec);

struct Truncation {
  SpectralVector kept;     // X_K
  double residual_energy;  // ||X - X_K||^2
};

/// Keeps the K largest-magnitude coefficients (ties go to the lower index).
Truncation sparse_truncation(const SpectralVector& x, Index K);

/// Indices of the K largest |v| entries, ascending. Ties go to the lower index.
IndexSet largest_magnitudes(const CVector& v, Index K);

}  // namespace qcs
