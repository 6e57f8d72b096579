#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "qcs/signal_model.hpp"
#include "qcs/types.hpp"

namespace qcs {

enum class MatrixFamily { partial_dft, random_partial_dft, etf, gaussian, uniform, bernoulli };

std::string_view to_string(MatrixFamily family) noexcept;

/// Accepts the canonical names plus a few aliases ("dft", "rpdft", "binary").
MatrixFamily parse_family(std::string_view name);

/// True when construction draws from the seed (every family except etf).
bool is_random_family(MatrixFamily family) noexcept;

/// Variance of the off-diagonal entries of A^H A for unit-energy columns.
double table_interference_variance(MatrixFamily family, Index M, Index N);

/// M x N measurement matrix with unit-energy columns. Immutable once built.
class SensingMatrix {
 public:
  SensingMatrix(CMatrix entries, MatrixFamily family, std::vector<double> row_selector,
                std::uint64_t rng_seed);

  const CMatrix& entries() const noexcept { return entries_; }
  MatrixFamily family() const noexcept { return family_; }
  Index rows() const noexcept { return entries_.rows(); }
  Index cols() const noexcept { return entries_.cols(); }
  /// Selected rows n_m (partial_dft) or sampling instants t_m (random_partial_dft).
  const std::vector<double>& row_selector() const noexcept { return row_selector_; }
  std::uint64_t rng_seed() const noexcept { return seed_; }

 private:
  CMatrix entries_;
  MatrixFamily family_;
  std::vector<double> row_selector_;
  std::uint64_t seed_;
};

SensingMatrix build_matrix(MatrixFamily family, Index M, Index N, std::uint64_t seed);

/// Whether an equiangular tight frame construction is available for (M, N).
bool etf_supported(Index M, Index N) noexcept;

/// Human-readable list of the supported ETF shapes.
std::string etf_supported_description();

/// y = A X, unquantized.
CVector measure(const SensingMatrix& A, const SpectralVector& x);
CVector measure(const SensingMatrix& A, const CVector& x);

/// Back-projection X0 = A^H y.
CVector initial_estimate(const SensingMatrix& A, const CVector& y);

struct CoherenceReport {
  double mu = 0.0;
  double sigma_mu_sq_theoretical = 0.0;
  double sigma_mu_sq_empirical = 0.0;
  /// Largest K with K < (1 + 1/mu) / 2; N when mu == 0.
  Index K_max_unique = 0;
};

/// Largest integer strictly below the bound, never negative.
Index largest_integer_below(double bound) noexcept;

CoherenceReport coherence_report(const SensingMatrix& A);

/// Off-diagonal entries of A^H A, column-major over k != l.
std::vector<Complex> gram_off_diagonal(const SensingMatrix& A);

// Matrix files: one header line
//   # qcs-matrix family=<name> M=<rows> N=<cols> seed=<seed>
// followed by M comma-separated rows of 2N values (re, im interleaved).
void write_matrix_csv(const SensingMatrix& A, std::ostream& out);
SensingMatrix read_matrix_csv(std::istream& in);

}  // namespace qcs
