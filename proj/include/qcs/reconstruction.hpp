#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "qcs/sensing.hpp"
#include "qcs/types.hpp"

namespace qcs {

enum class Algorithm { omp, iht, bayesian };

std::string_view to_string(Algorithm algorithm) noexcept;
/// Accepts "omp", "iht", "bayes" and "bayesian".
Algorithm parse_algorithm(std::string_view name);

struct AlgoConfig {
  Index K = 10;
  /// Extra matching-pursuit iterations as a fraction of K, used once K >= overshoot_min_K.
  double overshoot_fraction = 0.05;
  Index overshoot_min_K = 20;
  int iht_iterations = 100;
  double iht_tau = 1.0;
  /// Consecutive iterations with an unchanged support before IHT may stop early.
  int iht_patience = 10;
  double bayes_threshold = 100.0;
  int bayes_max_iterations = 1000;

  void validate() const;
};

struct ReconstructionOutput {
  CVector X_R;
  IndexSet support;
  double residual_norm = 0.0;  // ||y - A X_R||
  std::optional<double> error_energy_vs_truth;
  Algorithm algorithm = Algorithm::omp;
  int iterations_used = 0;
  bool converged = true;
  /// Matching pursuit only: residual norm and max |A_S^H e| after each solve.
  std::vector<double> residual_history;
  std::vector<double> orthogonality_history;
};

/// Least-squares coefficients on the given columns, in the order of `support`.
/// Throws RankDeficient when the columns are dependent or the condition
/// estimate exceeds 1e12.
CVector solve_on_support(const SensingMatrix& A, const CVector& y, const IndexSet& support);

/// Number of matching-pursuit iterations before the final truncation to K.
Index omp_iteration_count(const AlgoConfig& cfg, Index M);

ReconstructionOutput reconstruct_omp(const SensingMatrix& A, const CVector& y, const AlgoConfig& cfg);

ReconstructionOutput reconstruct_iht(const SensingMatrix& A, const CVector& y, const AlgoConfig& cfg);

/// Sparse Bayesian learning with relevance pruning on the complex system.
/// Ignores cfg.K; the support is whatever survives pruning.
ReconstructionOutput reconstruct_bayesian(const SensingMatrix& A, const CVector& y, const AlgoConfig& cfg);

ReconstructionOutput reconstruct(Algorithm algorithm, const SensingMatrix& A, const CVector& y,
                                 const AlgoConfig& cfg);

/// Records ||X_R - X_K||^2 on the output and returns it.
double attach_truth(ReconstructionOutput& out, const CVector& X_K);

}  // namespace qcs
