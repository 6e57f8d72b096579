#include "qcs/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace qcs {

namespace {

constexpr double kConditionLimit = 1e12;
/// Bayesian passes that re-estimate d and the noise level before any pruning.
constexpr int kBayesWarmupPasses = 2;
/// Pruning starts once a pass shrinks the noise estimate by less than this factor.
constexpr double kNoiseSettleRatio = 0.5;

CMatrix gather_columns(const CMatrix& a, const IndexSet& cols) {
  CMatrix out(a.rows(), static_cast<Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Index>(j)) = a.col(cols[j]);
  return out;
}

void check_measurements(const SensingMatrix& A, const CVector& y) {
  if (y.size() != A.rows())
    throw DimensionMismatch("measurement vector has length " + std::to_string(y.size()) + ", matrix has " +
                            std::to_string(A.rows()) + " rows");
}

// Scatters support coefficients into a length-N vector; returns the support sorted.
IndexSet scatter(const IndexSet& support, const CVector& values, Index N, CVector& x) {
  x = CVector::Zero(N);
  for (std::size_t j = 0; j < support.size(); ++j) x[support[j]] = values[static_cast<Index>(j)];
  IndexSet sorted = support;
  std::sort(sorted.begin(), sorted.end());
  return sorted;
}

}  // namespace

std::string_view to_string(Algorithm algorithm) noexcept {
  switch (algorithm) {
    case Algorithm::omp: return "omp";
    case Algorithm::iht: return "iht";
    case Algorithm::bayesian: return "bayesian";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "omp") return Algorithm::omp;
  if (name == "iht") return Algorithm::iht;
  if (name == "bayes" || name == "bayesian") return Algorithm::bayesian;
  throw InvalidSpec("unknown algorithm '" + std::string(name) + "'");
}

void AlgoConfig::validate() const {
  if (K < 1) throw InvalidSpec("assumed sparsity K must be at least 1");
  if (!(overshoot_fraction >= 0.0)) throw InvalidSpec("overshoot fraction must be non-negative");
  if (iht_iterations < 1) throw InvalidSpec("IHT needs at least one iteration");
  if (!(iht_tau > 0.0)) throw InvalidSpec("IHT step tau must be positive");
  if (iht_patience < 1) throw InvalidSpec("IHT patience must be at least 1");
  if (!(bayes_threshold > 0.0)) throw InvalidSpec("pruning threshold must be positive");
  if (bayes_max_iterations < 1) throw InvalidSpec("Bayesian reconstruction needs at least one iteration");
}

CVector solve_on_support(const SensingMatrix& A, const CVector& y, const IndexSet& support) {
  check_measurements(A, y);
  const auto k = static_cast<Index>(support.size());
  if (k == 0) return CVector();
  if (k > A.rows())
    throw RankDeficient("support of size " + std::to_string(k) + " exceeds the " + std::to_string(A.rows()) +
                            " measurements",
                        std::numeric_limits<double>::infinity());
  for (Index s : support)
    if (s < 0 || s >= A.cols()) throw DimensionMismatch("support index " + std::to_string(s) + " out of range");

  const CMatrix sub = gather_columns(A.entries(), support);
  Eigen::ColPivHouseholderQR<CMatrix> qr(sub);
  const auto r = qr.matrixR().diagonal().cwiseAbs();
  const double largest = r[0];
  const double smallest = r[k - 1];
  const double condition = smallest > 0.0 ? largest / smallest : std::numeric_limits<double>::infinity();
  if (!(condition <= kConditionLimit))
    throw RankDeficient("support columns are numerically dependent (condition estimate " +
                            std::to_string(condition) + ")",
                        condition);
  return qr.solve(y);
}

Index omp_iteration_count(const AlgoConfig& cfg, Index M) {
  Index iters = cfg.K;
  if (cfg.K >= cfg.overshoot_min_K)
    iters += static_cast<Index>(std::ceil(cfg.overshoot_fraction * static_cast<double>(cfg.K) - 1e-12));
  return std::min(iters, M);
}

ReconstructionOutput reconstruct_omp(const SensingMatrix& A, const CVector& y, const AlgoConfig& cfg) {
  cfg.validate();
  check_measurements(A, y);
  if (cfg.K > A.rows()) throw InvalidSpec("assumed sparsity exceeds the number of measurements");

  const CMatrix& a = A.entries();
  const Index N = A.cols();
  const Index iters = omp_iteration_count(cfg, A.rows());

  ReconstructionOutput out;
  out.algorithm = Algorithm::omp;
  IndexSet selected;
  std::vector<bool> taken(static_cast<std::size_t>(N), false);
  CVector coeffs;
  CVector e = y;

  for (Index it = 0; it < iters; ++it) {
    const CVector c = a.adjoint() * e;
    Index best = -1;
    double best_mag = -1.0;
    for (Index k = 0; k < N; ++k) {
      if (taken[static_cast<std::size_t>(k)]) continue;
      const double mag = std::norm(c[k]);
      if (mag > best_mag) {  // strict: the lowest index wins ties
        best_mag = mag;
        best = k;
      }
    }
    selected.push_back(best);
    taken[static_cast<std::size_t>(best)] = true;

    coeffs = solve_on_support(A, y, selected);
    e = y - gather_columns(a, selected) * coeffs;
    out.residual_history.push_back(e.norm());
    const CVector ortho = gather_columns(a, selected).adjoint() * e;
    out.orthogonality_history.push_back(ortho.cwiseAbs().maxCoeff());
  }
  out.iterations_used = static_cast<int>(iters);

  if (iters > cfg.K) {
    // Keep the K largest recovered coefficients and solve once more on them.
    const IndexSet keep = largest_magnitudes(coeffs, cfg.K);
    IndexSet support;
    for (Index j : keep) support.push_back(selected[static_cast<std::size_t>(j)]);
    std::sort(support.begin(), support.end());
    selected = support;
    coeffs = solve_on_support(A, y, selected);
    e = y - gather_columns(a, selected) * coeffs;
  }

  out.support = scatter(selected, coeffs, N, out.X_R);
  out.residual_norm = e.norm();
  return out;
}

ReconstructionOutput reconstruct_iht(const SensingMatrix& A, const CVector& y, const AlgoConfig& cfg) {
  cfg.validate();
  check_measurements(A, y);
  const Index N = A.cols();
  if (cfg.K > N) throw InvalidSpec("assumed sparsity exceeds the signal length");
  const CMatrix& a = A.entries();

  const double limit = 1e8 * std::max((a.adjoint() * y).squaredNorm(), std::numeric_limits<double>::min());

  ReconstructionOutput out;
  out.algorithm = Algorithm::iht;
  out.converged = false;
  CVector x = CVector::Zero(N);
  IndexSet support;
  int stable = 0;

  for (int it = 1; it <= cfg.iht_iterations; ++it) {
    const CVector g = x + cfg.iht_tau * (a.adjoint() * (y - a * x));
    IndexSet next = largest_magnitudes(g, cfg.K);
    CVector xn = CVector::Zero(N);
    for (Index k : next) xn[k] = g[k];

    const double energy = xn.squaredNorm();
    if (!std::isfinite(energy) || energy > limit)
      throw DivergenceError("IHT iterate energy " + std::to_string(energy) + " exceeds the divergence limit at iteration " +
                            std::to_string(it) + "; reduce tau");

    stable = (next == support) ? stable + 1 : 0;
    const double change = (xn - x).norm();
    const double scale = std::max(xn.norm(), std::numeric_limits<double>::min());
    x = std::move(xn);
    support = std::move(next);
    out.iterations_used = it;
    if (stable >= cfg.iht_patience && change <= 1e-12 * scale) {
      out.converged = true;
      break;
    }
  }
  out.X_R = x;
  out.support = support;
  out.residual_norm = (y - a * x).norm();
  return out;
}

ReconstructionOutput reconstruct_bayesian(const SensingMatrix& A, const CVector& y, const AlgoConfig& cfg) {
  cfg.validate();
  check_measurements(A, y);
  const Index M = A.rows();
  const Index N = A.cols();

  ReconstructionOutput out;
  out.algorithm = Algorithm::bayesian;
  out.X_R = CVector::Zero(N);

  const double y_energy = y.squaredNorm();
  if (y_energy == 0.0) {
    out.residual_norm = 0.0;
    return out;
  }
  // Keeps the noise estimate away from zero in nearly noiseless runs.
  const double sigma_floor = 1e-16 * y_energy / static_cast<double>(M);

  IndexSet active(static_cast<std::size_t>(N));
  for (Index k = 0; k < N; ++k) active[static_cast<std::size_t>(k)] = k;
  RVector d = RVector::Ones(N);
  double sigma2 = 1.0;
  CVector V;
  bool converged = false;
  bool pruning = false;
  int it = 0;

  while (it < cfg.bayes_max_iterations && !active.empty()) {
    ++it;
    const Index n = static_cast<Index>(active.size());
    const CMatrix as = gather_columns(A.entries(), active);
    // gamma_i = 1 - d_i Sigma_ii, the degree to which coefficient i is determined by the data.
    RVector gamma(n);

    if (n <= M) {
      // Sigma = sigma^2 (A^H A + sigma^2 D)^-1, V = (A^H A + sigma^2 D)^-1 A^H y.
      CMatrix h = as.adjoint() * as;
      h.diagonal() += (sigma2 * d).cast<Complex>();
      Eigen::LLT<CMatrix> llt(h);
      if (llt.info() != Eigen::Success) throw IllConditioned("posterior precision is not positive definite");
      V = llt.solve(as.adjoint() * y);
      const CMatrix inv = llt.solve(CMatrix::Identity(n, n));
      gamma = RVector::Ones(n) - sigma2 * d.cwiseProduct(inv.diagonal().real());
    } else {
      // Woodbury form with C = sigma^2 I + A D^-1 A^H, an M x M system. Here
      // gamma_i = a_i^H C^-1 a_i / d_i, which avoids the cancellation in 1 - d_i Sigma_ii.
      const RVector dinv = d.cwiseInverse();
      const CMatrix g = as * dinv.cast<Complex>().asDiagonal() * as.adjoint();
      CMatrix cinv_a;
      CVector cinv_y;
      CMatrix c = g;
      c.diagonal().array() += sigma2;
      Eigen::LLT<CMatrix> llt(c);
      if (llt.info() == Eigen::Success) {
        cinv_a = llt.solve(as);
        cinv_y = llt.solve(y);
      } else {
        // With sigma^2 near rounding level relative to A D^-1 A^H, Cholesky can
        // fail; the eigenvalues of the positive semidefinite part are clamped at
        // zero so that sigma^2 keeps C positive definite.
        Eigen::SelfAdjointEigenSolver<CMatrix> eig(g);
        if (eig.info() != Eigen::Success) throw IllConditioned("marginal covariance eigendecomposition failed");
        const RVector inv_eval = (eig.eigenvalues().cwiseMax(0.0).array() + sigma2).inverse().matrix();
        const CMatrix& u = eig.eigenvectors();
        cinv_a = u * inv_eval.cast<Complex>().asDiagonal() * (u.adjoint() * as);
        cinv_y = u * inv_eval.cast<Complex>().asDiagonal() * (u.adjoint() * y);
      }
      V = dinv.cast<Complex>().asDiagonal() * (as.adjoint() * cinv_y);
      for (Index i = 0; i < n; ++i) gamma[i] = as.col(i).dot(cinv_a.col(i)).real() * dinv[i];
    }

    RVector d_new(n);
    for (Index i = 0; i < n; ++i) {
      const double v2 = std::norm(V[i]);
      d_new[i] = v2 > 0.0 ? gamma[i] / v2 : std::numeric_limits<double>::infinity();
    }
    const double dof = static_cast<double>(M) - gamma.sum();
    const double resid = (y - as * V).squaredNorm();
    const double prev_sigma2 = sigma2;
    sigma2 = std::max(dof > 0.0 ? resid / dof : resid, sigma_floor);
    pruning = pruning || (it > kBayesWarmupPasses && sigma2 >= kNoiseSettleRatio * prev_sigma2);

    double max_rel = 0.0;
    IndexSet keep_idx;
    for (Index i = 0; i < n; ++i) {
      // Early passes start from the unit noise guess and shrink every estimate,
      // weak true coefficients included; threshold pruning waits for the noise
      // estimate to settle.
      if (!std::isfinite(d_new[i]) || (pruning && std::abs(d_new[i]) > cfg.bayes_threshold)) continue;
      keep_idx.push_back(i);
      max_rel = std::max(max_rel, std::abs(d_new[i] - d[i]) / std::max(std::abs(d[i]), 1e-300));
    }
    const bool unchanged = pruning && static_cast<Index>(keep_idx.size()) == n;

    IndexSet next_active;
    RVector next_d(static_cast<Index>(keep_idx.size()));
    CVector next_v(static_cast<Index>(keep_idx.size()));
    for (std::size_t j = 0; j < keep_idx.size(); ++j) {
      const Index i = keep_idx[j];
      next_active.push_back(active[static_cast<std::size_t>(i)]);
      // Rounding in gamma can leave a tiny non-positive precision; keep it positive.
      next_d[static_cast<Index>(j)] = std::max(d_new[i], 1e-12);
      next_v[static_cast<Index>(j)] = V[i];
    }
    active = std::move(next_active);
    d = std::move(next_d);
    V = std::move(next_v);

    if (unchanged && max_rel < 1e-6) {
      converged = true;
      break;
    }
  }

  out.iterations_used = it;
  out.converged = converged || active.empty();
  for (std::size_t j = 0; j < active.size(); ++j) out.X_R[active[j]] = V[static_cast<Index>(j)];
  out.support = active;
  out.residual_norm = (y - A.entries() * out.X_R).norm();
  return out;
}

ReconstructionOutput reconstruct(Algorithm algorithm, const SensingMatrix& A, const CVector& y,
                                 const AlgoConfig& cfg) {
  switch (algorithm) {
    case Algorithm::omp: return reconstruct_omp(A, y, cfg);
    case Algorithm::iht: return reconstruct_iht(A, y, cfg);
    case Algorithm::bayesian: return reconstruct_bayesian(A, y, cfg);
  }
  throw InvalidSpec("unknown algorithm");
}

double attach_truth(ReconstructionOutput& out, const CVector& X_K) {
  if (X_K.size() != out.X_R.size()) throw DimensionMismatch("truth vector length differs from the reconstruction");
  const double err = (out.X_R - X_K).squaredNorm();
  out.error_energy_vs_truth = err;
  return err;
}

}  // namespace qcs
