#include "qcs/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>
#include <utility>

#include "qcs/random.hpp"

namespace qcs {

namespace {

void normalize_columns(CMatrix& a) {
  for (Index k = 0; k < a.cols(); ++k) {
    const double n = a.col(k).norm();
    if (n == 0.0) throw NumericalError("sampled an all-zero measurement column");
    a.col(k) /= n;
  }
}

// exp(j 2 pi r / N) for r = 0..N-1, evaluated once per matrix.
std::vector<Complex> unit_roots(Index N) {
  std::vector<Complex> roots(static_cast<std::size_t>(N));
  for (Index r = 0; r < N; ++r)
    roots[static_cast<std::size_t>(r)] =
        std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(N));
  return roots;
}

CMatrix dft_rows(const std::vector<Index>& rows, Index N) {
  const auto roots = unit_roots(N);
  const double scale = 1.0 / std::sqrt(static_cast<double>(rows.size()));
  CMatrix a(static_cast<Index>(rows.size()), N);
  for (Index k = 0; k < N; ++k)
    for (std::size_t m = 0; m < rows.size(); ++m)
      a(static_cast<Index>(m), k) = scale * roots[static_cast<std::size_t>((rows[m] * k) % N)];
  return a;
}

bool is_odd_prime(Index q) {
  if (q < 3 || q % 2 == 0) return false;
  for (Index d = 3; d * d <= q; d += 2)
    if (q % d == 0) return false;
  return true;
}

bool is_power_of_two(Index n) { return n > 0 && (n & (n - 1)) == 0; }

int legendre(Index a, Index q) {
  a %= q;
  if (a < 0) a += q;
  if (a == 0) return 0;
  // Euler's criterion by square-and-multiply; q < 2^31 keeps products in range.
  Index result = 1;
  Index base = a;
  Index e = (q - 1) / 2;
  while (e > 0) {
    if (e & 1) result = (result * base) % q;
    base = (base * base) % q;
    e >>= 1;
  }
  return result == 1 ? 1 : -1;
}

// Skew-symmetric conference matrix of order 2^t by repeated doubling
// C' = [[C, C + I], [C - I, -C]], starting from [[0, 1], [-1, 0]].
Eigen::MatrixXd skew_conference_power_of_two(Index n) {
  Eigen::MatrixXd c(2, 2);
  c << 0, 1, -1, 0;
  while (c.rows() < n) {
    const Index m = c.rows();
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(m, m);
    Eigen::MatrixXd next(2 * m, 2 * m);
    next.topLeftCorner(m, m) = c;
    next.topRightCorner(m, m) = c + I;
    next.bottomLeftCorner(m, m) = c - I;
    next.bottomRightCorner(m, m) = -c;
    c = std::move(next);
  }
  return c;
}

// Paley conference matrix of order q + 1. Symmetric for q = 1 mod 4,
// skew-symmetric for q = 3 mod 4.
Eigen::MatrixXd paley_conference(Index q) {
  const Index n = q + 1;
  const double edge = (q % 4 == 1) ? 1.0 : -1.0;
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (Index j = 1; j < n; ++j) {
    c(0, j) = 1.0;
    c(j, 0) = edge;
  }
  for (Index i = 1; i < n; ++i)
    for (Index j = 1; j < n; ++j) c(i, j) = legendre((i - 1) - (j - 1), q);
  return c;
}

// Factor the Gram matrix G = I + S / sqrt(n - 1) of an N = 2M frame.
// G has eigenvalues 0 and 2, each with multiplicity M.
CMatrix frame_from_conference(const Eigen::MatrixXd& conference, bool skew) {
  const Index n = conference.rows();
  const double mu = 1.0 / std::sqrt(static_cast<double>(n - 1));
  CMatrix gram = CMatrix::Identity(n, n);
  const Complex unit = skew ? Complex(0.0, 1.0) : Complex(1.0, 0.0);
  gram += (unit * mu) * conference.cast<Complex>();

  Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram);
  if (eig.info() != Eigen::Success) throw NumericalError("ETF Gram eigendecomposition failed");
  const Index m = n / 2;
  // Eigenvalues ascend; the top M eigenvectors span the frame's row space.
  CMatrix a = std::sqrt(2.0) * eig.eigenvectors().rightCols(m).adjoint();
  normalize_columns(a);
  return a;
}

CMatrix build_etf(Index M, Index N) {
  if (M == N) {
    std::vector<Index> rows(static_cast<std::size_t>(N));
    std::iota(rows.begin(), rows.end(), Index{0});
    return dft_rows(rows, N);
  }
  if (M == N - 1) {
    // Simplex: the DFT with its zero-frequency row removed.
    std::vector<Index> rows(static_cast<std::size_t>(M));
    std::iota(rows.begin(), rows.end(), Index{1});
    return dft_rows(rows, N);
  }
  if (N == 2 * M && is_power_of_two(N)) return frame_from_conference(skew_conference_power_of_two(N), true);
  if (N == 2 * M && is_odd_prime(N - 1))
    return frame_from_conference(paley_conference(N - 1), (N - 1) % 4 == 3);
  throw UnsupportedConfiguration("no equiangular tight frame construction for M=" + std::to_string(M) +
                                 ", N=" + std::to_string(N) + "; supported: " +
                                 etf_supported_description());
}

const CMatrix& cached_etf(Index M, Index N) {
  static std::mutex mutex;
  static std::map<std::pair<Index, Index>, CMatrix> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find({M, N});
  if (it == cache.end()) it = cache.emplace(std::make_pair(M, N), build_etf(M, N)).first;
  return it->second;
}

}  // namespace

std::string_view to_string(MatrixFamily family) noexcept {
  switch (family) {
    case MatrixFamily::partial_dft: return "partial_dft";
    case MatrixFamily::random_partial_dft: return "random_partial_dft";
    case MatrixFamily::etf: return "etf";
    case MatrixFamily::gaussian: return "gaussian";
    case MatrixFamily::uniform: return "uniform";
    case MatrixFamily::bernoulli: return "bernoulli";
  }
  return "unknown";
}

MatrixFamily parse_family(std::string_view name) {
  if (name == "partial_dft" || name == "dft") return MatrixFamily::partial_dft;
  if (name == "random_partial_dft" || name == "rpdft") return MatrixFamily::random_partial_dft;
  if (name == "etf") return MatrixFamily::etf;
  if (name == "gaussian") return MatrixFamily::gaussian;
  if (name == "uniform") return MatrixFamily::uniform;
  if (name == "bernoulli" || name == "binary") return MatrixFamily::bernoulli;
  throw InvalidSpec("unknown matrix family '" + std::string(name) + "'");
}

bool is_random_family(MatrixFamily family) noexcept { return family != MatrixFamily::etf; }

double table_interference_variance(MatrixFamily family, Index M, Index N) {
  if (M < 1 || N < M) throw InvalidSpec("interference variance needs 1 <= M <= N");
  switch (family) {
    case MatrixFamily::partial_dft:
    case MatrixFamily::etf:
      if (N == 1) return 0.0;
      return static_cast<double>(N - M) / (static_cast<double>(M) * static_cast<double>(N - 1));
    default:
      return 1.0 / static_cast<double>(M);
  }
}

SensingMatrix::SensingMatrix(CMatrix entries, MatrixFamily family, std::vector<double> row_selector,
                             std::uint64_t rng_seed)
    : entries_(std::move(entries)), family_(family), row_selector_(std::move(row_selector)), seed_(rng_seed) {}

bool etf_supported(Index M, Index N) noexcept {
  if (M < 1 || N < M) return false;
  if (M == N || M == N - 1) return true;
  return N == 2 * M && (is_power_of_two(N) || is_odd_prime(N - 1));
}

std::string etf_supported_description() {
  return "M = N (orthonormal DFT), M = N - 1 (simplex), N = 2M with N a power of two "
         "(skew conference doubling), N = 2M with N - 1 an odd prime (Paley conference)";
}

SensingMatrix build_matrix(MatrixFamily family, Index M, Index N, std::uint64_t seed) {
  if (M < 1 || N < M) throw InvalidSpec("matrix shape must satisfy 1 <= M <= N");
  Rng rng(seed);
  std::vector<double> selector;
  CMatrix a;
  const double m = static_cast<double>(M);

  switch (family) {
    case MatrixFamily::partial_dft: {
      std::vector<Index> all(static_cast<std::size_t>(N));
      std::iota(all.begin(), all.end(), Index{0});
      std::shuffle(all.begin(), all.end(), rng);
      std::vector<Index> rows(all.begin(), all.begin() + M);
      std::sort(rows.begin(), rows.end());
      a = dft_rows(rows, N);
      selector.assign(rows.begin(), rows.end());
      break;
    }
    case MatrixFamily::random_partial_dft: {
      std::uniform_real_distribution<double> instant(0.0, static_cast<double>(N));
      selector.resize(static_cast<std::size_t>(M));
      for (double& t : selector) t = instant(rng);
      a.resize(M, N);
      const double scale = 1.0 / std::sqrt(m);
      for (Index r = 0; r < M; ++r)
        for (Index k = 0; k < N; ++k)
          a(r, k) = std::polar(scale, 2.0 * std::numbers::pi * selector[static_cast<std::size_t>(r)] *
                                          static_cast<double>(k) / static_cast<double>(N));
      break;
    }
    case MatrixFamily::etf:
      a = cached_etf(M, N);
      break;
    case MatrixFamily::gaussian: {
      std::normal_distribution<double> g(0.0, 1.0 / std::sqrt(m));
      a.resize(M, N);
      for (Index k = 0; k < N; ++k)
        for (Index r = 0; r < M; ++r) a(r, k) = g(rng);
      normalize_columns(a);
      break;
    }
    case MatrixFamily::uniform: {
      // Zero mean, variance 1/M before normalization.
      const double half_width = std::sqrt(3.0 / m);
      std::uniform_real_distribution<double> u(-half_width, half_width);
      a.resize(M, N);
      for (Index k = 0; k < N; ++k)
        for (Index r = 0; r < M; ++r) a(r, k) = u(rng);
      normalize_columns(a);
      break;
    }
    case MatrixFamily::bernoulli: {
      const double level = 1.0 / std::sqrt(m);
      std::bernoulli_distribution coin(0.5);
      a.resize(M, N);
      for (Index k = 0; k < N; ++k)
        for (Index r = 0; r < M; ++r) a(r, k) = coin(rng) ? level : -level;
      break;
    }
  }
  return SensingMatrix(std::move(a), family, std::move(selector), seed);
}

CVector measure(const SensingMatrix& A, const CVector& x) {
  if (x.size() != A.cols())
    throw DimensionMismatch("coefficient vector has length " + std::to_string(x.size()) + ", matrix has " +
                            std::to_string(A.cols()) + " columns");
  return A.entries() * x;
}

CVector measure(const SensingMatrix& A, const SpectralVector& x) { return measure(A, x.coefficients); }

CVector initial_estimate(const SensingMatrix& A, const CVector& y) {
  if (y.size() != A.rows())
    throw DimensionMismatch("measurement vector has length " + std::to_string(y.size()) + ", matrix has " +
                            std::to_string(A.rows()) + " rows");
  return A.entries().adjoint() * y;
}

Index largest_integer_below(double bound) noexcept {
  if (!(bound > 0.0)) return 0;
  // The guard absorbs rounding when the bound is an exact integer.
  const double k = std::ceil(bound - 1e-9) - 1.0;
  return k < 0.0 ? 0 : static_cast<Index>(k);
}

std::vector<Complex> gram_off_diagonal(const SensingMatrix& A) {
  const CMatrix gram = A.entries().adjoint() * A.entries();
  const Index n = gram.cols();
  std::vector<Complex> off;
  off.reserve(static_cast<std::size_t>(n * (n - 1)));
  for (Index l = 0; l < n; ++l)
    for (Index k = 0; k < n; ++k)
      if (k != l) off.push_back(gram(k, l));
  return off;
}

CoherenceReport coherence_report(const SensingMatrix& A) {
  CoherenceReport r;
  const auto off = gram_off_diagonal(A);
  r.sigma_mu_sq_theoretical = table_interference_variance(A.family(), A.rows(), A.cols());
  if (off.empty()) {
    r.K_max_unique = A.cols();
    return r;
  }
  Complex mean{0.0, 0.0};
  for (const Complex& g : off) {
    r.mu = std::max(r.mu, std::abs(g));
    mean += g;
  }
  mean /= static_cast<double>(off.size());
  double ss = 0.0;
  for (const Complex& g : off) ss += std::norm(g - mean);
  r.sigma_mu_sq_empirical = off.size() > 1 ? ss / static_cast<double>(off.size() - 1) : 0.0;

  // Below this level the off-diagonal entries are rounding noise.
  if (r.mu < 1e-12)
    r.K_max_unique = A.cols();
  else
    r.K_max_unique = std::min(A.cols(), largest_integer_below((1.0 + 1.0 / r.mu) / 2.0));
  return r;
}

void write_matrix_csv(const SensingMatrix& A, std::ostream& out) {
  out << "# qcs-matrix family=" << to_string(A.family()) << " M=" << A.rows() << " N=" << A.cols()
      << " seed=" << A.rng_seed() << '\n';
  out << std::setprecision(17);
  for (Index r = 0; r < A.rows(); ++r) {
    for (Index k = 0; k < A.cols(); ++k) {
      if (k > 0) out << ',';
      out << A.entries()(r, k).real() << ',' << A.entries()(r, k).imag();
    }
    out << '\n';
  }
  if (!out) throw std::ios_base::failure("failed writing matrix file");
}

SensingMatrix read_matrix_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# qcs-matrix", 0) != 0)
    throw InvalidSpec("matrix file must start with a '# qcs-matrix' header line");

  std::string family_name;
  Index M = -1;
  Index N = -1;
  std::uint64_t seed = 0;
  std::istringstream header(line.substr(12));
  std::string field;
  while (header >> field) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = field.substr(0, eq);
    const std::string value = field.substr(eq + 1);
    try {
      if (key == "family") family_name = value;
      else if (key == "M") M = std::stol(value);
      else if (key == "N") N = std::stol(value);
      else if (key == "seed") seed = std::stoull(value);
    } catch (const std::exception&) {
      throw InvalidSpec("malformed matrix header field '" + field + "'");
    }
  }
  if (family_name.empty() || M < 1 || N < M) throw InvalidSpec("matrix header needs family, M and N");

  CMatrix a(M, N);
  for (Index r = 0; r < M; ++r) {
    if (!std::getline(in, line)) throw InvalidSpec("matrix file ends after " + std::to_string(r) + " rows");
    std::istringstream row(line);
    std::string cell;
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(2 * N));
    while (std::getline(row, cell, ',')) {
      try {
        values.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw InvalidSpec("malformed matrix entry '" + cell + "' in row " + std::to_string(r));
      }
    }
    if (static_cast<Index>(values.size()) != 2 * N)
      throw InvalidSpec("matrix row " + std::to_string(r) + " has " + std::to_string(values.size()) +
                        " values, expected " + std::to_string(2 * N));
    for (Index k = 0; k < N; ++k)
      a(r, k) = Complex(values[static_cast<std::size_t>(2 * k)], values[static_cast<std::size_t>(2 * k + 1)]);
  }
  return SensingMatrix(std::move(a), parse_family(family_name), {}, seed);
}

}  // namespace qcs
