#include "qcs/signal_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "qcs/random.hpp"

namespace qcs {

namespace {

void validate(const SignalSpec& s) {
  if (s.N < 2) throw InvalidSpec("signal length N must be at least 2");
  if (s.K < 1 || s.K >= s.N) throw InvalidSpec("sparsity K must satisfy 1 <= K < N");
  if (s.M < 1 || s.M > s.N) throw InvalidSpec("measurement count M must satisfy 1 <= M <= N");
  if (!(s.amplitude_jitter_max >= 0.0 && s.amplitude_jitter_max < 1.0))
    throw InvalidSpec("amplitude jitter bound must lie in [0, 1)");
  if (s.tail == TailModel::exponential && !(s.tail_rate > 0.0))
    throw InvalidSpec("tail decay rate must be positive");
}

// Draws the large part and, when requested, the tail. The random stream is
// consumed in the same order for both models so the K large coefficients
// coincide for a given seed.
SpectralVector draw(const SignalSpec& s, bool with_tail) {
  validate(s);
  Rng rng(s.rng_seed);

  std::vector<Index> order(static_cast<std::size_t>(s.N));
  std::iota(order.begin(), order.end(), Index{0});
  std::shuffle(order.begin(), order.end(), rng);

  std::uniform_real_distribution<double> jitter(0.0, s.amplitude_jitter_max);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);

  const double scale = amplitude_scale(s);
  const double bound = std::min(std::sqrt(static_cast<double>(s.M)) / static_cast<double>(s.K), 1.0);

  SpectralVector x;
  x.coefficients = CVector::Zero(s.N);
  for (Index p = 0; p < s.K; ++p) {
    const double nu = s.amplitude_jitter_max > 0.0 ? jitter(rng) : 0.0;
    const double magnitude = scale * (1.0 - nu);
    if (s.enforce_register_range && magnitude >= bound)
      throw RangeError("coefficient magnitude " + std::to_string(magnitude) +
                       " reaches the register bound " + std::to_string(bound));
    x.coefficients[order[static_cast<std::size_t>(p)]] = std::polar(magnitude, phase(rng));
  }

  if (with_tail) {
    const double k = static_cast<double>(s.K);
    for (Index p = s.K; p < s.N; ++p) {
      // p is zero-based here; the rank in the model is p + 1.
      const double magnitude = scale * std::exp(-s.tail_rate * static_cast<double>(p + 1) / k);
      x.coefficients[order[static_cast<std::size_t>(p)]] = std::polar(magnitude, phase(rng));
    }
  }

  x.support.assign(order.begin(), order.begin() + s.K);
  std::sort(x.support.begin(), x.support.end());
  return x;
}

}  // namespace

double amplitude_scale(const SignalSpec& spec) {
  const double scale = std::sqrt(static_cast<double>(spec.M)) / static_cast<double>(spec.K);
  return spec.enforce_register_range ? std::min(scale, 1.0) : scale;
}

SpectralVector generate_sparse(const SignalSpec& spec) {
  if (spec.tail != TailModel::none)
    throw InvalidSpec("generate_sparse requires a signal spec without a tail");
  return draw(spec, false);
}

SpectralVector generate_nonsparse(const SignalSpec& spec) {
  if (spec.tail != TailModel::exponential)
    throw InvalidSpec("generate_nonsparse requires an exponential tail");
  return draw(spec, true);
}

IndexSet largest_magnitudes(const CVector& v, Index K) {
  if (K < 0 || K > v.size()) throw InvalidSpec("cannot keep more entries than the vector holds");
  IndexSet idx(static_cast<std::size_t>(v.size()));
  std::iota(idx.begin(), idx.end(), Index{0});
  auto larger = [&v](Index a, Index b) {
    const double ma = std::norm(v[a]);
    const double mb = std::norm(v[b]);
    return ma > mb || (ma == mb && a < b);
  };
  std::nth_element(idx.begin(), idx.begin() + K, idx.end(), larger);
  idx.resize(static_cast<std::size_t>(K));
  std::sort(idx.begin(), idx.end());
  return idx;
}

Truncation sparse_truncation(const SpectralVector& x, Index K) {
  if (K < 1 || K > x.size()) throw InvalidSpec("truncation sparsity must satisfy 1 <= K <= N");
  Truncation t;
  t.kept.support = largest_magnitudes(x.coefficients, K);
  t.kept.coefficients = CVector::Zero(x.size());
  for (Index k : t.kept.support) t.kept.coefficients[k] = x.coefficients[k];
  t.residual_energy = (x.coefficients - t.kept.coefficients).squaredNorm();
  return t;
}

}  // namespace qcs
