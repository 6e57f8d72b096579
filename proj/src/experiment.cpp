#include "qcs/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "qcs/random.hpp"
#include "qcs/signal_model.hpp"

namespace qcs {

namespace {

// Stream tags for derive_seed; fixed forever so seeds stay reproducible.
constexpr std::uint64_t kSignalStream = 1;
constexpr std::uint64_t kMatrixStream = 2;
constexpr std::uint64_t kFoldStream = 3;
constexpr std::uint64_t kFloatStream = 4;
constexpr std::uint64_t kFixedMatrixTag = 0xf1fed;

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(begin, end - begin + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  const std::string t = trim(text);
  T value{};
  const char* first = t.data();
  const char* last = t.data() + t.size();
  const std::from_chars_result r = std::from_chars(first, last, value);
  if (t.empty() || r.ec != std::errc{} || r.ptr != last)
    throw InvalidSpec("invalid value '" + t + "' for '" + std::string(key) + "'");
  return value;
}

// Comma-separated integers; an item "a:b" or "a:b:step" expands to an inclusive range.
template <typename T>
std::vector<T> parse_list(std::string_view key, std::string_view text) {
  std::vector<T> out;
  std::stringstream ss{std::string(text)};
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw InvalidSpec("empty entry in list for '" + std::string(key) + "'");
    const auto c1 = item.find(':');
    if (c1 == std::string::npos) {
      out.push_back(parse_number<T>(key, item));
      continue;
    }
    const auto c2 = item.find(':', c1 + 1);
    const T lo = parse_number<T>(key, item.substr(0, c1));
    const T hi = parse_number<T>(key, item.substr(c1 + 1, c2 == std::string::npos ? std::string::npos : c2 - c1 - 1));
    const T step = c2 == std::string::npos ? T{1} : parse_number<T>(key, item.substr(c2 + 1));
    if (step <= 0 || hi < lo) throw InvalidSpec("invalid range '" + item + "' for '" + std::string(key) + "'");
    for (T v = lo; v <= hi; v += step) out.push_back(v);
  }
  if (out.empty()) throw InvalidSpec("list for '" + std::string(key) + "' is empty");
  return out;
}

// Everything shared by all bit counts of one trial.
struct PreparedTrial {
  SpectralVector signal;  // what gets measured before folding
  CVector X_K;
  IndexSet support;
  double signal_energy_K = 0.0;
  double tail_energy = 0.0;
  std::optional<SensingMatrix> A;
  std::uint64_t seed = 0;
};

PreparedTrial prepare(const ExperimentConfig& cfg, Index M, Index K, int trial) {
  PreparedTrial p;
  p.seed = trial_seed(cfg, M, K, trial);

  SignalSpec spec;
  spec.N = cfg.N;
  spec.K = K;
  spec.M = M;
  spec.amplitude_jitter_max = cfg.jitter;
  spec.tail = scenario_has_tail(cfg.scenario) ? TailModel::exponential : TailModel::none;
  spec.tail_rate = cfg.tail_rate;
  spec.rng_seed = derive_seed(p.seed, {kSignalStream});
  p.signal = scenario_has_tail(cfg.scenario) ? generate_nonsparse(spec) : generate_sparse(spec);

  const Truncation t = sparse_truncation(p.signal, K);
  p.X_K = t.kept.coefficients;
  p.support = t.kept.support;
  p.signal_energy_K = p.X_K.squaredNorm();
  p.tail_energy = t.residual_energy;

  const std::uint64_t matrix_seed =
      cfg.matrix_mode == MatrixMode::fresh
          ? derive_seed(p.seed, {kMatrixStream})
          : derive_seed(cfg.seed, {kFixedMatrixTag, static_cast<std::uint64_t>(cfg.family), static_cast<std::uint64_t>(M)});
  p.A.emplace(build_matrix(cfg.family, M, cfg.N, matrix_seed));
  return p;
}

TrialResult finish_trial(const ExperimentConfig& cfg, const PreparedTrial& p, Index K, int B) {
  TrialResult r;
  const SensingMatrix& A = *p.A;
  const Index M = A.rows();
  try {
    CVector X_K = p.X_K;
    double signal_energy_K = p.signal_energy_K;
    double tail_energy = p.tail_energy;
    SpectralVector measured = p.signal;
    double sigma_z_sq = 0.0;

    if (scenario_is_folded(cfg.scenario)) {
      FoldingSpec fold = cfg.fold;
      if (cfg.fold_bits_match_B) {
        fold.quantize_coefficients = true;
        fold.B_z = B;
      }
      if (fold.active()) {
        measured = fold_coefficients(p.signal, fold, derive_seed(p.seed, {kFoldStream}));
        sigma_z_sq = fold.noise_variance();
        if (fold.quantize_coefficients) sigma_z_sq += sigma_e_sq(fold.B_z, true);
      }
    }

    CVector y = measure(A, measured);
    CVector y_B;
    if (cfg.mode == ArithmeticMode::fixed_point) {
      QuantizerSpec q{B, ArithmeticMode::fixed_point, true};
      QuantizedSignal qs = quantize_fixed(y, q);
      y_B = std::move(qs.values);
      r.saturations = qs.saturations;
    } else {
      if (cfg.measurement_power > 0.0) {
        const double power = y.squaredNorm() / static_cast<double>(M);
        if (!(power > 0.0)) throw NumericalError("cannot normalize an all-zero measurement vector");
        const double s = std::sqrt(cfg.measurement_power / power);
        y *= s;
        X_K *= s;
        signal_energy_K *= s * s;
        tail_energy *= s * s;
        sigma_z_sq *= s * s;
      }
      QuantizerSpec q{B, ArithmeticMode::floating_point, true};
      y_B = quantize_floating(y, q, derive_seed(p.seed, {kFloatStream}));
    }

    AlgoConfig algo = cfg.algo;
    algo.K = K;
    ReconstructionOutput out = reconstruct(cfg.algorithm, A, y_B, algo);
    r.error_energy = attach_truth(out, X_K);
    r.iterations = out.iterations_used;
    for (Index k : p.support)
      if (!std::binary_search(out.support.begin(), out.support.end(), k)) ++r.support_misses;

    ScenarioSpec s;
    s.N = cfg.N;
    s.M = M;
    s.K = K;
    s.family = cfg.family;
    s.B = B;
    s.complex_signal = true;
    s.tail_energy = tail_energy;
    s.sigma_z_sq = sigma_z_sq;
    s.signal_energy_K = signal_energy_K;
    s.mode = cfg.mode;
    s.sigma_X_sq = signal_energy_K / static_cast<double>(K);
    const TheoryPrediction th = predict(s);
    r.theory_components = th.components;
    r.theory_error_energy = th.expected_error_energy;
    r.signal_energy_K = signal_energy_K;
    r.tail_energy = tail_energy;
  } catch (const NumericalError& e) {
    r.ok = false;
    r.failure = e.what();
  }
  return r;
}

template <typename Fn>
void parallel_for(int count, int threads, Fn&& fn) {
  int workers = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::string format_db(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << v;
  return os.str();
}

}  // namespace

std::string_view to_string(Scenario s) noexcept {
  switch (s) {
    case Scenario::sparse: return "sparse";
    case Scenario::nonsparse: return "nonsparse";
    case Scenario::folded: return "folded";
    case Scenario::folded_nonsparse: return "folded_nonsparse";
  }
  return "unknown";
}

std::string_view to_string(MatrixMode m) noexcept { return m == MatrixMode::fresh ? "fresh" : "fixed"; }

std::string_view to_string(SnrAverage a) noexcept { return a == SnrAverage::energy ? "energy" : "db"; }

Scenario parse_scenario(std::string_view name) {
  if (name == "sparse") return Scenario::sparse;
  if (name == "nonsparse") return Scenario::nonsparse;
  if (name == "folded") return Scenario::folded;
  if (name == "folded_nonsparse") return Scenario::folded_nonsparse;
  throw InvalidSpec("unknown scenario '" + std::string(name) + "'");
}

MatrixMode parse_matrix_mode(std::string_view name) {
  if (name == "fresh") return MatrixMode::fresh;
  if (name == "fixed") return MatrixMode::fixed;
  throw InvalidSpec("unknown matrix mode '" + std::string(name) + "'");
}

SnrAverage parse_snr_average(std::string_view name) {
  if (name == "energy") return SnrAverage::energy;
  if (name == "db") return SnrAverage::db;
  throw InvalidSpec("unknown SNR averaging '" + std::string(name) + "'");
}

bool scenario_has_tail(Scenario s) noexcept {
  return s == Scenario::nonsparse || s == Scenario::folded_nonsparse;
}

bool scenario_is_folded(Scenario s) noexcept { return s == Scenario::folded || s == Scenario::folded_nonsparse; }

void ExperimentConfig::validate() const {
  if (N < 2) throw InvalidSpec("N must be at least 2");
  if (trials < 1) throw InvalidSpec("trials must be at least 1");
  if (M_list.empty() || K_list.empty() || B_list.empty()) throw InvalidSpec("M, K and B lists must be non-empty");
  for (Index M : M_list) {
    if (M < 1 || M > N) throw InvalidSpec("every M must satisfy 1 <= M <= N");
    if (family == MatrixFamily::etf && !etf_supported(M, N))
      throw UnsupportedConfiguration("no ETF for M=" + std::to_string(M) + ", N=" + std::to_string(N) +
                                     "; supported: " + etf_supported_description());
    for (Index K : K_list)
      if (K < 1 || K >= N || K > M) throw InvalidSpec("every K must satisfy 1 <= K <= M and K < N");
  }
  for (int B : B_list)
    if (B < 1 || B > 52) throw InvalidSpec("every B must lie in [1, 52]");
  if (!(jitter >= 0.0 && jitter < 1.0)) throw InvalidSpec("jitter must lie in [0, 1)");
  if (scenario_has_tail(scenario) && !(tail_rate > 0.0)) throw InvalidSpec("tail_rate must be positive");
  if (scenario_is_folded(scenario) && !fold.active() && !fold_bits_match_B)
    throw InvalidSpec("folded scenarios need fold_bits or fold_sigma");
  if (fold.additive_noise_sigma < 0.0) throw InvalidSpec("fold_sigma must be non-negative");
  if (measurement_power < 0.0) throw InvalidSpec("measurement_power must be non-negative");
  if (!(miss_tolerance >= 0.0 && miss_tolerance <= 1.0)) throw InvalidSpec("miss_tolerance must lie in [0, 1]");
  if (threads < 0) throw InvalidSpec("threads must be non-negative");
  AlgoConfig a = algo;
  a.K = 1;
  a.validate();
}

std::uint64_t trial_seed(const ExperimentConfig& cfg, Index M, Index K, int trial) {
  return derive_seed(cfg.seed, {static_cast<std::uint64_t>(cfg.family), static_cast<std::uint64_t>(M),
                                static_cast<std::uint64_t>(K), static_cast<std::uint64_t>(cfg.scenario),
                                static_cast<std::uint64_t>(trial)});
}

TrialResult run_trial(const ExperimentConfig& cfg, const PointSpec& point, int trial) {
  const PreparedTrial p = prepare(cfg, point.M, point.K, trial);
  return finish_trial(cfg, p, point.K, point.B);
}

std::vector<std::vector<TrialResult>> run_point(const ExperimentConfig& cfg, Index M, Index K,
                                                const std::vector<int>& bits) {
  std::vector<std::vector<TrialResult>> out(bits.size(), std::vector<TrialResult>(static_cast<std::size_t>(cfg.trials)));
  parallel_for(cfg.trials, cfg.threads, [&](int t) {
    const PreparedTrial p = prepare(cfg, M, K, t);
    for (std::size_t b = 0; b < bits.size(); ++b) out[b][static_cast<std::size_t>(t)] = finish_trial(cfg, p, K, bits[b]);
  });
  return out;
}

ResultRow aggregate(const ExperimentConfig& cfg, const PointSpec& point, const std::vector<TrialResult>& trials) {
  ResultRow row;
  row.family = cfg.family;
  row.M = point.M;
  row.K = point.K;
  row.B = point.B;
  row.scenario = cfg.scenario;
  row.algorithm = cfg.algorithm;
  row.trials = static_cast<int>(trials.size());
  row.matrix_mode = cfg.matrix_mode;

  double sum_err = 0.0;
  double sum_sig = 0.0;
  double sum_th = 0.0;
  double sum_st_db = 0.0;
  double sum_th_db = 0.0;
  ErrorComponents comp;
  int ok = 0;
  for (const TrialResult& t : trials) {
    row.saturation_count += t.saturations;
    if (!t.ok) {
      ++row.failures;
      row.failure_messages.push_back(t.failure);
      continue;
    }
    ++ok;
    if (t.support_misses > 0) ++row.support_misses;
    sum_err += t.error_energy;
    sum_sig += t.signal_energy_K;
    sum_th += t.theory_error_energy;
    comp.quantization += t.theory_components.quantization;
    comp.nonsparsity += t.theory_components.nonsparsity;
    comp.folding += t.theory_components.folding;
    sum_st_db += snr_db(t.signal_energy_K, t.error_energy);
    sum_th_db += snr_db(t.signal_energy_K, t.theory_error_energy);
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (ok == 0) {
    row.snr_st_db = row.snr_th_db = row.gap_db = nan;
    row.mean_error_energy = row.mean_theory_error_energy = row.mean_signal_energy = nan;
    row.in_regime = false;
    return row;
  }
  const double n = static_cast<double>(ok);
  row.mean_error_energy = sum_err / n;
  row.mean_theory_error_energy = sum_th / n;
  row.mean_signal_energy = sum_sig / n;
  if (cfg.snr_average == SnrAverage::energy) {
    row.snr_st_db = snr_db(sum_sig, sum_err);
    row.snr_th_db = snr_db(sum_sig, sum_th);
  } else {
    row.snr_st_db = sum_st_db / n;
    row.snr_th_db = sum_th_db / n;
  }
  row.gap_db = row.snr_st_db - row.snr_th_db;

  row.dominant_term = DominantTerm::quantization;
  if (comp.nonsparsity > comp.quantization) row.dominant_term = DominantTerm::nonsparsity;
  if (comp.folding > std::max(comp.quantization, comp.nonsparsity)) row.dominant_term = DominantTerm::folding;

  row.in_regime = row.failures == 0 && static_cast<double>(row.support_misses) <= cfg.miss_tolerance * n;
  return row;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult result;
  for (Index M : cfg.M_list) {
    for (Index K : cfg.K_list) {
      const auto per_b = run_point(cfg, M, K, cfg.B_list);
      for (std::size_t b = 0; b < cfg.B_list.size(); ++b)
        result.rows.push_back(aggregate(cfg, PointSpec{M, K, cfg.B_list[b]}, per_b[b]));
    }
  }
  return result;
}

void write_csv(const ExperimentResult& result, std::ostream& out) {
  out << "family,M,K,B,scenario,algorithm,snr_st_db,snr_th_db,gap_db,saturation_count,trials,"
         "failures,matrix_mode,support_misses,dominant_term,regime\n";
  for (const ResultRow& r : result.rows) {
    out << to_string(r.family) << ',' << r.M << ',' << r.K << ',' << r.B << ',' << to_string(r.scenario) << ','
        << to_string(r.algorithm) << ',' << format_db(r.snr_st_db) << ',' << format_db(r.snr_th_db) << ','
        << format_db(r.gap_db) << ',' << r.saturation_count << ',' << r.trials << ',' << r.failures << ','
        << to_string(r.matrix_mode) << ',' << r.support_misses << ',' << to_string(r.dominant_term) << ','
        << (r.in_regime ? "ok" : "excluded") << '\n';
  }
  if (!out) throw std::ios_base::failure("failed writing CSV output");
}

void write_plot_json(const ExperimentConfig& cfg, const ExperimentResult& result, std::ostream& out) {
  using nlohmann::json;
  auto finite_or_null = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };

  json panels = json::array();
  for (Index M : cfg.M_list) {
    json series = json::array();
    for (Index K : cfg.K_list) {
      json x = json::array(), st = json::array(), th = json::array();
      for (const ResultRow& r : result.rows) {
        if (r.M != M || r.K != K) continue;
        x.push_back(r.B);
        st.push_back(finite_or_null(r.snr_st_db));
        th.push_back(finite_or_null(r.snr_th_db));
      }
      series.push_back({{"label", "K=" + std::to_string(K) + " statistical"}, {"K", K}, {"kind", "statistical"},
                        {"style", "dots"}, {"x", x}, {"y", st}});
      series.push_back({{"label", "K=" + std::to_string(K) + " theoretical"}, {"K", K}, {"kind", "theoretical"},
                        {"style", "dashdot"}, {"x", x}, {"y", th}});
    }
    panels.push_back({{"title", std::string(to_string(cfg.family)) + ", " + std::string(to_string(cfg.scenario)) +
                                    ", " + std::string(to_string(cfg.algorithm)) + ", M=" + std::to_string(M)},
                      {"M", M},
                      {"series", series}});
  }
  json doc = {{"x_label", "B (bits)"},
              {"y_label", "SNR (dB)"},
              {"N", cfg.N},
              {"family", to_string(cfg.family)},
              {"scenario", to_string(cfg.scenario)},
              {"algorithm", to_string(cfg.algorithm)},
              {"trials", cfg.trials},
              {"seed", cfg.seed},
              {"panels", panels}};
  out << doc.dump(2) << '\n';
  if (!out) throw std::ios_base::failure("failed writing plot description");
}

void apply_setting(ExperimentConfig& cfg, std::string_view raw_key, std::string_view raw_value) {
  const std::string key = lower(trim(raw_key));
  const std::string value = trim(raw_value);
  if (value.empty()) throw InvalidSpec("missing value for '" + key + "'");

  if (key == "n") cfg.N = parse_number<Index>(key, value);
  else if (key == "m") cfg.M_list = parse_list<Index>(key, value);
  else if (key == "k") cfg.K_list = parse_list<Index>(key, value);
  else if (key == "b") cfg.B_list = parse_list<int>(key, value);
  else if (key == "family") cfg.family = parse_family(value);
  else if (key == "scenario") cfg.scenario = parse_scenario(value);
  else if (key == "algorithm") cfg.algorithm = parse_algorithm(value);
  else if (key == "trials") cfg.trials = parse_number<int>(key, value);
  else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(key, value);
  else if (key == "jitter") cfg.jitter = parse_number<double>(key, value);
  else if (key == "tail_rate") cfg.tail_rate = parse_number<double>(key, value);
  else if (key == "fold_bits") {
    if (value == "match") {
      cfg.fold_bits_match_B = true;
    } else if (value == "none") {
      cfg.fold_bits_match_B = false;
      cfg.fold.quantize_coefficients = false;
    } else {
      cfg.fold_bits_match_B = false;
      cfg.fold.quantize_coefficients = true;
      cfg.fold.B_z = parse_number<int>(key, value);
    }
  } else if (key == "fold_sigma") cfg.fold.additive_noise_sigma = parse_number<double>(key, value);
  else if (key == "mode") cfg.mode = parse_mode(value);
  else if (key == "measurement_power") cfg.measurement_power = parse_number<double>(key, value);
  else if (key == "matrix_mode") cfg.matrix_mode = parse_matrix_mode(value);
  else if (key == "snr_average") cfg.snr_average = parse_snr_average(value);
  else if (key == "tau") cfg.algo.iht_tau = parse_number<double>(key, value);
  else if (key == "iters") cfg.algo.iht_iterations = parse_number<int>(key, value);
  else if (key == "threshold") cfg.algo.bayes_threshold = parse_number<double>(key, value);
  else if (key == "bayes_iters") cfg.algo.bayes_max_iterations = parse_number<int>(key, value);
  else if (key == "overshoot") cfg.algo.overshoot_fraction = parse_number<double>(key, value);
  else if (key == "overshoot_min_k") cfg.algo.overshoot_min_K = parse_number<Index>(key, value);
  else if (key == "miss_tolerance") cfg.miss_tolerance = parse_number<double>(key, value);
  else if (key == "threads") cfg.threads = parse_number<int>(key, value);
  else if (key == "output") cfg.output_path = value;
  else if (key == "plot") cfg.plot_path = value;
  else throw InvalidSpec("unknown configuration key '" + key + "'");
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw InvalidSpec("line " + std::to_string(number) + ": expected 'key = value'");
    try {
      apply_setting(cfg, t.substr(0, eq), t.substr(eq + 1));
    } catch (const InvalidSpec& e) {
      throw InvalidSpec("line " + std::to_string(number) + ": " + e.what());
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open config file '" + path + "'");
  return parse_config(in);
}

std::vector<ExperimentConfig> preset(std::string_view name) {
  const std::vector<int> bits{4, 6, 8, 10, 12, 14, 16, 18, 20, 24};
  const std::vector<Index> sparsities{5, 10, 15, 20, 25, 30};

  // Sparse, nonsparse and folded variants of one sweep.
  auto triple = [&](ExperimentConfig base) {
    std::vector<ExperimentConfig> out;
    base.scenario = Scenario::sparse;
    out.push_back(base);
    base.scenario = Scenario::nonsparse;
    out.push_back(base);
    base.scenario = Scenario::folded_nonsparse;
    out.push_back(base);
    return out;
  };

  ExperimentConfig base;
  base.N = 256;
  base.trials = 100;
  base.seed = 1;
  base.jitter = 0.2;
  base.tail_rate = 8.0;
  base.B_list = bits;
  base.K_list = sparsities;
  base.M_list = {128};
  base.fold_bits_match_B = true;
  base.fold.additive_noise_sigma = 1e-4;

  if (name == "example1") {
    ExperimentConfig c;
    c.N = 256;
    c.M_list = {128};
    c.K_list = {10};
    c.B_list = {6};
    c.jitter = 0.4;
    c.tail_rate = 1.0;
    c.trials = 100;
    c.scenario = Scenario::sparse;
    std::vector<ExperimentConfig> out{c};
    c.scenario = Scenario::nonsparse;
    out.push_back(c);
    return out;
  }
  if (name == "example2") {
    base.M_list = {192, 170, 128};
    return triple(base);
  }
  if (name == "example3") {
    std::vector<ExperimentConfig> out;
    base.fold.additive_noise_sigma = 0.0;
    for (MatrixFamily f : {MatrixFamily::uniform, MatrixFamily::gaussian, MatrixFamily::etf}) {
      base.family = f;
      for (auto& c : triple(base)) out.push_back(c);
    }
    return out;
  }
  if (name == "example4") {
    base.family = MatrixFamily::bernoulli;
    base.M_list = {192};
    base.K_list = {1, 15, 20, 25, 30};
    base.scenario = Scenario::nonsparse;
    return {base};
  }
  if (name == "example5") {
    base.algorithm = Algorithm::iht;
    return triple(base);
  }
  if (name == "example6") {
    base.family = MatrixFamily::gaussian;
    base.algorithm = Algorithm::bayesian;
    return triple(base);
  }
  throw InvalidSpec("unknown preset '" + std::string(name) + "'; expected example1 .. example6");
}

}  // namespace qcs
