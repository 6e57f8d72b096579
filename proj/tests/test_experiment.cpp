#include <doctest.h>

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "qcs/experiment.hpp"

using namespace qcs;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.N = 128;
  c.M_list = {64};
  c.K_list = {4, 6};
  c.B_list = {6, 10};
  c.trials = 3;
  c.seed = 17;
  c.threads = 1;
  return c;
}

std::string csv_of(const ExperimentConfig& c) {
  std::ostringstream out;
  write_csv(run_experiment(c), out);
  return out.str();
}

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

}  // namespace

TEST_CASE("config grammar") {
  const ExperimentConfig c = parse(
      "# comment line\n"
      "n = 256\n"
      "m = 192, 170 ,128\n"
      "k = 5:30:5   # trailing comment\n"
      "b = 4:8\n"
      "\n"
      "family = etf\n"
      "scenario = folded_nonsparse\n"
      "algorithm = bayes\n"
      "trials = 7\n"
      "seed = 99\n"
      "jitter = 0.25\n"
      "tail_rate = 8\n"
      "fold_bits = match\n"
      "fold_sigma = 1e-4\n"
      "mode = floating\n"
      "matrix_mode = fixed\n"
      "snr_average = db\n"
      "tau = 0.5\n"
      "iters = 50\n"
      "threshold = 80\n"
      "miss_tolerance = 0.1\n");
  CHECK(c.N == 256);
  CHECK(c.M_list == std::vector<Index>{192, 170, 128});
  CHECK(c.K_list == std::vector<Index>{5, 10, 15, 20, 25, 30});
  CHECK(c.B_list == std::vector<int>{4, 5, 6, 7, 8});
  CHECK(c.family == MatrixFamily::etf);
  CHECK(c.scenario == Scenario::folded_nonsparse);
  CHECK(c.algorithm == Algorithm::bayesian);
  CHECK(c.trials == 7);
  CHECK(c.seed == 99);
  CHECK(c.jitter == 0.25);
  CHECK(c.tail_rate == 8.0);
  CHECK(c.fold_bits_match_B);
  CHECK(c.fold.additive_noise_sigma == 1e-4);
  CHECK(c.mode == ArithmeticMode::floating_point);
  CHECK(c.matrix_mode == MatrixMode::fixed);
  CHECK(c.snr_average == SnrAverage::db);
  CHECK(c.algo.iht_tau == 0.5);
  CHECK(c.algo.iht_iterations == 50);
  CHECK(c.algo.bayes_threshold == 80.0);
  CHECK(c.miss_tolerance == 0.1);

  ExperimentConfig d;
  apply_setting(d, "fold_bits", "12");
  CHECK(d.fold.quantize_coefficients);
  CHECK(d.fold.B_z == 12);
  CHECK_FALSE(d.fold_bits_match_B);
  apply_setting(d, "fold_bits", "none");
  CHECK_FALSE(d.fold.quantize_coefficients);
}

TEST_CASE("config errors name the line") {
  try {
    parse("n = 256\nbogus = 3\n");
    FAIL("expected an error");
  } catch (const InvalidSpec& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse("n 256\n"), InvalidSpec);
  CHECK_THROWS_AS(parse("k = 10:5\n"), InvalidSpec);
  CHECK_THROWS_AS(parse("k = 5,,6\n"), InvalidSpec);
  CHECK_THROWS_AS(parse("trials = ten\n"), InvalidSpec);
  CHECK_THROWS_AS(parse("family = hadamard\n"), InvalidSpec);
  CHECK_THROWS_AS(load_config("/nonexistent/dir/config.txt"), std::ios_base::failure);
}

TEST_CASE("validation") {
  ExperimentConfig c = small_config();
  c.validate();
  c.trials = 0;
  CHECK_THROWS_AS(c.validate(), InvalidSpec);
  c = small_config();
  c.K_list = {65};
  CHECK_THROWS_AS(c.validate(), InvalidSpec);
  c = small_config();
  c.family = MatrixFamily::etf;
  c.M_list = {50};
  CHECK_THROWS_AS(c.validate(), UnsupportedConfiguration);
  c = small_config();
  c.scenario = Scenario::folded;
  CHECK_THROWS_AS(c.validate(), InvalidSpec);
  c.fold.additive_noise_sigma = 1e-3;
  c.validate();
}

TEST_CASE("trial seeds ignore bits and algorithm but separate trials and points") {
  ExperimentConfig a = small_config();
  ExperimentConfig b = a;
  b.algorithm = Algorithm::iht;
  b.B_list = {12};
  CHECK(trial_seed(a, 64, 4, 0) == trial_seed(b, 64, 4, 0));
  CHECK(trial_seed(a, 64, 4, 0) != trial_seed(a, 64, 4, 1));
  CHECK(trial_seed(a, 64, 4, 0) != trial_seed(a, 64, 6, 0));
  CHECK(trial_seed(a, 64, 4, 0) != trial_seed(a, 32, 4, 0));
  b.seed = a.seed + 1;
  CHECK(trial_seed(a, 64, 4, 0) != trial_seed(b, 64, 4, 0));
}

TEST_CASE("runs are deterministic and independent of threads and point order") {
  ExperimentConfig c = small_config();
  const std::string first = csv_of(c);
  CHECK(first == csv_of(c));
  c.threads = 3;
  CHECK(first == csv_of(c));

  ExperimentConfig reordered = small_config();
  reordered.K_list = {6, 4};
  reordered.B_list = {10, 6};
  const ExperimentResult r1 = run_experiment(small_config());
  const ExperimentResult r2 = run_experiment(reordered);
  for (const ResultRow& a : r1.rows) {
    bool found = false;
    for (const ResultRow& b : r2.rows) {
      if (a.K != b.K || a.B != b.B) continue;
      found = true;
      CHECK(a.mean_error_energy == b.mean_error_energy);
      CHECK(a.snr_st_db == b.snr_st_db);
    }
    CHECK(found);
  }

  ExperimentConfig one = small_config();
  one.trials = 1;
  CHECK(csv_of(one) == csv_of(one));
}

TEST_CASE("CSV schema") {
  const std::string csv = csv_of(small_config());
  std::istringstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header ==
        "family,M,K,B,scenario,algorithm,snr_st_db,snr_th_db,gap_db,saturation_count,trials,failures,matrix_mode,"
        "support_misses,dominant_term,regime");
  int rows = 0;
  for (std::string line; std::getline(in, line);) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 15);
    CHECK(line.rfind("partial_dft,64,", 0) == 0);
  }
  CHECK(rows == 4);
  std::ostringstream empty;
  write_csv(ExperimentResult{}, empty);
  CHECK(empty.str() == header + "\n");
}

TEST_CASE("plot description lists one statistical and one theoretical series per sparsity") {
  const ExperimentConfig c = small_config();
  std::ostringstream out;
  write_plot_json(c, run_experiment(c), out);
  const nlohmann::json doc = nlohmann::json::parse(out.str());
  REQUIRE(doc["panels"].size() == 1);
  const auto& series = doc["panels"][0]["series"];
  REQUIRE(series.size() == 4);
  CHECK(series[0]["kind"] == "statistical");
  CHECK(series[1]["kind"] == "theoretical");
  CHECK(series[0]["x"] == nlohmann::json::array({6, 10}));
  CHECK(doc["x_label"] == "B (bits)");
}

TEST_CASE("Example 1a trials scatter around K sigma_e^2") {
  ExperimentConfig c;
  double err = 0.0;
  const int trials = 60;
  for (int t = 0; t < trials; ++t) {
    const TrialResult r = run_trial(c, PointSpec{128, 10, 6}, t);
    REQUIRE(r.ok);
    CHECK(r.support_misses == 0);
    CHECK(r.saturations == 0);
    CHECK(r.theory_error_energy == doctest::Approx(10.0 * std::ldexp(1.0, -12) / 6.0));
    err += r.error_energy;
  }
  CHECK(std::abs(err / trials - 4.069e-4) / 4.069e-4 < 0.15);
}

TEST_CASE("at 24 bits a sparse signal is recovered essentially exactly") {
  ExperimentConfig c;
  for (int t = 0; t < 5; ++t) {
    const TrialResult r = run_trial(c, PointSpec{128, 10, 24}, t);
    CHECK(r.error_energy < 1e-10 * r.signal_energy_K);
  }
}

TEST_CASE("folded point at 20 bits is dominated by the folding term") {
  ExperimentConfig c;
  c.scenario = Scenario::folded;
  c.fold.additive_noise_sigma = 1e-4;
  const TrialResult r = run_trial(c, PointSpec{128, 10, 20}, 0);
  CHECK(r.theory_components.folding > r.theory_components.quantization);
  const TrialResult low = run_trial(c, PointSpec{128, 10, 8}, 0);
  CHECK(low.theory_components.folding < low.theory_components.quantization);
}

TEST_CASE("run_point reuses each trial's signal across bit counts") {
  ExperimentConfig c = small_config();
  const auto per_b = run_point(c, 64, 4, {6, 10});
  for (int t = 0; t < c.trials; ++t) {
    CHECK(per_b[0][static_cast<std::size_t>(t)].signal_energy_K == per_b[1][static_cast<std::size_t>(t)].signal_energy_K);
    const TrialResult direct = run_trial(c, PointSpec{64, 4, 10}, t);
    CHECK(direct.error_energy == per_b[1][static_cast<std::size_t>(t)].error_energy);
  }
}

TEST_CASE("aggregation averages energies before the logarithm") {
  ExperimentConfig c;
  std::vector<TrialResult> trials(2);
  trials[0].signal_energy_K = 10.0;
  trials[0].error_energy = 1.0;
  trials[0].theory_error_energy = 1.0;
  trials[0].theory_components.quantization = 1.0;
  trials[1].signal_energy_K = 10.0;
  trials[1].error_energy = 0.01;
  trials[1].theory_error_energy = 1.0;
  trials[1].theory_components.quantization = 1.0;
  const ResultRow energy = aggregate(c, PointSpec{128, 10, 6}, trials);
  CHECK(energy.snr_st_db == doctest::Approx(10.0 * std::log10(20.0 / 1.01)));
  CHECK(energy.snr_th_db == doctest::Approx(10.0));
  CHECK(energy.gap_db == doctest::Approx(energy.snr_st_db - energy.snr_th_db));
  CHECK(energy.in_regime);

  c.snr_average = SnrAverage::db;
  const ResultRow db = aggregate(c, PointSpec{128, 10, 6}, trials);
  CHECK(db.snr_st_db == doctest::Approx(20.0));
}

TEST_CASE("aggregation flags failures and support misses") {
  ExperimentConfig c;
  std::vector<TrialResult> trials(20);
  for (auto& t : trials) {
    t.signal_energy_K = 1.0;
    t.error_energy = 1e-3;
    t.theory_error_energy = 1e-3;
  }
  trials[3].support_misses = 2;
  ResultRow row = aggregate(c, PointSpec{}, trials);
  CHECK(row.support_misses == 1);
  CHECK(row.in_regime);
  trials[4].support_misses = 1;
  row = aggregate(c, PointSpec{}, trials);
  CHECK_FALSE(row.in_regime);

  trials[4].support_misses = 0;
  trials[5].ok = false;
  trials[5].failure = "rank deficient";
  row = aggregate(c, PointSpec{}, trials);
  CHECK(row.failures == 1);
  CHECK(row.failure_messages.size() == 1);
  CHECK_FALSE(row.in_regime);
  CHECK(std::isfinite(row.snr_st_db));
}

TEST_CASE("presets") {
  CHECK(preset("example1").size() == 2);
  CHECK(preset("example2").size() == 3);
  CHECK(preset("example2")[0].M_list == std::vector<Index>{192, 170, 128});
  CHECK(preset("example3").size() == 9);
  CHECK(preset("example4")[0].family == MatrixFamily::bernoulli);
  CHECK(preset("example5")[0].algorithm == Algorithm::iht);
  CHECK(preset("example6")[0].algorithm == Algorithm::bayesian);
  for (const char* name : {"example1", "example2", "example3", "example4", "example5", "example6"})
    for (const ExperimentConfig& c : preset(name)) c.validate();
  CHECK_THROWS_AS(preset("example7"), InvalidSpec);
}

TEST_CASE("floating point normalizes the measurement power") {
  ExperimentConfig c;
  c.mode = ArithmeticMode::floating_point;
  c.measurement_power = 1.0;
  double err = 0.0;
  double th = 0.0;
  for (int t = 0; t < 40; ++t) {
    const TrialResult r = run_trial(c, PointSpec{128, 10, 8}, t);
    REQUIRE(r.ok);
    err += r.error_energy;
    th += r.theory_error_energy;
  }
  CHECK(std::abs(err / th - 1.0) < 0.25);
  CHECK(th / 40.0 == doctest::Approx(10.0 * std::ldexp(1.0, -16) / 6.0).epsilon(0.05));
}

TEST_CASE("scenario and mode names") {
  for (Scenario s : {Scenario::sparse, Scenario::nonsparse, Scenario::folded, Scenario::folded_nonsparse})
    CHECK(parse_scenario(to_string(s)) == s);
  CHECK(parse_matrix_mode("fresh") == MatrixMode::fresh);
  CHECK(parse_snr_average("energy") == SnrAverage::energy);
  CHECK_THROWS_AS(parse_scenario("dense"), InvalidSpec);
  CHECK(scenario_has_tail(Scenario::folded_nonsparse));
  CHECK_FALSE(scenario_has_tail(Scenario::folded));
  CHECK(scenario_is_folded(Scenario::folded));
}

TEST_CASE("bayesian reconstruction keeps weak coefficients and survives near-exact data") {
  const ExperimentConfig c = preset("example6")[0];
  // A trial where pruning before the noise estimate settles dropped a true coefficient.
  const TrialResult weak = run_trial(c, PointSpec{128, 25, 16}, 42);
  CHECK(weak.ok);
  CHECK(weak.support_misses == 0);
  // Trials where the noise estimate reaches rounding level with all columns active.
  for (int t : {12, 13, 42, 94, 95}) {
    const TrialResult r = run_trial(c, PointSpec{128, 5, 24}, t);
    CHECK(r.ok);
    CHECK(r.support_misses == 0);
  }
}
