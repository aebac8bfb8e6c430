#include "ddcid/harness.hpp"
#include "ddcid/potentials.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ddcid;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count_lines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST_CASE("metropolis rule") {
  CHECK(metropolis_accept(-1.0, 1.0, 0.999999));
  CHECK(metropolis_accept(-1e-12, 1e-300, 0.999999));
  CHECK_FALSE(metropolis_accept(1.0, 1e-12, 1e-300));
  CHECK_FALSE(metropolis_accept(1.0, 0.0, 0.0));
  CHECK(metropolis_accept(1.0, 1.0, std::exp(-1.0) - 1e-12));
  CHECK_FALSE(metropolis_accept(1.0, 1.0, std::exp(-1.0) + 1e-12));

  // Empirical acceptance frequency for a fixed uphill move.
  NoiseSource noise(501);
  constexpr int kTrials = 10000;
  for (auto [delta, t] : {std::pair{0.5, 1.0}, std::pair{2.0, 0.7}, std::pair{0.1, 0.05}}) {
    int accepted = 0;
    for (int i = 0; i < kTrials; ++i) accepted += metropolis_accept(delta, t, noise.uniform());
    const double prob = std::exp(-delta / t);
    CHECK(std::abs(accepted - kTrials * prob) < 3.0 * std::sqrt(kTrials * prob * (1 - prob)));
  }
}

TEST_CASE("annealing schedule") {
  AnnealConfig cfg;
  CHECK(cfg.temperature(0.0) == 1.0);
  CHECK(cfg.temperature(0.5) == 0.5);
  cfg.initial_temperature = 4.0;
  CHECK(cfg.temperature(0.25) == 3.0);
  cfg.schedule = [](double r) { return std::exp(-r); };
  CHECK(cfg.temperature(1.0) == doctest::Approx(std::exp(-1.0)));
}

TEST_CASE("simulated annealing on molei") {
  AnnealConfig cfg;
  cfg.iteration_budget = 20000;
  cfg.neighbor_scale = 0.1;
  int good = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    NoiseSource noise(seed);
    const AnnealResult r = simulated_annealing(make_molei(), cfg, noise);
    CHECK(r.best_value == doctest::Approx(make_molei().value(r.best_point)));
    CHECK(r.uphill_accepted > 0);
    good += std::abs(r.best_value) < 1e-2;
  }
  CHECK(good > 5);
}

TEST_CASE("monte carlo descent") {
  const Potential quad(
      "quad", 3, [](const Vector& x) { return Evaluation{0.5 * x.squaredNorm(), x}; },
      [](const Vector&) { return Matrix(Matrix::Identity(3, 3)); }, Box::cube(3, -4, 4));
  NoiseSource noise(503);
  const auto minima = monte_carlo_descent(quad, 10, LocalSearchConfig{}, noise);
  REQUIRE(minima.size() == 1);
  CHECK(minima[0].location.norm() < 1e-6);
  CHECK(minima[0].occurrences == 10);

  int both = 0, shubert_total = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    NoiseSource n(seed);
    both += monte_carlo_descent(make_molei(), 20, LocalSearchConfig{}, n).size() == 2;
    NoiseSource s(seed);
    shubert_total += static_cast<int>(monte_carlo_descent(make_shubert(), 20, LocalSearchConfig{}, s).size());
  }
  CHECK(both > 5);
  CHECK(shubert_total >= 50);  // at least 5 distinct minima per run on average
  CHECK_THROWS_AS((void)monte_carlo_descent(make_molei(), 0, LocalSearchConfig{}, noise),
                  std::invalid_argument);
}

TEST_CASE("white-noise intermittent diffusion baseline") {
  NoiseSource noise(505);
  const RunReport r = intermittent_diffusion(make_molei(), IdConfig{}, LocalSearchConfig{}, noise);
  CHECK(r.attempts.size() == static_cast<std::size_t>(IdConfig{}.cycles));
  CHECK(r.table.size() >= 1);
  for (const CriticalPoint& c : r.table.entries()) CHECK(c.kind == PointKind::minimum);
}

TEST_CASE("benchmark runner") {
  BenchmarkSpec spec;
  spec.problem = "camel";
  spec.config.max_critical_points = 100;
  spec.config.seed = 1;
  spec.repetitions = 2;
  const BenchmarkReport r = run_benchmark(spec);
  CHECK(r.repetitions.size() == 2);
  CHECK(r.repetitions[0].seed == repetition_seed(1, 0));
  CHECK(r.repetitions[1].seed == repetition_seed(1, 1));
  CHECK(r.reference_value == known_global_minimum("camel"));
  CHECK(*r.best_value == doctest::Approx(-1.0316284535));
  CHECK(r.global_hits == 2);
  CHECK(r.distinct_minima == 6);

  spec.repetitions = 0;
  CHECK_THROWS_AS((void)run_benchmark(spec), std::invalid_argument);
  spec.repetitions = 1;
  spec.problem = "unknown";
  CHECK_THROWS_AS((void)run_benchmark(spec), std::invalid_argument);

  for (Method m : {Method::id_white, Method::mc_descent, Method::sim_anneal}) {
    BenchmarkSpec b;
    b.problem = "molei";
    b.method = m;
    b.anneal.iteration_budget = 2000;
    const BenchmarkReport br = run_benchmark(b);
    CHECK(br.best_value.has_value());
    CHECK(method_from_string(to_string(m)) == m);
  }
  CHECK_THROWS_AS((void)method_from_string("newton"), std::invalid_argument);
  CHECK(format_from_string("csv") == ReportFormat::csv);
  CHECK_THROWS_AS((void)format_from_string("xml"), std::invalid_argument);
}

TEST_CASE("known global minima") {
  CHECK(*known_global_minimum("lj:13") == -44.326801);
  CHECK(*known_global_minimum("morse:11:3") == -37.930817);
  CHECK(*known_global_minimum("rosenbrock:50") == 0.0);
  CHECK_FALSE(known_global_minimum("lj:40").has_value());
}

TEST_CASE("json reports are reproducible and round trip") {
  BenchmarkSpec spec;
  spec.problem = "molei";
  spec.config.max_critical_points = 6;
  spec.config.seed = 9;
  spec.config.diffusion.record_trace = true;
  const std::string a = benchmark_report_to_json(run_benchmark(spec), false);
  const std::string b = benchmark_report_to_json(run_benchmark(spec), false);
  CHECK(a == b);
  CHECK(a.find("\"timing\"") == std::string::npos);
  CHECK(a.find("\"config\"") != std::string::npos);
  CHECK(a.find("\"attempts\"") != std::string::npos);

  ExplorationConfig cfg = spec.config;
  const RunReport run = explore(make_molei(), cfg);
  const std::string text = run_report_to_json(run, true);
  const RunReport back = run_report_from_json(text);
  CHECK(back.table == run.table);
  CHECK(back.attempts.size() == run.attempts.size());
  CHECK(back.seconds_total == run.seconds_total);
  CHECK(run_report_to_json(back, true) == text);
}

TEST_CASE("csv table") {
  CHECK(table_to_csv(CriticalPointTable(0.1), 2) ==
        "x1,x2,g,grad_norm,n_plus,n_zero,n_minus,kind,occurrences\n");
  CriticalPointTable t(0.1);
  CriticalPoint c;
  c.location = Vector{{0.1, -0.25}};
  c.value = 1.0 / 3.0;
  c.gradient_norm = 0.0;
  c.inertia = Inertia{1, 0, 1};
  c.kind = PointKind::saddle;
  c.occurrences = 4;
  t.record(c);
  const std::string csv = table_to_csv(t, 2);
  CHECK(csv.find("0.10000000000000001,-0.25,0.33333333333333331,0,1,0,1,saddle,4\n") !=
        std::string::npos);

  BenchmarkSpec spec;
  spec.problem = "camel";
  spec.config.max_critical_points = 100;
  spec.config.seed = 4;
  const BenchmarkReport r = run_benchmark(spec);
  CHECK(count_lines(table_to_csv(r.merged, 2)) == r.merged.size() + 1);
}

TEST_CASE("emit report writes files and honours the output directory override") {
  const auto dir = std::filesystem::temp_directory_path() / "ddcid_emit_test";
  std::filesystem::create_directories(dir);
  BenchmarkSpec spec;
  spec.problem = "molei";
  spec.config.max_critical_points = 4;
  const BenchmarkReport r = run_benchmark(spec);

  const std::string json_path = (dir / "r.json").string();
  emit_report(r, ReportFormat::json, json_path, false);
  CHECK(read_file(json_path) == benchmark_report_to_json(r, false) + "\n");

  ::setenv("DDCID_OUTPUT_DIR", dir.string().c_str(), 1);
  emit_report(r, ReportFormat::csv, "table.csv");
  ::unsetenv("DDCID_OUTPUT_DIR");
  CHECK(read_file((dir / "table.csv").string()) == table_to_csv(r.merged, 2));

  CHECK_THROWS_AS(emit_report(r, ReportFormat::json, (dir / "missing" / "x.json").string()),
                  std::runtime_error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("trace csv") {
  ExplorationConfig cfg;
  cfg.max_critical_points = 4;
  cfg.diffusion.record_trace = true;
  const RunReport r = explore(make_molei(), cfg);
  const std::string csv = traces_to_csv(r, 2);
  CHECK(csv.rfind("attempt,step,x1,x2,g,G,n_plus,n_zero,n_minus\n", 0) == 0);
  std::size_t points = 0;
  for (const AttemptLog& a : r.attempts) points += a.trace.size();
  CHECK(points > 0);
  CHECK(count_lines(csv) == points + 1);
}
