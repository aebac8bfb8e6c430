#pragma once

#include "ddcid/diffusion.hpp"
#include "ddcid/explorer.hpp"
#include "ddcid/local_search.hpp"
#include "ddcid/potential.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ddcid {

enum class Method { ddcid, id_white, mc_descent, sim_anneal };
enum class ReportFormat { json, csv };

std::string_view to_string(Method m);
Method method_from_string(std::string_view s);
std::string_view to_string(ReportFormat f);
ReportFormat format_from_string(std::string_view s);

/// Metropolis rule: downhill (delta < 0) always accepted, otherwise accepted when
/// u < exp(-delta / T).
bool metropolis_accept(double delta, double temperature, double u);

struct AnnealConfig {
  double initial_temperature = 1.0;
  /// Temperature as a function of the iteration ratio r in [0, 1); empty means T0·(1 − r).
  std::function<double(double)> schedule;
  double neighbor_scale = 0.1;
  int iteration_budget = 20000;

  [[nodiscard]] double temperature(double ratio) const;
};

struct AnnealResult {
  Vector best_point;
  double best_value = 0.0;
  Vector final_point;
  int accepted = 0;
  int uphill_accepted = 0;
};

/// Random-walk simulated annealing from a uniform point of the region.
AnnealResult simulated_annealing(const Potential& p, const AnnealConfig& cfg, NoiseSource& noise,
                                 const std::optional<Box>& region = std::nullopt);

/// Gradient descent from `starts` uniform random points; returns the distinct minima reached.
std::vector<CriticalPoint> monte_carlo_descent(const Potential& p, int starts,
                                               const LocalSearchConfig& cfg, NoiseSource& noise,
                                               double critical_gradient_tol = 1e-6,
                                               const std::optional<Box>& region = std::nullopt);

/// White-noise intermittent diffusion baseline: noise-on phases of random length and
/// random amplitude alternate with gradient descent to a local minimum.
struct IdConfig {
  int cycles = 20;
  double step = 1e-2;
  double max_sigma = 1.0;
  int max_phase_steps = 100;
};

RunReport intermittent_diffusion(const Potential& p, const IdConfig& id,
                                 const LocalSearchConfig& local, NoiseSource& noise,
                                 double critical_gradient_tol = 1e-6);

struct BenchmarkSpec {
  std::string problem;
  Method method = Method::ddcid;
  ExplorationConfig config;
  int repetitions = 1;
  AnnealConfig anneal;
  IdConfig id;
  int mc_starts = 20;
  /// Falls back to known_global_minimum(problem) when unset.
  std::optional<double> reference_value;
  double hit_tolerance = 1e-2;
};

struct RepetitionResult {
  std::uint64_t seed = 0;
  RunReport run;
  std::optional<double> best_value;
  Vector best_point;
};

struct BenchmarkReport {
  BenchmarkSpec spec;
  std::vector<RepetitionResult> repetitions;
  std::optional<double> best_value;
  Vector best_point;
  std::size_t distinct_minima = 0;
  int global_hits = 0;
  std::optional<double> reference_value;
  /// All repetitions' tables merged by repeated record.
  CriticalPointTable merged;
};

/// Seed used for repetition r of a run seeded with `seed`.
std::uint64_t repetition_seed(std::uint64_t seed, int repetition);

/// Tabulated global minimum for registry keys that have one.
std::optional<double> known_global_minimum(const std::string& key);

BenchmarkReport run_benchmark(const BenchmarkSpec& spec);

// Serialization ----------------------------------------------------------------

/// JSON for one run; timing fields are omitted when include_timing is false.
std::string run_report_to_json(const RunReport& r, bool include_timing = true);
RunReport run_report_from_json(const std::string& text);

std::string benchmark_report_to_json(const BenchmarkReport& r, bool include_timing = true);

/// Columns x1..xn, g, grad_norm, n_plus, n_zero, n_minus, kind, occurrences.
std::string table_to_csv(const CriticalPointTable& t, Eigen::Index dimension);

/// Diffusion trajectories: attempt, step, x1..xn, g, G, n_plus, n_zero, n_minus.
std::string traces_to_csv(const RunReport& r, Eigen::Index dimension);

/// Writes JSON (full report) or CSV (merged table) to path; throws std::runtime_error on I/O failure.
void emit_report(const BenchmarkReport& r, ReportFormat format, const std::string& path,
                 bool include_timing = true);

}  // namespace ddcid
