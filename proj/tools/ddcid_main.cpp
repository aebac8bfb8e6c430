// Command-line front end: benchmark runs, problem listing and diffusion traces.

#include "ddcid/harness.hpp"
#include "ddcid/potentials.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

std::string output_path(const std::string& path) {
  const char* dir = std::getenv("DDCID_OUTPUT_DIR");
  if (dir && *dir && std::filesystem::path(path).is_relative()) {
    return (std::filesystem::path(dir) / path).string();
  }
  return path;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Critical-point exploration by colored intermittent diffusion"};
  app.require_subcommand(1);

  std::string problem;
  int budget = 20;
  std::uint64_t seed = 0;
  std::string method = "ddcid";
  int reps = 1;
  std::string out;
  std::string format = "json";
  bool no_timing = false;
  int mc_starts = 20;

  auto* run = app.add_subcommand("run", "Run a benchmark and write a JSON or CSV report");
  run->add_option("--problem", problem, "Problem key (see list-problems)")->required();
  run->add_option("--budget", budget, "Attempts per run")->check(CLI::PositiveNumber);
  run->add_option("--seed", seed, "Base seed");
  run->add_option("--method", method, "ddcid | id_white | mc_descent | sim_anneal")
      ->check(CLI::IsMember({"ddcid", "id_white", "mc_descent", "sim_anneal"}));
  run->add_option("--reps", reps, "Repetitions")->check(CLI::PositiveNumber);
  run->add_option("--out", out, "Output path (stdout summary only when omitted)");
  run->add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  run->add_flag("--no-timing", no_timing, "Omit wall-clock fields from JSON");
  run->add_option("--mc-starts", mc_starts, "Random starts for mc_descent")
      ->check(CLI::PositiveNumber);

  auto* list = app.add_subcommand("list-problems", "List registry keys");

  std::string trace_out;
  auto* trace = app.add_subcommand("trace", "Dump diffusion trajectories as CSV");
  trace->add_option("--problem", problem, "Problem key")->required();
  trace->add_option("--seed", seed, "Seed");
  trace->add_option("--budget", budget, "Attempts")->check(CLI::PositiveNumber);
  trace->add_option("--out", trace_out, "Output CSV path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      for (const auto& info : ddcid::list_problems()) {
        std::cout << info.key << "\t" << info.description << "\n";
      }
      return 0;
    }

    if (run->parsed()) {
      ddcid::BenchmarkSpec spec;
      spec.problem = problem;
      spec.method = ddcid::method_from_string(method);
      spec.repetitions = reps;
      spec.config.max_critical_points = budget;
      spec.config.seed = seed;
      spec.mc_starts = mc_starts;
      const ddcid::BenchmarkReport report = ddcid::run_benchmark(spec);

      std::cout << report.spec.problem << ": " << report.merged.size() << " distinct critical points, "
                << report.distinct_minima << " minima";
      if (report.best_value) std::cout << ", best " << *report.best_value;
      if (report.reference_value) std::cout << ", hits " << report.global_hits << "/" << reps;
      std::cout << "\n";
      if (!out.empty()) {
        ddcid::emit_report(report, ddcid::format_from_string(format), out, !no_timing);
      }
      return 0;
    }

    if (trace->parsed()) {
      const ddcid::Potential p = ddcid::make_problem(problem);
      ddcid::ExplorationConfig cfg;
      cfg.max_critical_points = budget;
      cfg.seed = seed;
      cfg.diffusion.record_trace = true;
      const ddcid::RunReport r = ddcid::explore(p, cfg);
      const std::string path = output_path(trace_out);
      std::ofstream os(path);
      if (!os) throw std::runtime_error("cannot open output file: " + path);
      os << ddcid::traces_to_csv(r, p.dimension());
      if (!os.flush()) throw std::runtime_error("failed writing output file: " + path);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
