#include "ddcid/harness.hpp"

#include "ddcid/potentials.hpp"
#include "ddcid/spectral.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace ddcid {

using nlohmann::json;

std::string_view to_string(Method m) {
  switch (m) {
    case Method::ddcid: return "ddcid";
    case Method::id_white: return "id_white";
    case Method::mc_descent: return "mc_descent";
    case Method::sim_anneal: return "sim_anneal";
  }
  return "?";
}

Method method_from_string(std::string_view s) {
  if (s == "ddcid") return Method::ddcid;
  if (s == "id_white") return Method::id_white;
  if (s == "mc_descent") return Method::mc_descent;
  if (s == "sim_anneal") return Method::sim_anneal;
  throw std::invalid_argument("unknown method: " + std::string(s));
}

std::string_view to_string(ReportFormat f) { return f == ReportFormat::json ? "json" : "csv"; }

ReportFormat format_from_string(std::string_view s) {
  if (s == "json") return ReportFormat::json;
  if (s == "csv") return ReportFormat::csv;
  throw std::invalid_argument("unknown report format: " + std::string(s));
}

bool metropolis_accept(double delta, double temperature, double u) {
  if (delta < 0.0) return true;
  if (!(temperature > 0.0)) return false;
  return u < std::exp(-delta / temperature);
}

double AnnealConfig::temperature(double ratio) const {
  if (schedule) return schedule(ratio);
  return initial_temperature * (1.0 - ratio);
}

AnnealResult simulated_annealing(const Potential& p, const AnnealConfig& cfg, NoiseSource& noise,
                                 const std::optional<Box>& region) {
  if (cfg.iteration_budget < 1 || !(cfg.neighbor_scale > 0.0)) {
    throw std::invalid_argument("annealing needs a positive budget and neighbor scale");
  }
  const Box box = region ? *region : p.search_region();
  AnnealResult out;
  Vector x = noise.point_in(box);
  double gx = p.value(x);
  out.best_point = x;
  out.best_value = gx;
  for (int k = 0; k < cfg.iteration_budget; ++k) {
    const double t = cfg.temperature(static_cast<double>(k) / cfg.iteration_budget);
    const Vector trial = x + cfg.neighbor_scale * noise.normal(x.size());
    const double u = noise.uniform();
    if (!box.contains(trial)) continue;
    double gt = 0.0;
    try {
      gt = p.value(trial);
    } catch (const EvaluationError&) {
      continue;
    }
    const double delta = gt - gx;
    if (!metropolis_accept(delta, t, u)) continue;
    ++out.accepted;
    if (delta >= 0.0) ++out.uphill_accepted;
    x = trial;
    gx = gt;
    if (gx < out.best_value) {
      out.best_value = gx;
      out.best_point = x;
    }
  }
  out.final_point = x;
  return out;
}

namespace {

LocalSearchResult polished_descent(const Potential& p, const Vector& x0,
                                   const LocalSearchConfig& cfg, double gradient_tol) {
  LocalSearchResult ls = gradient_descent(p, x0, cfg);
  for (int k = 0; k < 3 && ls.outcome == Outcome::converged && ls.final_gradient_norm > gradient_tol;
       ++k) {
    LocalSearchResult more = gradient_descent(p, ls.final_point, cfg);
    more.iterations += ls.iterations;
    ls = std::move(more);
  }
  // Descent alone stalls at a roundoff floor on steep surfaces; finish with Newton steps
  // while they keep reducing the gradient.
  for (int k = 0; k < 5 && ls.final_gradient_norm > gradient_tol; ++k) {
    try {
      const Vector grad = p.gradient(ls.final_point);
      const Vector next = ls.final_point - newton_solve(p.hessian(ls.final_point), grad);
      const Evaluation e = p.evaluate(next);
      const double slack = 1e-9 * (1.0 + std::abs(ls.final_value));
      if (!(e.gradient.norm() < ls.final_gradient_norm) || !(e.value <= ls.final_value + slack)) break;
      ls.final_point = next;
      ls.final_value = e.value;
      ls.final_gradient_norm = e.gradient.norm();
    } catch (const EvaluationError&) {
      break;
    }
  }
  return ls;
}

std::optional<CriticalPoint> classify_minimum(const Potential& p, const LocalSearchResult& ls,
                                              const LocalSearchConfig& cfg, double gradient_tol) {
  if (!(ls.final_gradient_norm <= gradient_tol)) return std::nullopt;
  try {
    CriticalPoint cp = classify(p, ls.final_point, cfg.zero_tolerance, gradient_tol);
    if (cp.kind == PointKind::minimum) return cp;
  } catch (const EvaluationError&) {
  }
  return std::nullopt;
}

}  // namespace

std::vector<CriticalPoint> monte_carlo_descent(const Potential& p, int starts,
                                               const LocalSearchConfig& cfg, NoiseSource& noise,
                                               double critical_gradient_tol,
                                               const std::optional<Box>& region) {
  if (starts < 1) throw std::invalid_argument("monte_carlo_descent needs at least one start");
  const Box box = region ? *region : p.search_region();
  CriticalPointTable table(1e-4 * box.diameter());
  for (int s = 0; s < starts; ++s) {
    const Vector x0 = noise.point_in(box);
    try {
      const LocalSearchResult ls = polished_descent(p, x0, cfg, critical_gradient_tol);
      if (auto cp = classify_minimum(p, ls, cfg, critical_gradient_tol)) table.record(*cp);
    } catch (const EvaluationError&) {
    }
  }
  return table.entries();
}

RunReport intermittent_diffusion(const Potential& p, const IdConfig& id,
                                 const LocalSearchConfig& local, NoiseSource& noise,
                                 double critical_gradient_tol) {
  if (id.cycles < 1 || !(id.step > 0.0) || id.max_phase_steps < 1) {
    throw std::invalid_argument("intermittent diffusion needs positive cycles, step and phase length");
  }
  const Box& box = p.search_region();
  RunReport report;
  report.problem = p.name();
  report.table = CriticalPointTable(1e-4 * box.diameter());
  Vector x = noise.point_in(box);
  for (int c = 0; c < id.cycles; ++c) {
    AttemptLog log;
    log.kind = c == 0 ? AttemptLog::Kind::initial : AttemptLog::Kind::from_minimum;
    if (c > 0) {
      const double sigma = id.max_sigma * noise.uniform();
      const int steps = 1 + static_cast<int>(noise.index(static_cast<std::size_t>(id.max_phase_steps)));
      try {
        for (int k = 0; k < steps; ++k) {
          x = white_noise_id_step(p, x, id.step, sigma, noise);
          ++log.diffusive_steps;
        }
      } catch (const EvaluationError&) {
        log.kind = AttemptLog::Kind::fresh_start;
        x = noise.point_in(box);
      }
      if (!box.contains(x)) {
        log.kind = AttemptLog::Kind::fresh_start;
        x = noise.point_in(box);
      }
    }
    try {
      const LocalSearchResult ls = polished_descent(p, x, local, critical_gradient_tol);
      log.local_iterations = ls.iterations;
      log.search_outcome = std::string(to_string(ls.outcome));
      x = ls.final_point;
      if (auto cp = classify_minimum(p, ls, local, critical_gradient_tol)) {
        log.recorded = static_cast<long>(report.table.record(*cp));
        log.recorded_kind = "minimum";
      }
    } catch (const EvaluationError&) {
      log.search_outcome = "evaluation_error";
      x = noise.point_in(box);
    }
    report.attempts.push_back(std::move(log));
  }
  report.recompute_statistics();
  return report;
}

std::uint64_t repetition_seed(std::uint64_t seed, int repetition) {
  return derive_seed(seed, static_cast<std::uint64_t>(repetition));
}

std::optional<double> known_global_minimum(const std::string& key) {
  static const std::map<std::string, double> table = {
      {"molei", 0.0},
      {"shubert", -186.730909},
      {"biggs", 0.0},
      {"camel", -1.031628},
      {"boggs", 0.0},
      {"lj:2", -1.0},
      {"lj:3", -3.0},
      {"lj:4", -6.0},
      {"lj:5", -9.103852},
      {"lj:6", -12.712062},
      {"lj:7", -16.505384},
      {"lj:8", -19.821489},
      {"lj:9", -24.113360},
      {"lj:10", -28.422532},
      {"lj:11", -32.765970},
      {"lj:12", -37.967600},
      {"lj:13", -44.326801},
      {"lj:14", -47.845157},
      {"morse:11:3", -37.930817},
      {"morse:11:6", -31.521880},
      {"morse:11:10", -30.265230},
      {"morse:11:14", -29.596054},
  };
  if (auto it = table.find(key); it != table.end()) return it->second;
  if (key.rfind("rosenbrock:", 0) == 0) return 0.0;
  return std::nullopt;
}

BenchmarkReport run_benchmark(const BenchmarkSpec& spec) {
  if (spec.repetitions < 1) throw std::invalid_argument("repetitions must be at least 1");
  const Potential base = make_problem(spec.problem);
  const Potential p = spec.config.search_region ? base.with_region(*spec.config.search_region) : base;

  BenchmarkReport out;
  out.spec = spec;
  out.reference_value = spec.reference_value ? spec.reference_value
                                             : known_global_minimum(p.name());
  out.merged = CriticalPointTable(spec.config.dedup_radius >= 0.0
                                      ? spec.config.dedup_radius
                                      : 1e-4 * p.search_region().diameter());

  for (int r = 0; r < spec.repetitions; ++r) {
    RepetitionResult rep;
    rep.seed = repetition_seed(spec.config.seed, r);
    switch (spec.method) {
      case Method::ddcid: {
        ExplorationConfig cfg = spec.config;
        cfg.seed = rep.seed;
        rep.run = explore(p, cfg);
        break;
      }
      case Method::id_white: {
        NoiseSource noise(rep.seed);
        rep.run = intermittent_diffusion(p, spec.id, spec.config.local, noise,
                                         spec.config.critical_gradient_tol);
        break;
      }
      case Method::mc_descent: {
        NoiseSource noise(rep.seed);
        rep.run.problem = p.name();
        rep.run.table = CriticalPointTable(1e-4 * p.search_region().diameter());
        for (const CriticalPoint& cp : monte_carlo_descent(p, spec.mc_starts, spec.config.local,
                                                           noise, spec.config.critical_gradient_tol)) {
          rep.run.table.record(cp);
        }
        break;
      }
      case Method::sim_anneal: {
        NoiseSource noise(rep.seed);
        const AnnealResult a = simulated_annealing(p, spec.anneal, noise);
        rep.run.problem = p.name();
        rep.best_value = a.best_value;
        rep.best_point = a.best_point;
        break;
      }
    }
    rep.run.seed = rep.seed;
    if (auto best = rep.run.best_minimum()) {
      rep.best_value = best->value;
      rep.best_point = best->location;
    }
    for (const CriticalPoint& cp : rep.run.table.entries()) out.merged.record(cp);
    if (rep.best_value) {
      if (!out.best_value || *rep.best_value < *out.best_value) {
        out.best_value = rep.best_value;
        out.best_point = rep.best_point;
      }
      if (out.reference_value && std::abs(*rep.best_value - *out.reference_value) <= spec.hit_tolerance) {
        ++out.global_hits;
      }
    }
    out.repetitions.push_back(std::move(rep));
  }
  out.distinct_minima = out.merged.count(PointKind::minimum);
  return out;
}

// Serialization ----------------------------------------------------------------

namespace {

json vec_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Vector json_vec(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

json inertia_json(const Inertia& in) { return json::array({in.plus, in.zero, in.minus}); }

Inertia json_inertia(const json& j) {
  return Inertia{j.at(0).get<int>(), j.at(1).get<int>(), j.at(2).get<int>()};
}

json point_json(const CriticalPoint& c) {
  return {{"location", vec_json(c.location)},  {"value", c.value},
          {"gradient_norm", c.gradient_norm},  {"inertia", inertia_json(c.inertia)},
          {"spectrum", vec_json(c.spectrum)},  {"kind", to_string(c.kind)},
          {"occurrences", c.occurrences}};
}

CriticalPoint json_point(const json& j) {
  CriticalPoint c;
  c.location = json_vec(j.at("location"));
  c.value = j.at("value").get<double>();
  c.gradient_norm = j.at("gradient_norm").get<double>();
  c.inertia = json_inertia(j.at("inertia"));
  c.spectrum = json_vec(j.at("spectrum"));
  c.kind = point_kind_from_string(j.at("kind").get<std::string>());
  c.occurrences = j.at("occurrences").get<int>();
  return c;
}

AttemptLog::Kind attempt_kind_from_string(const std::string& s) {
  for (auto k : {AttemptLog::Kind::initial, AttemptLog::Kind::from_minimum,
                 AttemptLog::Kind::from_saddle, AttemptLog::Kind::fresh_start}) {
    if (to_string(k) == s) return k;
  }
  throw std::invalid_argument("unknown attempt kind: " + s);
}

json attempt_json(const AttemptLog& a) {
  json trace = json::array();
  for (const TracePoint& t : a.trace) {
    trace.push_back({{"step", t.step}, {"x", vec_json(t.x)}, {"value", t.value},
                     {"aux", t.aux}, {"inertia", inertia_json(t.inertia)}});
  }
  return {{"kind", to_string(a.kind)},
          {"origin", a.origin},
          {"diffusive_steps", a.diffusive_steps},
          {"local_iterations", a.local_iterations},
          {"escape_status", a.escape_status},
          {"search_outcome", a.search_outcome},
          {"recorded", a.recorded},
          {"recorded_kind", a.recorded_kind},
          {"restarts", a.restarts},
          {"trace", std::move(trace)}};
}

AttemptLog json_attempt(const json& j) {
  AttemptLog a;
  a.kind = attempt_kind_from_string(j.at("kind").get<std::string>());
  a.origin = j.at("origin").get<long>();
  a.diffusive_steps = j.at("diffusive_steps").get<int>();
  a.local_iterations = j.at("local_iterations").get<int>();
  a.escape_status = j.at("escape_status").get<std::string>();
  a.search_outcome = j.at("search_outcome").get<std::string>();
  a.recorded = j.at("recorded").get<long>();
  a.recorded_kind = j.at("recorded_kind").get<std::string>();
  a.restarts = j.at("restarts").get<int>();
  for (const json& t : j.at("trace")) {
    a.trace.push_back({t.at("step").get<int>(), json_vec(t.at("x")), t.at("value").get<double>(),
                       t.at("aux").get<double>(), json_inertia(t.at("inertia"))});
  }
  return a;
}

json run_json(const RunReport& r, bool include_timing) {
  json table = json::array();
  for (const CriticalPoint& c : r.table.entries()) table.push_back(point_json(c));
  json attempts = json::array();
  for (const AttemptLog& a : r.attempts) attempts.push_back(attempt_json(a));
  json j = {{"problem", r.problem},
            {"seed", r.seed},
            {"dedup_radius", r.table.dedup_radius()},
            {"table", std::move(table)},
            {"attempts", std::move(attempts)},
            {"mean_diffusive_steps", r.mean_diffusive_steps},
            {"mean_local_iterations", r.mean_local_iterations}};
  if (include_timing) {
    j["timing"] = {{"escape", r.seconds_escape}, {"local", r.seconds_local},
                   {"total", r.seconds_total}};
  }
  return j;
}

json box_json(const Box& b) { return {{"lower", vec_json(b.lower)}, {"upper", vec_json(b.upper)}}; }

json config_json(const BenchmarkSpec& s) {
  const ExplorationConfig& c = s.config;
  const Tolerances& t = c.local.tolerances;
  return {
      {"problem", s.problem},
      {"method", to_string(s.method)},
      {"repetitions", s.repetitions},
      {"seed", c.seed},
      {"budget", c.max_critical_points},
      {"search_region", c.search_region ? box_json(*c.search_region) : json(nullptr)},
      {"dedup_radius", c.dedup_radius},
      {"max_restarts", c.max_restarts},
      {"critical_gradient_tol", c.critical_gradient_tol},
      {"divergence_factor", c.divergence_factor},
      {"max_polish", c.max_polish},
      {"local",
       {{"atol", t.atol},
        {"rtol", t.rtol},
        {"max_iterations", t.max_iterations},
        {"armijo", c.local.armijo},
        {"damping_limit", c.local.damping_limit},
        {"fallback_steps", c.local.fallback_steps},
        {"zero_tolerance", c.local.zero_tolerance}}},
      {"diffusion",
       {{"alpha", c.diffusion.alpha},
        {"max_diffusive_steps", c.diffusion.max_diffusive_steps},
        {"multiplicity_tol", c.diffusion.multiplicity_tol},
        {"zero_tolerance", c.diffusion.zero_tolerance},
        {"absolute_value_acceptance", c.diffusion.absolute_value_acceptance}}},
      {"anneal",
       {{"initial_temperature", s.anneal.initial_temperature},
        {"schedule", s.anneal.schedule ? "custom" : "linear"},
        {"neighbor_scale", s.anneal.neighbor_scale},
        {"iteration_budget", s.anneal.iteration_budget}}},
      {"id_white",
       {{"cycles", s.id.cycles},
        {"step", s.id.step},
        {"max_sigma", s.id.max_sigma},
        {"max_phase_steps", s.id.max_phase_steps}}},
      {"mc_starts", s.mc_starts},
      {"hit_tolerance", s.hit_tolerance},
  };
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string resolve_output_path(const std::string& path) {
  const std::filesystem::path p(path);
  const char* dir = std::getenv("DDCID_OUTPUT_DIR");
  if (p.is_relative() && dir != nullptr && *dir != '\0') return (std::filesystem::path(dir) / p).string();
  return path;
}

}  // namespace

std::string run_report_to_json(const RunReport& r, bool include_timing) {
  return run_json(r, include_timing).dump(2);
}

RunReport run_report_from_json(const std::string& text) {
  const json j = json::parse(text);
  RunReport r;
  r.problem = j.at("problem").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.table = CriticalPointTable(j.at("dedup_radius").get<double>());
  for (const json& c : j.at("table")) r.table.record(json_point(c));
  for (const json& a : j.at("attempts")) r.attempts.push_back(json_attempt(a));
  r.mean_diffusive_steps = j.at("mean_diffusive_steps").get<double>();
  r.mean_local_iterations = j.at("mean_local_iterations").get<double>();
  if (j.contains("timing")) {
    const json& t = j.at("timing");
    r.seconds_escape = t.at("escape").get<double>();
    r.seconds_local = t.at("local").get<double>();
    r.seconds_total = t.at("total").get<double>();
  }
  return r;
}

std::string benchmark_report_to_json(const BenchmarkReport& r, bool include_timing) {
  json reps = json::array();
  for (const RepetitionResult& rep : r.repetitions) {
    json j = run_json(rep.run, include_timing);
    j["best_value"] = optional_json(rep.best_value);
    j["best_point"] = vec_json(rep.best_point);
    reps.push_back(std::move(j));
  }
  json merged = json::array();
  for (const CriticalPoint& c : r.merged.entries()) merged.push_back(point_json(c));
  const json out = {{"config", config_json(r.spec)},
                    {"best_value", optional_json(r.best_value)},
                    {"best_point", vec_json(r.best_point)},
                    {"reference_value", optional_json(r.reference_value)},
                    {"global_hits", r.global_hits},
                    {"distinct_minima", r.distinct_minima},
                    {"merged_table", std::move(merged)},
                    {"repetitions", std::move(reps)}};
  return out.dump(2);
}

std::string table_to_csv(const CriticalPointTable& t, Eigen::Index dimension) {
  std::ostringstream os;
  for (Eigen::Index i = 0; i < dimension; ++i) os << 'x' << (i + 1) << ',';
  os << "g,grad_norm,n_plus,n_zero,n_minus,kind,occurrences\n";
  for (const CriticalPoint& c : t.entries()) {
    for (Eigen::Index i = 0; i < c.location.size(); ++i) os << fmt(c.location[i]) << ',';
    os << fmt(c.value) << ',' << fmt(c.gradient_norm) << ',' << c.inertia.plus << ','
       << c.inertia.zero << ',' << c.inertia.minus << ',' << to_string(c.kind) << ','
       << c.occurrences << '\n';
  }
  return os.str();
}

std::string traces_to_csv(const RunReport& r, Eigen::Index dimension) {
  std::ostringstream os;
  os << "attempt,step,";
  for (Eigen::Index i = 0; i < dimension; ++i) os << 'x' << (i + 1) << ',';
  os << "g,G,n_plus,n_zero,n_minus\n";
  for (std::size_t a = 0; a < r.attempts.size(); ++a) {
    for (const TracePoint& t : r.attempts[a].trace) {
      os << a << ',' << t.step << ',';
      for (Eigen::Index i = 0; i < t.x.size(); ++i) os << fmt(t.x[i]) << ',';
      os << fmt(t.value) << ',' << fmt(t.aux) << ',' << t.inertia.plus << ',' << t.inertia.zero
         << ',' << t.inertia.minus << '\n';
    }
  }
  return os.str();
}

void emit_report(const BenchmarkReport& r, ReportFormat format, const std::string& path,
                 bool include_timing) {
  const std::string target = resolve_output_path(path);
  std::ofstream out(target, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + target);
  if (format == ReportFormat::json) {
    out << benchmark_report_to_json(r, include_timing) << '\n';
  } else {
    const Eigen::Index n = make_problem(r.spec.problem).dimension();
    out << table_to_csv(r.merged, n);
  }
  if (!out.flush()) throw std::runtime_error("failed writing output file: " + target);
}

}  // namespace ddcid
