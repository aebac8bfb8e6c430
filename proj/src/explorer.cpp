#include "ddcid/explorer.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <stdexcept>

namespace ddcid {

std::string_view to_string(PointKind k) {
  switch (k) {
    case PointKind::minimum: return "minimum";
    case PointKind::saddle: return "saddle";
    case PointKind::maximum: return "maximum";
    case PointKind::degenerate: return "degenerate";
  }
  return "?";
}

PointKind point_kind_from_string(std::string_view s) {
  if (s == "minimum") return PointKind::minimum;
  if (s == "saddle") return PointKind::saddle;
  if (s == "maximum") return PointKind::maximum;
  if (s == "degenerate") return PointKind::degenerate;
  throw std::invalid_argument("unknown point kind: " + std::string(s));
}

std::string_view to_string(AttemptLog::Kind k) {
  switch (k) {
    case AttemptLog::Kind::initial: return "initial";
    case AttemptLog::Kind::from_minimum: return "from_minimum";
    case AttemptLog::Kind::from_saddle: return "from_saddle";
    case AttemptLog::Kind::fresh_start: return "fresh_start";
  }
  return "?";
}

PointKind kind_of(const Inertia& in) {
  if (in.zero > 0) return PointKind::degenerate;
  if (in.minus == 0) return PointKind::minimum;
  if (in.plus == 0) return PointKind::maximum;
  return PointKind::saddle;
}

std::size_t CriticalPointTable::record(const CriticalPoint& cp) {
  if (auto hit = find(cp.location, radius_)) {
    CriticalPoint& e = entries_[*hit];
    const int seen = e.occurrences + cp.occurrences;
    if (cp.gradient_norm < e.gradient_norm) e = cp;
    e.occurrences = seen;
    return *hit;
  }
  entries_.push_back(cp);
  return entries_.size() - 1;
}

std::optional<std::size_t> CriticalPointTable::find(const Vector& x, double radius) const {
  std::optional<std::size_t> best;
  double best_dist = radius;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const double dist = (entries_[i].location - x).norm();
    if (dist <= best_dist) {
      best = i;
      best_dist = dist;
    }
  }
  return best;
}

std::size_t CriticalPointTable::count(PointKind k) const {
  return static_cast<std::size_t>(std::count_if(
      entries_.begin(), entries_.end(), [k](const CriticalPoint& c) { return c.kind == k; }));
}

bool operator==(const CriticalPointTable& a, const CriticalPointTable& b) {
  if (a.radius_ != b.radius_ || a.entries_.size() != b.entries_.size()) return false;
  for (std::size_t i = 0; i < a.entries_.size(); ++i) {
    const CriticalPoint& x = a.entries_[i];
    const CriticalPoint& y = b.entries_[i];
    if (x.location != y.location || x.value != y.value || x.gradient_norm != y.gradient_norm ||
        !(x.inertia == y.inertia) || x.spectrum != y.spectrum || x.kind != y.kind ||
        x.occurrences != y.occurrences) {
      return false;
    }
  }
  return true;
}

void RunReport::recompute_statistics() {
  double diff = 0.0;
  int escapes = 0;
  double local = 0.0;
  for (const AttemptLog& a : attempts) {
    if (a.kind == AttemptLog::Kind::from_minimum || a.kind == AttemptLog::Kind::from_saddle) {
      diff += a.diffusive_steps;
      ++escapes;
    }
    local += a.local_iterations;
  }
  mean_diffusive_steps = escapes > 0 ? diff / escapes : 0.0;
  mean_local_iterations = attempts.empty() ? 0.0 : local / static_cast<double>(attempts.size());
}

std::optional<CriticalPoint> RunReport::best_minimum() const {
  std::optional<CriticalPoint> best;
  for (const CriticalPoint& c : table.entries()) {
    if (c.kind == PointKind::minimum && (!best || c.value < best->value)) best = c;
  }
  return best;
}

CriticalPoint classify(const Potential& p, const Vector& x, double zero_tol, double gradient_tol) {
  const Evaluation e = p.evaluate(x);
  const double gnorm = e.gradient.norm();
  if (!(gnorm <= gradient_tol)) {
    throw std::invalid_argument("classify: point is not critical (gradient norm " +
                                std::to_string(gnorm) + ")");
  }
  const SpectralInfo s = eigendecompose(p.hessian(x), zero_tol);
  CriticalPoint cp;
  cp.location = x;
  cp.value = e.value;
  cp.gradient_norm = gnorm;
  cp.inertia = s.inertia;
  cp.spectrum = s.eigenvalues;
  cp.kind = kind_of(s.inertia);
  return cp;
}

Box widened(const Box& region, double factor) {
  const Vector half = 0.5 * (region.upper - region.lower);
  return Box{region.lower - factor * half, region.upper + factor * half};
}

std::size_t select_escape_target(const CriticalPointTable& table, NoiseSource& noise) {
  if (table.empty()) throw std::invalid_argument("cannot select from an empty table");
  return noise.index(table.size());
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

class Explorer {
 public:
  Explorer(const Potential& p, const ExplorationConfig& cfg)
      : p_(p),
        cfg_(cfg),
        region_(cfg.search_region ? *cfg.search_region : p.search_region()),
        bounds_(widened(region_, cfg.divergence_factor)),
        noise_(cfg.seed) {
    if (cfg.max_critical_points < 1 || cfg.max_restarts < 0) {
      throw std::invalid_argument("exploration budgets must be positive");
    }
    if (region_.dimension() != p.dimension()) {
      throw std::invalid_argument("search region dimension does not match potential");
    }
    const double radius = cfg.dedup_radius >= 0.0 ? cfg.dedup_radius : 1e-4 * region_.diameter();
    report_.table = CriticalPointTable(radius);
    report_.problem = p.name();
    report_.seed = cfg.seed;
  }

  RunReport run() {
    const auto t0 = Clock::now();
    report_.attempts.push_back(random_start(AttemptLog::Kind::initial));
    for (int a = 1; a < cfg_.max_critical_points; ++a) {
      if (report_.table.empty()) {
        report_.attempts.push_back(random_start(AttemptLog::Kind::fresh_start));
      } else {
        report_.attempts.push_back(escape_attempt());
      }
    }
    report_.seconds_total = seconds_since(t0);
    report_.recompute_statistics();
    return std::move(report_);
  }

 private:
  // The stopping rule is relative to the starting gradient; re-anchor it at the endpoint
  // until the gradient meets the record tolerance.
  LocalSearchResult search(const Vector& x0, bool saddle) {
    const auto run = [&](const Vector& x) {
      return saddle ? saddle_search(p_, x, cfg_.local) : minimize(p_, x, cfg_.local);
    };
    LocalSearchResult ls = run(x0);
    for (int k = 0; k < cfg_.max_polish && ls.outcome == Outcome::converged &&
                    ls.final_gradient_norm > cfg_.critical_gradient_tol;
         ++k) {
      LocalSearchResult more = run(ls.final_point);
      more.iterations += ls.iterations;
      ls.direction_log.insert(ls.direction_log.end(), more.direction_log.begin(),
                              more.direction_log.end());
      more.direction_log = std::move(ls.direction_log);
      ls = std::move(more);
    }
    return ls;
  }

  // Records the endpoint of a local search when it is a critical point.
  bool try_record(const LocalSearchResult& ls, AttemptLog& log) {
    log.local_iterations += ls.iterations;
    log.search_outcome = std::string(to_string(ls.outcome));
    if (!(ls.final_gradient_norm <= cfg_.critical_gradient_tol)) return false;
    if (!bounds_.contains(ls.final_point)) {
      log.search_outcome = "diverged";
      return false;
    }
    try {
      const CriticalPoint cp = classify(p_, ls.final_point, cfg_.local.zero_tolerance,
                                        cfg_.critical_gradient_tol);
      log.recorded = static_cast<long>(report_.table.record(cp));
      log.recorded_kind = std::string(to_string(cp.kind));
      return true;
    } catch (const EvaluationError&) {
      return false;
    }
  }

  AttemptLog random_start(AttemptLog::Kind kind) {
    AttemptLog log;
    log.kind = kind;
    for (int tries = 0; tries <= cfg_.max_restarts; ++tries) {
      log.restarts = tries;
      const Vector x0 = noise_.point_in(region_);
      const auto t0 = Clock::now();
      try {
        const LocalSearchResult ls = search(x0, /*saddle=*/false);
        report_.seconds_local += seconds_since(t0);
        if (try_record(ls, log)) return log;
      } catch (const EvaluationError&) {
        report_.seconds_local += seconds_since(t0);
        log.search_outcome = "evaluation_error";
      }
    }
    return log;
  }

  AttemptLog escape_attempt() {
    std::vector<std::size_t> untried(report_.table.size());
    std::iota(untried.begin(), untried.end(), std::size_t{0});

    AttemptLog log;
    for (int restarts = 0; restarts <= cfg_.max_restarts && !untried.empty(); ++restarts) {
      const std::size_t pick = restarts == 0
                                   ? select_escape_target(report_.table, noise_)
                                   : untried[noise_.index(untried.size())];
      untried.erase(std::remove(untried.begin(), untried.end(), pick), untried.end());
      // Copy: recording may reallocate the table.
      const CriticalPoint origin = report_.table.entries()[pick];
      const bool from_min = origin.kind == PointKind::minimum;

      log = AttemptLog{};
      log.kind = from_min ? AttemptLog::Kind::from_minimum : AttemptLog::Kind::from_saddle;
      log.origin = static_cast<long>(pick);
      log.restarts = restarts;
      try {
        auto t0 = Clock::now();
        const EscapeResult esc = from_min
                                     ? escape_minimum(p_, origin.location, cfg_.diffusion, noise_)
                                     : escape_saddle(p_, origin.location, cfg_.diffusion, noise_);
        report_.seconds_escape += seconds_since(t0);
        log.diffusive_steps = esc.diffusive_steps;
        log.escape_status = std::string(to_string(esc.status));
        log.trace = esc.trace;
        if (esc.status == EscapeStatus::step_underflow) continue;

        t0 = Clock::now();
        const LocalSearchResult ls = search(esc.point, /*saddle=*/from_min);
        report_.seconds_local += seconds_since(t0);
        if (try_record(ls, log)) return log;
      } catch (const EvaluationError&) {
        log.search_outcome = "evaluation_error";
      }
    }
    AttemptLog fresh = random_start(AttemptLog::Kind::fresh_start);
    fresh.restarts += log.restarts + 1;
    return fresh;
  }

  const Potential& p_;
  const ExplorationConfig& cfg_;
  Box region_;
  Box bounds_;
  NoiseSource noise_;
  RunReport report_;
};

}  // namespace

RunReport explore(const Potential& p, const ExplorationConfig& cfg) {
  return Explorer(p, cfg).run();
}

}  // namespace ddcid
