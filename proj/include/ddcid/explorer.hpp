#pragma once

#include "ddcid/diffusion.hpp"
#include "ddcid/local_search.hpp"
#include "ddcid/potential.hpp"
#include "ddcid/spectral.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ddcid {

enum class PointKind { minimum, saddle, maximum, degenerate };

std::string_view to_string(PointKind k);
PointKind point_kind_from_string(std::string_view s);

/// Kind is a function of inertia alone.
PointKind kind_of(const Inertia& inertia);

struct CriticalPoint {
  Vector location;
  double value = 0.0;
  double gradient_norm = 0.0;
  Inertia inertia;
  Vector spectrum;  // Hessian eigenvalues, descending
  PointKind kind = PointKind::minimum;
  int occurrences = 1;

  /// Saddle index n₋ (1 for a mountain pass).
  [[nodiscard]] int index() const { return inertia.minus; }
};

/// Multiset of critical points: entries closer than dedup_radius are merged and counted.
class CriticalPointTable {
 public:
  explicit CriticalPointTable(double dedup_radius = 0.0) : radius_(dedup_radius) {}

  /// Inserts cp or bumps the occurrence count of the entry within dedup_radius.
  /// A merged entry keeps the representative with the smaller gradient norm.
  /// Returns the index of the affected entry.
  std::size_t record(const CriticalPoint& cp);

  [[nodiscard]] const std::vector<CriticalPoint>& entries() const { return entries_; }
  [[nodiscard]] std::size_t size() const { return entries_.size(); }
  [[nodiscard]] bool empty() const { return entries_.empty(); }
  [[nodiscard]] double dedup_radius() const { return radius_; }
  [[nodiscard]] std::size_t count(PointKind k) const;
  [[nodiscard]] std::optional<std::size_t> find(const Vector& x, double radius) const;

  friend bool operator==(const CriticalPointTable&, const CriticalPointTable&);

 private:
  double radius_;
  std::vector<CriticalPoint> entries_;
};

struct ExplorationConfig {
  /// Number of attempts, the first local minimization included.
  int max_critical_points = 20;
  LocalSearchConfig local;
  DiffusionConfig diffusion;
  std::uint64_t seed = 0;
  /// Empty box means the potential's own search region.
  std::optional<Box> search_region;
  /// Negative selects 1e-4·diameter(search region).
  double dedup_radius = -1.0;
  int max_restarts = 5;
  /// A local-search endpoint is recorded only when ‖∇g‖ is at most this.
  double critical_gradient_tol = 1e-6;
  /// Endpoints outside the search region widened by this many half-widths on every side
  /// count as diverged (e.g. dissociating clusters) and trigger a restart.
  double divergence_factor = 2.0;
  /// A search that stops on its relative tolerance above critical_gradient_tol is
  /// restarted from its endpoint up to this many times.
  int max_polish = 3;
};

/// The search region widened by factor half-widths on each side.
Box widened(const Box& region, double factor);

struct AttemptLog {
  enum class Kind { initial, from_minimum, from_saddle, fresh_start };
  Kind kind = Kind::initial;
  /// Table index of the escape origin; -1 for random starts.
  long origin = -1;
  int diffusive_steps = 0;
  int local_iterations = 0;
  std::string escape_status;  // empty for random starts
  std::string search_outcome;
  /// Table index recorded, -1 when the attempt produced nothing.
  long recorded = -1;
  std::string recorded_kind;
  int restarts = 0;
  /// Diffusion trajectory, filled only when DiffusionConfig::record_trace is set.
  std::vector<TracePoint> trace;
};

std::string_view to_string(AttemptLog::Kind k);

struct RunReport {
  std::string problem;
  std::uint64_t seed = 0;
  CriticalPointTable table;
  std::vector<AttemptLog> attempts;
  double mean_diffusive_steps = 0.0;
  double mean_local_iterations = 0.0;
  double seconds_escape = 0.0;
  double seconds_local = 0.0;
  double seconds_total = 0.0;

  /// Recomputes the two means from the attempt logs (escape attempts only for diffusion).
  void recompute_statistics();
  [[nodiscard]] std::optional<CriticalPoint> best_minimum() const;
};

/// Hessian inertia classification of a critical point; rejects points whose gradient
/// norm exceeds gradient_tol.
CriticalPoint classify(const Potential& p, const Vector& x, double zero_tol = -1.0,
                       double gradient_tol = 1e-6);

/// Uniform choice over distinct entries, independent of occurrence counts.
std::size_t select_escape_target(const CriticalPointTable& table, NoiseSource& noise);

/// Alternates basin escapes and local searches, maintaining the table of critical points.
RunReport explore(const Potential& p, const ExplorationConfig& cfg);

}  // namespace ddcid
