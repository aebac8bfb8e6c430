#include "ddcid/diffusion.hpp"

#include "ddcid/local_search.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

namespace ddcid {

Vector NoiseSource::normal(Eigen::Index n) {
  Vector w(n);
  for (Eigen::Index i = 0; i < n; ++i) w[i] = normal_(engine_);
  return w;
}

double NoiseSource::uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

std::size_t NoiseSource::index(std::size_t count) {
  if (count == 0) throw std::invalid_argument("cannot draw an index from an empty range");
  return std::uniform_int_distribution<std::size_t>(0, count - 1)(engine_);
}

Vector NoiseSource::point_in(const Box& box) {
  Vector x(box.dimension());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    x[i] = box.lower[i] + (box.upper[i] - box.lower[i]) * uniform();
  }
  return x;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Vector extremal_direction(const SpectralInfo& s, Extremal which, NoiseSource& noise,
                          double multiplicity_tol) {
  const Eigen::Index n = s.dimension();
  const auto same = [&](Eigen::Index i, Eigen::Index j) {
    const double li = s.eigenvalues[i];
    return std::abs(li - s.eigenvalues[j]) <= multiplicity_tol * std::max(1.0, std::abs(li));
  };
  Eigen::Index first = 0;
  Eigen::Index count = 1;
  if (which == Extremal::largest) {
    while (count < n && same(count - 1, count)) ++count;
  } else {
    first = n - 1;
    while (first > 0 && same(first, first - 1)) --first;
    count = n - first;
  }
  if (count == 1) return s.eigenvectors.col(first);
  Vector v = s.eigenvectors.middleCols(first, count) * noise.normal(count);
  return v.normalized();
}

Vector colored_noise(const SpectralInfo& s, Extremal which, NoiseSource& noise,
                     double multiplicity_tol) {
  const Vector v = extremal_direction(s, which, noise, multiplicity_tol);
  const Vector w = noise.normal(s.dimension());
  return -v * v.dot(w);
}

Vector initial_kick(const Vector& x0, const Vector& v, double alpha, const Vector& w) {
  return x0 + alpha * v * v.dot(w);
}

Vector white_noise_id_step(const Potential& p, const Vector& x, double h, double sigma,
                           NoiseSource& noise) {
  if (!(h > 0.0)) throw std::invalid_argument("white_noise_id_step needs h > 0");
  return x - h * p.gradient(x) + std::sqrt(h) * sigma * noise.normal(x.size());
}

std::string_view to_string(EscapeStatus s) {
  switch (s) {
    case EscapeStatus::switched: return "switched";
    case EscapeStatus::budget_exhausted: return "budget_exhausted";
    case EscapeStatus::step_underflow: return "step_underflow";
  }
  return "?";
}

namespace {

struct Probe {
  Evaluation e;
  double aux = 0.0;
};

std::optional<Probe> probe(const Potential& p, const Vector& x) {
  if (!x.allFinite()) return std::nullopt;
  try {
    Evaluation e = p.evaluate(x);
    const double aux = AuxiliaryPotential::from_gradient(e.gradient);
    return Probe{std::move(e), aux};
  } catch (const EvaluationError&) {
    return std::nullopt;
  }
}

// Predictor direction and acceptance test for one diffused step.
struct Predictor {
  Vector direction;
  bool need_aux_decrease = false;
  bool need_value_decrease = false;
};

Predictor newton_predictor(const Matrix& h, const Evaluation& e) {
  return {-newton_solve(h, e.gradient), true, false};
}

Predictor saddle_to_min_predictor(const SpectralInfo& s, const Evaluation& e) {
  if (auto v = double_descent_direction(e.gradient, s)) return {std::move(*v), true, true};
  const double norm = e.gradient.norm();
  Vector dir = norm > 0.0 ? Vector(-e.gradient / norm) : Vector(Vector::Zero(e.gradient.size()));
  return {std::move(dir), false, true};
}

// Kick, then alternate predictor line search and colored noise until the inertia switch.
template <class MakePredictor, class Switched>
EscapeResult run_escape(const Potential& p, const Vector& start, const DiffusionConfig& cfg,
                        NoiseSource& noise, Extremal which, MakePredictor make_predictor,
                        Switched switched) {
  if (!(cfg.alpha > 0.0) || cfg.max_diffusive_steps < 1) {
    throw std::invalid_argument("diffusion config needs alpha > 0 and a positive step budget");
  }
  EscapeResult out;
  const Eigen::Index n = p.dimension();

  SpectralInfo s = eigendecompose(p.hessian(start), cfg.zero_tolerance);
  const Vector v0 = extremal_direction(s, which, noise, cfg.multiplicity_tol);
  Vector x = initial_kick(start, v0, cfg.alpha, noise.normal(n));
  if (cfg.record_trace) out.noise_increments.push_back(x - start);
  out.diffusive_steps = 1;

  StepController ctrl;
  while (true) {
    auto here = probe(p, x);
    if (!here) {
      out.point = x;
      out.status = EscapeStatus::step_underflow;
      return out;
    }
    const Matrix hess = p.hessian(x);
    s = eigendecompose(hess, cfg.zero_tolerance);
    if (cfg.record_trace) {
      out.trace.push_back({out.diffusive_steps, x, here->e.value, here->aux, s.inertia});
    }
    if (switched(s.inertia)) {
      out.point = x;
      out.status = EscapeStatus::switched;
      return out;
    }
    if (out.diffusive_steps >= cfg.max_diffusive_steps) {
      out.point = x;
      out.status = EscapeStatus::budget_exhausted;
      return out;
    }

    const Predictor pred = make_predictor(hess, s, here->e);
    const bool use_abs = cfg.absolute_value_acceptance && pred.need_value_decrease;
    if (use_abs && here->e.value < 0.0) ++out.negative_value_warnings;

    double h = ctrl.current();
    Vector predicted = x;
    double predicted_aux = here->aux;
    if (pred.direction.squaredNorm() > 0.0) {
      while (true) {
        h = ctrl.current();
        const Vector trial = x + h * pred.direction;
        bool ok = false;
        if (auto t = probe(p, trial)) {
          ok = true;
          if (pred.need_aux_decrease) ok = ok && t->aux < here->aux;
          if (pred.need_value_decrease) {
            ok = ok && (use_abs ? std::abs(t->e.value) < std::abs(here->e.value)
                                : t->e.value < here->e.value);
          }
          if (ok) predicted_aux = t->aux;
        }
        if (ok) {
          ctrl.accept();
          predicted = trial;
          break;
        }
        if (!ctrl.reject()) {
          out.point = x;
          out.status = EscapeStatus::step_underflow;
          return out;
        }
      }
    }
    out.predictor_aux.push_back(predicted_aux);

    const Vector v = extremal_direction(s, which, noise, cfg.multiplicity_tol);
    const Vector w = noise.normal(n);
    const Vector increment = -cfg.alpha * std::sqrt(h) * v * v.dot(w);
    if (cfg.record_trace) out.noise_increments.push_back(increment);
    x = predicted + increment;
    ++out.diffusive_steps;
  }
}

}  // namespace

EscapeResult escape_minimum(const Potential& p, const Vector& x_min, const DiffusionConfig& cfg,
                            NoiseSource& noise) {
  return run_escape(
      p, x_min, cfg, noise, Extremal::largest,
      [](const Matrix& h, const SpectralInfo&, const Evaluation& e) { return newton_predictor(h, e); },
      [](const Inertia& in) { return in.minus != 0; });
}

EscapeResult escape_saddle(const Potential& p, const Vector& x_sad, const DiffusionConfig& cfg,
                           NoiseSource& noise) {
  return run_escape(
      p, x_sad, cfg, noise, Extremal::smallest,
      [](const Matrix&, const SpectralInfo& s, const Evaluation& e) {
        return saddle_to_min_predictor(s, e);
      },
      [](const Inertia& in) { return in.minus == 0; });
}

}  // namespace ddcid
