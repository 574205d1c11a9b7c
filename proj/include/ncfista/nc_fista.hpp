#pragma once

#include "ncfista/problem.hpp"
#include "ncfista/result.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace ncfista {

/// kappa_0 = (1 + sqrt(1 + 4 A0)) / (sqrt(1 + 4 A0) - 1); always > 1.
inline double kappa0(double A0) {
  if (!(A0 > 0) || !std::isfinite(A0)) throw std::invalid_argument("kappa0: A0 must be positive");
  const double s = std::sqrt(1.0 + 4.0 * A0);
  return (1.0 + s) / (s - 1.0);
}

struct Accumulator {
  double a;
  double A_next;
};

/// a = (1 + sqrt(1 + 4A)) / 2 and A_next = A + a, which equals a^2.
inline Accumulator advance_accumulator(double A) {
  if (!(A >= 0)) throw std::invalid_argument("advance_accumulator: A must be nonnegative");
  const double a = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * A));
  return {a, A + a};
}

struct NcFistaConfig {
  double M = 1.0;
  double m = 1.0;
  double A0 = 2.0;
  StoppingRule stopping = StoppingRule::absolute(1e-6);
  std::int64_t max_iter = 50000;
  bool log_trajectory = false;

  /// M >= m >= 0 with M > 0. m = 0 is the convex (plain FISTA) setting.
  void validate() const {
    if (!(M > 0) || !std::isfinite(M)) throw std::invalid_argument("NC-FISTA: M must be positive");
    if (!(m >= 0) || m > M) throw std::invalid_argument("NC-FISTA: need M >= m >= 0");
    if (!(A0 > 0)) throw std::invalid_argument("NC-FISTA: A0 must be positive");
    if (max_iter < 0) throw std::invalid_argument("NC-FISTA: max_iter must be nonnegative");
    stopping.validate();
  }

  /// Defaults used when the Lipschitz constant of grad f is known: M = M_bar / 0.99.
  static NcFistaConfig from_curvature(double M_bar, double m_bar, double A0 = 2.0) {
    NcFistaConfig c;
    c.M = M_bar / 0.99;
    c.m = m_bar;
    c.A0 = A0;
    return c;
  }
};

struct NcFistaState {
  std::int64_t k = 0;
  double A = 0;
  double a = 0;  // a_{k-1}, i.e. the last one used
  Point x;
  Point y;
  double kappa0 = 0;
  double lambda = 0;

  static NcFistaState initial(const Point& y0, const NcFistaConfig& config) {
    NcFistaState s;
    s.A = config.A0;
    s.x = y0;
    s.y = y0;
    s.kappa0 = ncfista::kappa0(config.A0);
    s.lambda = 1.0 / config.M;
    return s;
  }
};

/// One pass of steps 1-3: advances `state` from (x_k, y_k) to (x_{k+1}, y_{k+1})
/// and returns v_{k+1}. Uses exactly one resolvent evaluation and, unless
/// Omega is the whole space, one projection.
inline Point nc_fista_step(const ProblemInstance& problem, const NcFistaConfig& config,
                           NcFistaState& state, Counters& counters) {
  const auto [a, A_next] = advance_accumulator(state.A);
  const Point x_tilde = combine(state.A / A_next, state.y, a / A_next, state.x);

  const double kml = state.kappa0 * config.m * state.lambda;
  const double c = 1.0 / state.lambda + state.kappa0 * config.m / a;

  const Point grad_tilde = problem.f.gradient(x_tilde);
  ++counters.gradient_evals;
  Point y_next = prox_step(problem, x_tilde, grad_tilde, c);
  ++counters.resolvent_evals;

  Point x_hat = combine((a + kml) / (kml + 1.0), y_next, -(a - 1.0) / (kml + 1.0), state.y);
  if (problem.omega.is_identity()) {
    state.x = std::move(x_hat);
  } else {
    state.x = problem.omega(x_hat);
    ++counters.projections;
  }

  Point v = combine(c, x_tilde, -c, y_next);
  v += problem.f.gradient(y_next);
  v -= grad_tilde;
  ++counters.gradient_evals;

  state.y = std::move(y_next);
  state.A = A_next;
  state.a = a;
  ++state.k;
  ++counters.outer_iterations;
  return v;
}

/// Runs NC-FISTA until the stopping rule holds or max_iter outer iterations.
///
/// On budget exhaustion the pair with the smallest ||v_i|| seen is returned.
/// With max_iter = 0, y is the initial point and v is empty (norm +inf).
/// Convergence guarantees need m >= m_bar and M > M_bar; the solver itself
/// only checks M >= m >= 0.
inline SolverResult run_nc_fista(const ProblemInstance& problem, const NcFistaConfig& config) {
  config.validate();
  problem.validate();

  SolverResult result;
  NcFistaState state = NcFistaState::initial(problem.initial_point, config);

  result.grad_start_norm = problem.f.gradient(problem.initial_point).norm();
  ++result.counters.gradient_evals;
  const double threshold = config.stopping.threshold(result.grad_start_norm);

  result.y = problem.initial_point;
  result.v_norm = kInfinity;

  while (state.k < config.max_iter) {
    Point v = nc_fista_step(problem, config, state, result.counters);
    const double v_norm = v.norm();

    if (config.log_trajectory) {
      TrajectoryRecord rec;
      rec.k = state.k - 1;
      rec.v_norm = v_norm;
      rec.phi = problem.objective(state.y);
      ++result.counters.function_evals;
      rec.a = state.a;
      rec.lambda = rec.lambda_start = state.lambda;
      rec.m = rec.m_start = config.m;
      rec.inner = 1;
      rec.resolvents = result.counters.resolvent_evals;
      result.trajectory.push_back(rec);
    }

    if (!state.y.all_finite() || !std::isfinite(v_norm)) {
      throw std::runtime_error("NC-FISTA: iterate became non-finite at k = " +
                               std::to_string(state.k));
    }
    if (v_norm < result.v_norm) {
      result.y = state.y;
      result.v = std::move(v);
      result.v_norm = v_norm;
    }
    if (v_norm <= threshold) {
      result.status = Status::converged;
      break;
    }
  }

  result.objective = problem.objective(result.y);
  ++result.counters.function_evals;
  return result;
}

}  // namespace ncfista
