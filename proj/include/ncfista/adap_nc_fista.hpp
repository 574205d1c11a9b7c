#pragma once

#include "ncfista/nc_fista.hpp"
#include "ncfista/problem.hpp"
#include "ncfista/result.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace ncfista {

/// Raised when the line search exceeds its per-iteration budget. The budget
/// is far above what the (lambda, m) bounds allow, so this signals a broken
/// oracle rather than a hard problem.
class LineSearchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AdapConfig {
  double M0 = 1.0;
  double m0 = 1.0;
  double theta = 1.25;
  StoppingRule stopping = StoppingRule::absolute(1e-6);
  bool restart = false;
  bool bb = false;
  std::int64_t max_outer = 50000;
  std::int64_t max_inner_per_outer = 200;
  bool log_trajectory = false;

  static constexpr double A0 = 2.0;

  double lambda0() const { return 1.0 / M0; }

  void validate() const {
    if (!(m0 > 0) || !(M0 >= m0) || !std::isfinite(M0)) {
      throw std::invalid_argument("ADAP-NC-FISTA: need M0 >= m0 > 0");
    }
    if (!(theta > 1) || !std::isfinite(theta)) {
      throw std::invalid_argument("ADAP-NC-FISTA: theta must exceed 1");
    }
    if (max_outer < 0) throw std::invalid_argument("ADAP-NC-FISTA: max_outer must be nonnegative");
    if (max_inner_per_outer < 1) {
      throw std::invalid_argument("ADAP-NC-FISTA: max_inner_per_outer must be positive");
    }
    stopping.validate();
  }
};

struct AdapState {
  std::int64_t k = 0;
  double A = AdapConfig::A0;
  double a = 0;
  Point x;
  Point y;
  Point anchor;  // y_0 of the current (re)start
  double lambda = 0;
  double m = 0;
  std::int64_t inner_count = 0;
  std::optional<double> bb_lambda;  // lambda^BB from the previous step, if any
  double phi_y = std::numeric_limits<double>::quiet_NaN();

  static AdapState initial(const Point& y0, const AdapConfig& config) {
    AdapState s;
    s.x = y0;
    s.y = y0;
    s.anchor = y0;
    s.lambda = config.lambda0();
    s.m = config.m0;
    return s;
  }
};

/// max{ 2 [l_f(y_tilde; x_tilde) - f(y_tilde)] / ||y_tilde - x_tilde||^2, 0 },
/// taken as 0 when the two points coincide.
inline double lower_curvature_estimate(const SmoothOracle& f, const Point& x_tilde, const Point& y_tilde) {
  x_tilde.check_same(y_tilde);
  const double d2 = (y_tilde.data() - x_tilde.data()).squaredNorm();
  if (d2 == 0.0) return 0.0;
  const double gap = f.gap ? f.gap(y_tilde, x_tilde)
                           : f.value(y_tilde) - linearize(f, y_tilde, x_tilde);
  return std::max(-2.0 * gap / d2, 0.0);
}

namespace detail {

/// f(x_tilde) and grad f(x_tilde), evaluated once per outer iteration.
struct AnchorCache {
  const Point& x_tilde;
  const Point& grad;
  std::optional<double> value;

  double f_value(const SmoothOracle& f, Counters& counters) {
    if (!value) {
      value = f.value(x_tilde);
      ++counters.function_evals;
    }
    return *value;
  }
};

inline double gap_at(const SmoothOracle& f, const Point& z, const Point& at, AnchorCache& cache,
                     Counters& counters, std::optional<double>& f_z) {
  if (f.gap) return f.gap(z, at);
  if (!f_z) {
    f_z = f.value(z);
    ++counters.function_evals;
  }
  return *f_z - linearize(cache.f_value(f, counters), cache.grad, z, at);
}

}  // namespace detail

struct ModelCandidate {
  Point y;
  double C = 0;
  std::optional<double> f_y;
};

namespace detail {

inline ModelCandidate model_curvature(const ProblemInstance& problem, AnchorCache& cache, double lambda,
                                      double m, double a, Counters& counters) {
  ModelCandidate out;
  out.y = prox_step(problem, cache.x_tilde, cache.grad, 1.0 / lambda + 2.0 * m / a);
  ++counters.resolvent_evals;
  const double d2 = (out.y.data() - cache.x_tilde.data()).squaredNorm();
  if (d2 > 0.0) {
    out.C = 2.0 * gap_at(problem.f, out.y, cache.x_tilde, cache, counters, out.f_y) / d2;
  }
  return out;
}

}  // namespace detail

/// Candidate y(lambda, m) = argmin l_f(u; x_tilde) + h(u) + (1/(2 lambda) + m/a)||u - x_tilde||^2
/// and its curvature ratio C = 2 [f(y) - l_f(y; x_tilde)] / ||y - x_tilde||^2
/// (0 when y = x_tilde). One resolvent evaluation.
inline ModelCandidate model_curvature(const ProblemInstance& problem, const Point& x_tilde, double lambda,
                                      double m, double a) {
  if (!(lambda > 0)) throw std::invalid_argument("model_curvature: lambda must be positive");
  if (!(a >= 2)) throw std::invalid_argument("model_curvature: a must be at least 2");
  Counters scratch;
  const Point grad = problem.f.gradient(x_tilde);
  detail::AnchorCache cache{x_tilde, grad, std::nullopt};
  return detail::model_curvature(problem, cache, lambda, m, a, scratch);
}

struct SubResult {
  double lambda = 0;
  double m = 0;
  ModelCandidate candidate;
  std::int64_t inner = 0;
  int lambda_updates = 0;
  int m_updates = 0;
  double C_min = 0;
  double C_max = 0;
};

namespace detail {

inline SubResult sub_search(const ProblemInstance& problem, double theta, double lambda_start,
                            double m_start, double a, double m_lower, AnchorCache& cache,
                            std::int64_t max_inner, Counters& counters) {
  SubResult r;
  double lambda = lambda_start;
  double m = m_start;
  r.C_min = std::numeric_limits<double>::infinity();
  r.C_max = -std::numeric_limits<double>::infinity();
  for (;;) {
    if (r.inner >= max_inner) {
      throw LineSearchError("line search exceeded " + std::to_string(max_inner) +
                            " resolvent evaluations (lambda = " + std::to_string(lambda) +
                            ", m = " + std::to_string(m) + ")");
    }
    ModelCandidate cand = model_curvature(problem, cache, lambda, m, a, counters);
    ++r.inner;
    r.C_min = std::min(r.C_min, cand.C);
    r.C_max = std::max(r.C_max, cand.C);

    const bool step_ok = lambda * cand.C <= 0.9;
    const bool weak_ok = 2.0 * m * (lambda_start - lambda / a) >= m_lower * lambda;
    if (step_ok && weak_ok) {
      r.lambda = lambda;
      r.m = m;
      r.candidate = std::move(cand);
      return r;
    }
    if (!step_ok) {
      lambda = std::min(lambda / theta, 0.9 / cand.C);
      ++r.lambda_updates;
    }
    if (!weak_ok) {
      m *= 2.0;
      ++r.m_updates;
    }
  }
}

}  // namespace detail

/// Line search over (lambda, m) starting from (lambda_start, m_start).
///
/// Each pass evaluates one candidate and tests lambda C <= 0.9 and
/// 2 m (lambda_start - lambda / a) >= m_lower lambda. A failed first test
/// sets lambda <- min{lambda / theta, 0.9 / C}; a failed second test doubles
/// m; both apply in the same pass when both fail.
inline SubResult sub_search(const ProblemInstance& problem, double theta, double lambda_start, double m_start,
                            double a, double m_lower, const Point& x_tilde,
                            std::int64_t max_inner = 200) {
  Counters scratch;
  const Point grad = problem.f.gradient(x_tilde);
  detail::AnchorCache cache{x_tilde, grad, std::nullopt};
  return detail::sub_search(problem, theta, lambda_start, m_start, a, m_lower, cache, max_inner, scratch);
}

/// <s, g> / ||g||^2 when that is positive and finite, otherwise `fallback`.
inline double bb_stepsize(const Point& s, const Point& g, double fallback) {
  if (!(fallback > 0)) throw std::invalid_argument("bb_stepsize: fallback must be positive");
  const double gg = g.squared_norm();
  if (gg == 0.0) return fallback;
  const double ratio = s.dot(g) / gg;
  return (ratio > 0 && std::isfinite(ratio)) ? ratio : fallback;
}

/// Everything one outer iteration produces, before it is committed.
struct AdapProposal {
  double a = 0;
  double A_next = 0;
  Point x_tilde;
  Point y_next;
  Point x_next;
  Point v;
  double lambda_start = 0;
  SubResult sub;
  double m_lower = 0;
  std::optional<double> f_y_next;
  std::optional<double> bb_lambda_next;
};

namespace detail {

inline AdapProposal adap_propose(const ProblemInstance& problem, const AdapConfig& config,
                                 const AdapState& state, Counters& counters) {
  AdapProposal p;
  const auto [a, A_next] = advance_accumulator(state.A);
  p.a = a;
  p.A_next = A_next;
  p.x_tilde = combine(state.A / A_next, state.y, a / A_next, state.x);
  const Point y_tilde = combine(state.A / A_next, state.y, a / A_next, state.anchor);

  const Point grad_tilde = problem.f.gradient(p.x_tilde);
  ++counters.gradient_evals;
  AnchorCache cache{p.x_tilde, grad_tilde, std::nullopt};

  const double d2 = (y_tilde.data() - p.x_tilde.data()).squaredNorm();
  if (d2 > 0.0) {
    std::optional<double> f_y_tilde;
    const double gap = gap_at(problem.f, y_tilde, p.x_tilde, cache, counters, f_y_tilde);
    p.m_lower = std::max(-2.0 * gap / d2, 0.0);
  }

  p.lambda_start = state.lambda;
  if (config.bb) p.lambda_start = state.bb_lambda.value_or(config.lambda0());

  p.sub = sub_search(problem, config.theta, p.lambda_start, state.m, a, p.m_lower, cache,
                     config.max_inner_per_outer, counters);
  p.y_next = std::move(p.sub.candidate.y);
  p.f_y_next = p.sub.candidate.f_y;

  const double two_ml = 2.0 * p.sub.m * p.sub.lambda;
  Point x_hat = combine((a + two_ml) / (two_ml + 1.0), p.y_next, -(a - 1.0) / (two_ml + 1.0), state.y);
  if (problem.omega.is_identity()) {
    p.x_next = std::move(x_hat);
  } else {
    p.x_next = problem.omega(x_hat);
    ++counters.projections;
  }

  const double c = 1.0 / p.sub.lambda + 2.0 * p.sub.m / a;
  const Point grad_next = problem.f.gradient(p.y_next);
  ++counters.gradient_evals;
  p.v = combine(c, p.x_tilde, -c, p.y_next);
  p.v += grad_next;
  p.v -= grad_tilde;

  if (config.bb) {
    // s = x_tilde_k - y_{k+1}, g = grad f(x_tilde_k) - grad f(y_{k+1})
    p.bb_lambda_next = bb_stepsize(p.x_tilde - p.y_next, grad_tilde - grad_next, config.lambda0());
  }
  return p;
}

inline void adap_commit(AdapState& state, AdapProposal&& p) {
  state.x = std::move(p.x_next);
  state.y = std::move(p.y_next);
  state.A = p.A_next;
  state.a = p.a;
  state.lambda = p.sub.lambda;
  state.m = p.sub.m;
  state.inner_count += p.sub.inner;
  state.bb_lambda = p.bb_lambda_next;
  ++state.k;
}

}  // namespace detail

/// One full outer iteration (steps 1-3), committed to `state`. Returns v_{k+1}.
inline Point adap_step(const ProblemInstance& problem, const AdapConfig& config, AdapState& state,
                       Counters& counters) {
  AdapProposal p = detail::adap_propose(problem, config, state, counters);
  Point v = std::move(p.v);
  counters.outer_iterations++;
  detail::adap_commit(state, std::move(p));
  return v;
}

/// Restart rule: when phi_new >= phi_prev the step is rejected and the
/// method restarts from y_k with x = y_k, A = A0, lambda = lambda0 and the
/// anchor moved to y_k. m and the iteration counter are kept; the BB
/// history is cleared. Returns true when a restart happened.
/// `state` must still hold y_k (the proposal has not been committed).
inline bool restart_if_ascent(AdapState& state, double phi_prev, double phi_new, double A0, double lambda0) {
  if (!(phi_new >= phi_prev)) return false;
  state.x = state.y;
  state.anchor = state.y;
  state.A = A0;
  state.lambda = lambda0;
  state.bb_lambda.reset();
  return true;
}

/// Upper bound on total resolvent evaluations minus outer iterations for the
/// plain method: ceil(log_theta(max{1, theta lambda0 M_bar / 0.9})) +
/// ceil(log_2(max{1, 2 m_bar / m0})) + 2.
inline double inner_work_bound(const AdapConfig& config, double M_bar, double m_bar) {
  const double lam = std::ceil(std::log(std::max(1.0, config.theta * config.lambda0() * M_bar / 0.9)) /
                               std::log(config.theta));
  const double mm = std::ceil(std::log2(std::max(1.0, 2.0 * m_bar / config.m0)));
  return lam + mm + 2.0;
}

/// ADAP-NC-FISTA and its restart / BB variants.
inline SolverResult run_adap(const ProblemInstance& problem, const AdapConfig& config) {
  config.validate();
  problem.validate();

  SolverResult result;
  Counters& counters = result.counters;
  AdapState state = AdapState::initial(problem.initial_point, config);

  result.grad_start_norm = problem.f.gradient(problem.initial_point).norm();
  ++counters.gradient_evals;
  const double threshold = config.stopping.threshold(result.grad_start_norm);

  const bool need_phi = config.restart || config.log_trajectory;
  if (need_phi) {
    state.phi_y = problem.objective(state.y);
    ++counters.function_evals;
  }

  result.y = problem.initial_point;
  result.v_norm = kInfinity;

  while (state.k < config.max_outer) {
    AdapProposal p = detail::adap_propose(problem, config, state, counters);
    ++counters.outer_iterations;
    const double v_norm = p.v.norm();
    if (!p.y_next.all_finite() || !std::isfinite(v_norm)) {
      throw std::runtime_error("ADAP-NC-FISTA: iterate became non-finite at k = " +
                               std::to_string(state.k));
    }

    double phi_next = std::numeric_limits<double>::quiet_NaN();
    if (need_phi) {
      const double f_y = p.f_y_next ? *p.f_y_next : problem.f.value(p.y_next);
      if (!p.f_y_next) ++counters.function_evals;
      phi_next = f_y + problem.h.value(p.y_next);
    }

    TrajectoryRecord rec;
    if (config.log_trajectory) {
      rec.k = state.k;
      rec.v_norm = v_norm;
      rec.phi = phi_next;
      rec.a = p.a;
      rec.lambda = p.sub.lambda;
      rec.lambda_start = p.lambda_start;
      rec.m = p.sub.m;
      rec.m_start = state.m;
      rec.C = p.sub.candidate.C;
      rec.C_min = p.sub.C_min;
      rec.C_max = p.sub.C_max;
      rec.m_lower = p.m_lower;
      rec.inner = p.sub.inner;
      rec.resolvents = counters.resolvent_evals;
      rec.lambda_updates = p.sub.lambda_updates;
      rec.m_updates = p.sub.m_updates;
    }

    if (v_norm < result.v_norm) {
      result.y = p.y_next;
      result.v = p.v;
      result.v_norm = v_norm;
    }
    const bool done = v_norm <= threshold;

    bool restarted = false;
    if (!done && config.restart) {
      restarted = restart_if_ascent(state, state.phi_y, phi_next, AdapConfig::A0, config.lambda0());
    }
    if (restarted) {
      state.inner_count += p.sub.inner;
      ++state.k;
    } else {
      detail::adap_commit(state, std::move(p));
      state.phi_y = phi_next;
    }

    if (config.log_trajectory) {
      rec.restarted = restarted;
      result.trajectory.push_back(rec);
    }
    if (done) {
      result.status = Status::converged;
      break;
    }
  }

  result.objective = problem.objective(result.y);
  ++counters.function_evals;
  return result;
}

}  // namespace ncfista
