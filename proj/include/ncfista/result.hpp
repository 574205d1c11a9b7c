#pragma once

#include "ncfista/point.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ncfista {

/// When to accept (y, v): ||v|| <= tol (absolute) or
/// ||v|| / (||grad f(z0)|| + 1) <= tol (relative).
struct StoppingRule {
  enum class Kind { absolute, relative };

  Kind kind = Kind::absolute;
  double tol = 1e-6;

  static StoppingRule absolute(double tol) { return {Kind::absolute, tol}; }
  static StoppingRule relative(double tol) { return {Kind::relative, tol}; }

  /// Threshold on ||v|| given ||grad f(z0)||.
  double threshold(double grad_start_norm) const {
    return kind == Kind::absolute ? tol : tol * (grad_start_norm + 1.0);
  }

  void validate() const {
    if (!(tol > 0)) throw std::invalid_argument("stopping tolerance must be positive");
  }
};

enum class Status { converged, max_iter };

inline const char* to_string(Status s) { return s == Status::converged ? "converged" : "max_iter"; }

struct Counters {
  std::int64_t outer_iterations = 0;
  std::int64_t resolvent_evals = 0;
  std::int64_t gradient_evals = 0;
  std::int64_t function_evals = 0;
  std::int64_t projections = 0;
};

/// Per-iteration diagnostics. Entry k describes the iteration that produced
/// y_{k+1}. Fields that do not apply to a solver are left at zero.
struct TrajectoryRecord {
  std::int64_t k = 0;
  double v_norm = 0;
  double phi = 0;          // phi(y_{k+1}) (before any restart rejection)
  double a = 0;            // a_k
  double lambda = 0;       // lambda_{k+1}
  double lambda_start = 0; // lambda handed to the line search
  double m = 0;            // m_{k+1}
  double m_start = 0;      // m_k
  double C = 0;            // curvature ratio of the accepted candidate
  double C_min = 0;        // extremes of the ratio over every inner candidate
  double C_max = 0;
  double m_lower = 0;      // lower curvature estimate for this iteration
  std::int64_t inner = 0;  // resolvent evaluations in this iteration
  std::int64_t resolvents = 0;  // cumulative
  int lambda_updates = 0;
  int m_updates = 0;
  bool restarted = false;
};

struct SolverResult {
  Point y;
  Point v;
  Status status = Status::max_iter;
  Counters counters;
  double v_norm = 0;
  double objective = 0;
  double grad_start_norm = 0;
  std::vector<TrajectoryRecord> trajectory;

  double relative_residual() const { return v_norm / (grad_start_norm + 1.0); }
};

}  // namespace ncfista
