#pragma once

#include "ncfista/point.hpp"

#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace ncfista {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Smooth part f of the composite objective.
///
/// `gap` optionally evaluates f(z) - [f(at) + <grad f(at), z - at>] directly.
/// Quadratic problems supply it as 0.5 (z-at)' H (z-at) so curvature ratios
/// stay accurate when z and at are nearly equal; otherwise it is formed from
/// values.
struct SmoothOracle {
  std::function<double(const Point&)> value;
  std::function<Point(const Point&)> gradient;
  std::function<double(const Point& z, const Point& at)> gap;
};

/// Convex part h. `resolvent(center, c)` returns
/// argmin_u { h(u) + (c/2) ||u - center||^2 }.
struct ConvexPartOracle {
  std::function<double(const Point&)> value;
  std::function<Point(const Point& center, double c)> resolvent;
};

/// Projection onto the closed convex set on which f is smooth.
/// An empty `project` means the whole space.
struct OmegaProjector {
  std::function<Point(const Point&)> project;

  bool is_identity() const { return !project; }
  Point operator()(const Point& z) const { return project ? project(z) : z; }
};

/// Known curvature constants: Lipschitz constant of grad f (M_bar), weak
/// convexity constant (m_bar) and the diameter of dom h.
struct CurvatureInfo {
  std::optional<double> M_bar;
  std::optional<double> m_bar;
  std::optional<double> Dh;

  void validate() const {
    if (M_bar && !(*M_bar > 0)) throw std::invalid_argument("M_bar must be positive");
    if (m_bar && !(*m_bar >= 0)) throw std::invalid_argument("m_bar must be nonnegative");
    if (Dh && !(*Dh > 0)) throw std::invalid_argument("Dh must be positive");
    if (M_bar && m_bar && *m_bar > *M_bar) {
      throw std::invalid_argument("m_bar exceeds M_bar");
    }
  }
};

struct ProblemInstance {
  SmoothOracle f;
  ConvexPartOracle h;
  OmegaProjector omega;
  CurvatureInfo curvature;
  Point initial_point;
  std::string label;
  bool convex = false;

  double objective(const Point& z) const { return f.value(z) + h.value(z); }

  void validate() const {
    if (!f.value || !f.gradient) throw std::invalid_argument(label + ": smooth oracle incomplete");
    if (!h.value || !h.resolvent) throw std::invalid_argument(label + ": convex oracle incomplete");
    curvature.validate();
    if (!initial_point.all_finite()) throw std::invalid_argument(label + ": initial point not finite");
    if (!std::isfinite(h.value(initial_point))) {
      throw std::invalid_argument(label + ": initial point outside dom h");
    }
  }
};

/// f(at) + <grad f(at), z - at>
inline double linearize(const SmoothOracle& f, const Point& z, const Point& at) {
  z.check_same(at);
  return f.value(at) + f.gradient(at).dot(z - at);
}

/// Same as above with f(at) and grad f(at) already known.
inline double linearize(double f_at, const Point& grad_at, const Point& z, const Point& at) {
  return f_at + grad_at.dot(z - at);
}

/// f(z) - l_f(z; at), using the oracle's direct form when it has one.
inline double linearization_gap(const SmoothOracle& f, const Point& z, double f_z, const Point& at,
                                double f_at, const Point& grad_at) {
  if (f.gap) return f.gap(z, at);
  return f_z - linearize(f_at, grad_at, z, at);
}

/// argmin_u { l_f(u; center) + h(u) + (c/2)||u - center||^2 }, given grad f(center).
inline Point prox_step(const ProblemInstance& problem, const Point& center, const Point& grad_center,
                       double c) {
  if (!(c > 0) || !std::isfinite(c)) {
    throw std::invalid_argument("prox_step: coefficient must be positive and finite");
  }
  return problem.h.resolvent(combine(1.0, center, -1.0 / c, grad_center), c);
}

inline Point prox_step(const ProblemInstance& problem, const Point& center, double c) {
  return prox_step(problem, center, problem.f.gradient(center), c);
}

/// ||resolvent(y + v - grad f(y), 1) - y|| / (1 + ||y||); zero exactly when
/// v lies in grad f(y) + dh(y).
inline double residual_error(const ProblemInstance& problem, const Point& y, const Point& v) {
  Point center = y + v - problem.f.gradient(y);
  const Point fixed = problem.h.resolvent(center, 1.0);
  return distance(fixed, y) / (1.0 + y.norm());
}

/// Checks v in grad f(y) + dh(y) through the fixed point
/// y = resolvent(y + v - grad f(y), 1), relative to 1 + ||y||.
inline bool residual_check(const ProblemInstance& problem, const Point& y, const Point& v, double tol) {
  return residual_error(problem, y, v) <= tol;
}

/// ||v|| / (||grad f(z0)|| + 1)
inline double relative_stationarity(const Point& v, const Point& grad_at_start) {
  return v.norm() / (grad_at_start.norm() + 1.0);
}

}  // namespace ncfista
