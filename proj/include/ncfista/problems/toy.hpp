#pragma once

#include "ncfista/problem.hpp"
#include "ncfista/prox.hpp"

#include <Eigen/Dense>

#include <algorithm>

namespace ncfista::problems {

/// f(z) = -z^2 / 2 on h = indicator of [0, 1], Omega = R, started at 0.5.
/// Stationary points are 0 and 1; (M_bar, m_bar) = (1, 1).
inline ProblemInstance concave_interval(double start = 0.5) {
  ProblemInstance p;
  p.f.value = [](const Point& z) { return -0.5 * z.squared_norm(); };
  p.f.gradient = [](const Point& z) { return -1.0 * z; };
  p.f.gap = [](const Point& z, const Point& at) { return -0.5 * distance(z, at) * distance(z, at); };
  p.h = indicator(
      [](const Point& z) {
        Point out = z;
        out.data() = z.data().cwiseMax(0.0).cwiseMin(1.0);
        return out;
      },
      [](const Point& z) {
        return z.data().minCoeff() >= -membership::kTol && z.data().maxCoeff() <= 1.0 + membership::kTol;
      });
  p.curvature.M_bar = 1.0;
  p.curvature.m_bar = 1.0;
  p.curvature.Dh = 1.0;
  p.initial_point = Point::from_vector(Eigen::VectorXd::Constant(1, start));
  p.label = "concave_interval";
  return p;
}

}  // namespace ncfista::problems
