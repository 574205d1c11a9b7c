#pragma once

#include "ncfista/ncfista.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <vector>

namespace ncfista::testing {

/// Central differences of f at z along every coordinate.
inline Eigen::VectorXd fd_gradient(const std::function<double(const Point&)>& f, const Point& z, double h = 1e-6) {
  Eigen::VectorXd g(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    Point zp = z, zm = z;
    zp.data()(i) += h;
    zm.data()(i) -= h;
    g(i) = (f(zp) - f(zm)) / (2.0 * h);
  }
  return g;
}

/// ||a - b|| / max(||b||, 1e-12)
inline double rel_err(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).norm() / std::max(b.norm(), 1e-12);
}

/// Same shape as `like`, entries ~ N(0, scale^2).
inline Point random_point(Rng& rng, const Point& like, double scale = 1.0) {
  Point p = like;
  for (Eigen::Index i = 0; i < p.size(); ++i) p.data()(i) = scale * rng.normal();
  return p;
}

inline Point vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return Point::from_vector(v);
}

/// f(z) = (s/2) ||z||^2 with no constraint.
inline ProblemInstance scaled_quadratic(double s, Eigen::Index n = 1, ConvexPartOracle h = zero_convex_part()) {
  ProblemInstance p;
  p.f.value = [s](const Point& z) { return 0.5 * s * z.squared_norm(); };
  p.f.gradient = [s](const Point& z) { return s * z; };
  p.f.gap = [s](const Point& z, const Point& at) { return 0.5 * s * (z.data() - at.data()).squaredNorm(); };
  p.h = std::move(h);
  p.initial_point = Point::from_vector(Eigen::VectorXd::Constant(n, 0.5));
  p.label = "quadratic";
  return p;
}

/// Textbook FISTA on min f + indicator(C) with step 1/L, started from
/// t = 2 (matching A0 = 2) and z = y = y0. Returns y_1..y_iters.
inline std::vector<Eigen::VectorXd> reference_fista(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& grad,
                                                    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& proj,
                                                    const Eigen::VectorXd& y0, double L, int iters) {
  std::vector<Eigen::VectorXd> ys;
  Eigen::VectorXd y = y0, z = y0;
  double t = 2.0;
  for (int k = 0; k < iters; ++k) {
    const Eigen::VectorXd y_new = proj(z - grad(z) / L);
    const double t_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    z = y_new + ((t - 1.0) / t_new) * (y_new - y);
    y = y_new;
    t = t_new;
    ys.push_back(y);
  }
  return ys;
}

}  // namespace ncfista::testing
