#pragma once

#include "ncfista/point.hpp"
#include "ncfista/problem.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace ncfista {

// ---------------------------------------------------------------------------
// Dense spectral routines
// ---------------------------------------------------------------------------

/// Symmetric eigendecomposition Z = Q diag(values) Q', values descending.
struct SymmetricEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;

  Eigen::MatrixXd reconstruct() const { return vectors * values.asDiagonal() * vectors.transpose(); }
};

/// Thin SVD Z = U diag(values) V', values descending.
struct SingularDecomposition {
  Eigen::VectorXd values;
  Eigen::MatrixXd U;
  Eigen::MatrixXd V;

  Eigen::MatrixXd reconstruct() const { return U * values.asDiagonal() * V.transpose(); }
};

inline Eigen::MatrixXd symmetric_part(const Eigen::Ref<const Eigen::MatrixXd>& Z) {
  if (Z.rows() != Z.cols()) throw std::invalid_argument("symmetric_part: matrix is not square");
  return 0.5 * (Z + Z.transpose());
}

/// Eigendecomposition of the symmetric part of Z.
inline SymmetricEigen symmetric_eigen(const Eigen::Ref<const Eigen::MatrixXd>& Z) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric_part(Z));
  if (solver.info() != Eigen::Success) throw std::runtime_error("symmetric eigensolver failed");
  SymmetricEigen out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

inline SingularDecomposition thin_svd(const Eigen::Ref<const Eigen::MatrixXd>& Z) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(Z, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.singularValues(), svd.matrixU(), svd.matrixV()};
}

// ---------------------------------------------------------------------------
// Projections and proximal maps
// ---------------------------------------------------------------------------

/// Euclidean projection of v onto {z : sum z = 1, z >= 0} by sort and threshold.
inline Eigen::VectorXd project_simplex(const Eigen::Ref<const Eigen::VectorXd>& v) {
  const Eigen::Index n = v.size();
  if (n < 1) throw std::invalid_argument("project_simplex: empty vector");
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0;
  double shift = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    cumsum += u[j];
    const double t = (cumsum - 1.0) / static_cast<double>(j + 1);
    if (u[j] - t > 0) shift = t;
  }
  return (v.array() - shift).max(0.0).matrix();
}

inline Point project_simplex(const Point& v) {
  if (v.shape().kind != Shape::Kind::vector) throw std::invalid_argument("project_simplex: expects a vector");
  return Point(v.shape(), project_simplex(v.data()));
}

/// Nearest symmetric PSD matrix to the symmetric part of Z.
inline Eigen::MatrixXd project_psd(const Eigen::Ref<const Eigen::MatrixXd>& Z) {
  const SymmetricEigen eig = symmetric_eigen(Z);
  const Eigen::MatrixXd out = eig.vectors * eig.values.cwiseMax(0.0).asDiagonal() * eig.vectors.transpose();
  return symmetric_part(out);
}

inline Point project_psd(const Point& Z) { return Point::from_matrix(project_psd(Z.matrix())); }

/// Projection onto {Z symmetric PSD, tr Z = 1}: eigenvalues go to the simplex.
inline Eigen::MatrixXd project_spectraplex(const Eigen::Ref<const Eigen::MatrixXd>& Z) {
  const SymmetricEigen eig = symmetric_eigen(Z);
  const Eigen::VectorXd lam = project_simplex(eig.values);
  const Eigen::MatrixXd out = eig.vectors * lam.asDiagonal() * eig.vectors.transpose();
  return symmetric_part(out);
}

inline Point project_spectraplex(const Point& Z) { return Point::from_matrix(project_spectraplex(Z.matrix())); }

/// argmin_U { weight ||U||_* + I{||U||_F <= R} + (c/2) ||U - Z||_F^2 }.
///
/// Singular values are soft-thresholded by weight / c; if the result leaves
/// the ball it is scaled radially back to radius R (the ball multiplier acts
/// as a uniform shrink in singular-value space).
inline Eigen::MatrixXd prox_nuclear_ball(const Eigen::Ref<const Eigen::MatrixXd>& Z, double c, double weight,
                                         double R) {
  if (!(c > 0) || !(R > 0) || !(weight >= 0)) {
    throw std::invalid_argument("prox_nuclear_ball: need c > 0, R > 0, weight >= 0");
  }
  if (Z.size() == 0) return Z;
  const SingularDecomposition svd = thin_svd(Z);
  Eigen::VectorXd s = (svd.values.array() - weight / c).max(0.0).matrix();
  const double norm = s.norm();
  if (norm > R) s *= R / norm;
  return svd.U * s.asDiagonal() * svd.V.transpose();
}

inline Point prox_nuclear_ball(const Point& Z, double c, double weight, double R) {
  return Point::from_matrix(prox_nuclear_ball(Z.matrix(), c, weight, R));
}

/// Entrywise max(., 0); applies blockwise to matrix pairs.
inline Point project_nonneg(const Point& Z) {
  return Point(Z.shape(), Z.data().cwiseMax(0.0));
}

/// Projection onto the Frobenius ball of radius R.
inline Point project_ball(const Point& Z, double R) {
  const double n = Z.norm();
  return n > R ? (R / n) * Z : Z;
}

// ---------------------------------------------------------------------------
// Convex-part oracles
// ---------------------------------------------------------------------------

/// h = 0.
inline ConvexPartOracle zero_convex_part() {
  return {[](const Point&) { return 0.0; }, [](const Point& center, double) { return center; }};
}

/// Indicator of a closed convex set given its projection and a membership
/// test. The resolvent of an indicator is the projection for every c.
inline ConvexPartOracle indicator(std::function<Point(const Point&)> project,
                                  std::function<bool(const Point&)> contains) {
  ConvexPartOracle h;
  h.value = [contains = std::move(contains)](const Point& z) { return contains(z) ? 0.0 : kInfinity; };
  h.resolvent = [project = std::move(project)](const Point& center, double) { return project(center); };
  return h;
}

namespace membership {

inline constexpr double kTol = 1e-9;

inline bool simplex(const Point& z) {
  return std::abs(z.data().sum() - 1.0) <= kTol * std::max<double>(1.0, static_cast<double>(z.size())) &&
         z.data().minCoeff() >= -kTol;
}

inline bool nonneg(const Point& z) { return z.size() == 0 || z.data().minCoeff() >= 0.0; }

inline bool spectraplex(const Point& z) {
  const auto Z = z.matrix();
  if (Z.rows() != Z.cols()) return false;
  const double asym = (Z - Z.transpose()).norm();
  if (asym > kTol * (1.0 + Z.norm())) return false;
  if (std::abs(Z.trace() - 1.0) > kTol * static_cast<double>(Z.rows())) return false;
  return symmetric_eigen(Z).values.minCoeff() >= -kTol;
}

}  // namespace membership

}  // namespace ncfista
