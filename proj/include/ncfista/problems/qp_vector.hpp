#pragma once

#include "ncfista/problem.hpp"
#include "ncfista/problems/calibration.hpp"
#include "ncfista/prox.hpp"
#include "ncfista/random.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <memory>
#include <string>

namespace ncfista::problems {

/// f(z) = -(alpha1/2) ||D B z||^2 + (alpha2/2) ||A z - b||^2 over the unit simplex.
struct QpVectorData {
  std::uint64_t seed = 0;
  Eigen::VectorXd D;  // diagonal of D
  Eigen::MatrixXd B;  // n x n
  Eigen::MatrixXd A;  // l x n
  Eigen::VectorXd b;  // l
  double alpha1 = 0;
  double alpha2 = 0;
  bool convex = false;

  // derived
  Eigen::MatrixXd DB;
  Eigen::MatrixXd H;   // Hessian alpha2 A'A - alpha1 (DB)'(DB)
  Eigen::VectorXd Atb; // alpha2 A'b
  double lambda_min = 0;
  double lambda_max = 0;

  Eigen::Index n() const { return B.cols(); }
  Eigen::Index l() const { return A.rows(); }

  double value(const Eigen::VectorXd& z) const {
    return -0.5 * alpha1 * (DB * z).squaredNorm() + 0.5 * alpha2 * (A * z - b).squaredNorm();
  }
  Eigen::VectorXd gradient(const Eigen::VectorXd& z) const { return H * z - Atb; }

  void finalize() {
    DB = D.asDiagonal() * B;
    H = alpha2 * A.transpose() * A - alpha1 * DB.transpose() * DB;
    H = 0.5 * (H + H.transpose());
    Atb = alpha2 * A.transpose() * b;
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(H, Eigen::EigenvaluesOnly).eigenvalues();
    lambda_min = ev.minCoeff();
    lambda_max = ev.maxCoeff();
  }
};

struct QpVectorOptions {
  Eigen::Index l = 20;
  Eigen::Index n = 100;
  double M_bar_target = 1e4;
  double m_bar_target = 1e2;
  bool convex = false;  // force alpha1 = 0
};

/// Seeded draw of D ~ U{1..1000}, B, A, b ~ U[0,1] and calibrated alphas.
/// Every matrix has its own random stream.
inline std::shared_ptr<const QpVectorData> make_qp_vector_data(std::uint64_t seed, const QpVectorOptions& opt) {
  if (opt.l < 1 || opt.n < 1) throw std::invalid_argument("gen_qp_vector: need l, n >= 1");
  if (!(opt.M_bar_target > 0) || (!opt.convex && !(opt.m_bar_target > 0)) ||
      (!opt.convex && opt.m_bar_target > opt.M_bar_target)) {
    throw std::invalid_argument("gen_qp_vector: need M_bar_target >= m_bar_target > 0");
  }
  auto d = std::make_shared<QpVectorData>();
  d->seed = seed;
  d->convex = opt.convex;
  Rng rd(seed, 1), rb(seed, 2), ra(seed, 3), rv(seed, 4);
  d->D.resize(opt.n);
  for (Eigen::Index i = 0; i < opt.n; ++i) d->D(i) = static_cast<double>(rd.uniform_int(1, 1000));
  d->B = rb.uniform_matrix(opt.n, opt.n);
  d->A = ra.uniform_matrix(opt.l, opt.n);
  d->b = rv.uniform_matrix(opt.l, 1);

  const Eigen::MatrixXd PA = d->A.transpose() * d->A;
  if (opt.convex) {
    const double top = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(PA, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
    d->alpha1 = 0.0;
    d->alpha2 = opt.M_bar_target / top;
  } else {
    const Eigen::MatrixXd DB = d->D.asDiagonal() * d->B;
    const Eigen::MatrixXd PB = DB.transpose() * DB;
    const Alphas al = calibrate_alphas(PA, PB, opt.M_bar_target, opt.m_bar_target);
    d->alpha1 = al.alpha1;
    d->alpha2 = al.alpha2;
  }
  d->finalize();
  return d;
}

/// Problem over the unit simplex with Omega = R^n, started at the centroid.
/// Curvature metadata holds the exact extreme Hessian eigenvalues.
inline ProblemInstance qp_vector_problem(std::shared_ptr<const QpVectorData> data) {
  ProblemInstance p;
  const Eigen::Index n = data->n();
  p.f.value = [data](const Point& z) { return data->value(z.data()); };
  p.f.gradient = [data](const Point& z) { return Point(z.shape(), data->gradient(z.data())); };
  p.f.gap = [data](const Point& z, const Point& at) {
    const Eigen::VectorXd d = z.data() - at.data();
    return 0.5 * d.dot(data->H * d);
  };
  p.h = indicator([](const Point& z) { return project_simplex(z); }, membership::simplex);
  p.curvature.M_bar = std::max(data->lambda_max, -data->lambda_min);
  p.curvature.m_bar = data->convex ? 0.0 : std::max(-data->lambda_min, 0.0);
  p.curvature.Dh = std::sqrt(2.0);
  p.initial_point = Point::from_vector(Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n)));
  p.convex = data->convex;
  p.label = "qp_vector(n=" + std::to_string(n) + ",l=" + std::to_string(data->l()) +
            ",seed=" + std::to_string(data->seed) + ")";
  return p;
}

inline ProblemInstance gen_qp_vector(std::uint64_t seed, Eigen::Index l, Eigen::Index n, double M_bar_target,
                                     double m_bar_target) {
  return qp_vector_problem(make_qp_vector_data(seed, {l, n, M_bar_target, m_bar_target, false}));
}

}  // namespace ncfista::problems
