#pragma once

#include "ncfista/problem.hpp"
#include "ncfista/problems/calibration.hpp"
#include "ncfista/prox.hpp"
#include "ncfista/random.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace ncfista::problems {

/// f(Z) = -(alpha1/2) ||D B(Z)||^2 + (alpha2/2) ||A(Z) - b||^2 over the
/// spectraplex, with [A(Z)]_i = <A_i, Z> and [B(Z)]_j = <B_j, Z>.
///
/// Iterates are symmetric, so the operators act through the symmetric parts
/// of A_i and B_j; rows of `opA`/`opB` hold vec(sym(A_i)) and vec(sym(B_j)).
struct QpMatrixData {
  using SparseRows = Eigen::SparseMatrix<double, Eigen::RowMajor>;

  std::uint64_t seed = 0;
  Eigen::Index n = 0;
  double density = 1.0;
  std::vector<Eigen::SparseMatrix<double>> A_mats;  // l matrices, n x n
  std::vector<Eigen::SparseMatrix<double>> B_mats;  // n matrices, n x n
  Eigen::VectorXd D;
  Eigen::VectorXd b;
  double alpha1 = 0;
  double alpha2 = 0;

  SparseRows opA;  // l x n^2
  SparseRows opB;  // n x n^2
  Eigen::MatrixXd K_half;  // (G G')^{1/2}, G = [opA; opB]
  double lambda_min = 0;
  double lambda_max = 0;

  Eigen::Index l() const { return static_cast<Eigen::Index>(A_mats.size()); }

  double value(const Eigen::VectorXd& vecZ) const {
    const Eigen::VectorXd bz = D.cwiseProduct(opB * vecZ);
    return -0.5 * alpha1 * bz.squaredNorm() + 0.5 * alpha2 * (opA * vecZ - b).squaredNorm();
  }

  /// Adjoint form: -alpha1 sum_j D_jj^2 <B_j,Z> B_j + alpha2 sum_i (<A_i,Z> - b_i) A_i.
  Eigen::VectorXd gradient(const Eigen::VectorXd& vecZ) const {
    const Eigen::VectorXd wb = (-alpha1) * D.cwiseAbs2().cwiseProduct(opB * vecZ);
    const Eigen::VectorXd wa = alpha2 * (opA * vecZ - b);
    return opB.transpose() * wb + opA.transpose() * wa;
  }

  double quadratic_form(const Eigen::VectorXd& d) const {
    return -alpha1 * D.cwiseProduct(opB * d).squaredNorm() + alpha2 * (opA * d).squaredNorm();
  }

  void factor_operators() {
    const Eigen::Index l_ = l();
    Eigen::MatrixXd G(l_ + n, n * n);
    G.topRows(l_) = Eigen::MatrixXd(opA);
    G.bottomRows(n) = Eigen::MatrixXd(opB);
    const Eigen::MatrixXd K = G * G.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ke(K);
    K_half = ke.eigenvectors() * ke.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
             ke.eigenvectors().transpose();
  }

  /// Extreme eigenvalues of the n^2 x n^2 Hessian G' S G with G = [opA; opB]
  /// and S = diag(alpha2, -alpha1 D^2), via the (l+n) x (l+n) matrix
  /// K^{1/2} S K^{1/2}, K = G G'. Zero is included since the Hessian
  /// vanishes on antisymmetric directions.
  std::pair<double, double> hessian_extremes(double a1, double a2) const {
    const Eigen::Index l_ = l();
    Eigen::VectorXd s(l_ + n);
    s.head(l_).setConstant(a2);
    s.tail(n) = -a1 * D.cwiseAbs2();
    Eigen::MatrixXd T = K_half * s.asDiagonal() * K_half;
    T = 0.5 * (T + T.transpose());
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(T, Eigen::EigenvaluesOnly).eigenvalues();
    return {std::min(ev.minCoeff(), 0.0), std::max(ev.maxCoeff(), 0.0)};
  }
};

namespace detail {

inline Eigen::SparseMatrix<double> sparse_uniform(Rng& rng, Eigen::Index n, double density) {
  std::vector<Eigen::Triplet<double>> trips;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      if (rng.uniform() < density) trips.emplace_back(i, j, rng.uniform());
  Eigen::SparseMatrix<double> m(n, n);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

inline QpMatrixData::SparseRows stack_symmetrized(const std::vector<Eigen::SparseMatrix<double>>& mats, Eigen::Index n) {
  std::vector<Eigen::Triplet<double>> trips;
  for (std::size_t r = 0; r < mats.size(); ++r) {
    const Eigen::SparseMatrix<double> sym = 0.5 * (mats[r] + Eigen::SparseMatrix<double>(mats[r].transpose()));
    for (Eigen::Index k = 0; k < sym.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(sym, k); it; ++it)
        trips.emplace_back(static_cast<Eigen::Index>(r), it.col() * n + it.row(), it.value());
  }
  QpMatrixData::SparseRows out(static_cast<Eigen::Index>(mats.size()), n * n);
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

}  // namespace detail

struct QpMatrixOptions {
  Eigen::Index l = 10;
  Eigen::Index n = 20;
  double density = 0.025;
  double M_bar_target = 1e6;
  double m_bar_target = 1e2;
};

inline std::shared_ptr<const QpMatrixData> make_qp_matrix_data(std::uint64_t seed, const QpMatrixOptions& opt) {
  if (opt.l < 1 || opt.n < 1) throw std::invalid_argument("gen_qp_matrix: need l, n >= 1");
  if (!(opt.density > 0) || opt.density > 1) throw std::invalid_argument("gen_qp_matrix: density must lie in (0, 1]");
  if (!(opt.m_bar_target > 0) || opt.m_bar_target > opt.M_bar_target) {
    throw std::invalid_argument("gen_qp_matrix: need M_bar_target >= m_bar_target > 0");
  }
  auto d = std::make_shared<QpMatrixData>();
  d->seed = seed;
  d->n = opt.n;
  d->density = opt.density;
  Rng rd(seed, 1), rb(seed, 2), ra(seed, 3), rv(seed, 4);
  d->D.resize(opt.n);
  for (Eigen::Index i = 0; i < opt.n; ++i) d->D(i) = static_cast<double>(rd.uniform_int(1, 1000));
  for (Eigen::Index j = 0; j < opt.n; ++j) d->B_mats.push_back(detail::sparse_uniform(rb, opt.n, opt.density));
  for (Eigen::Index i = 0; i < opt.l; ++i) d->A_mats.push_back(detail::sparse_uniform(ra, opt.n, opt.density));
  d->b = rv.uniform_matrix(opt.l, 1);
  d->opA = detail::stack_symmetrized(d->A_mats, opt.n);
  d->opB = detail::stack_symmetrized(d->B_mats, opt.n);
  d->factor_operators();

  const auto [lo_A, hi_A] = d->hessian_extremes(0.0, 1.0);
  const auto [lo_B, hi_B] = d->hessian_extremes(1.0, 0.0);
  if (!(hi_A > 0) || !(lo_B < 0)) throw CalibrationError("gen_qp_matrix: operator is identically zero");
  const Alphas al = calibrate_alphas([&](double a1, double a2) { return d->hessian_extremes(a1, a2); },
                                     opt.m_bar_target / -lo_B, opt.M_bar_target / hi_A, opt.M_bar_target,
                                     opt.m_bar_target);
  d->alpha1 = al.alpha1;
  d->alpha2 = al.alpha2;
  d->lambda_min = al.lambda_min;
  d->lambda_max = al.lambda_max;
  return d;
}

/// Problem over the spectraplex with Omega = PSD cone, started at I/n.
inline ProblemInstance qp_matrix_problem(std::shared_ptr<const QpMatrixData> data) {
  ProblemInstance p;
  const Eigen::Index n = data->n;
  p.f.value = [data](const Point& Z) { return data->value(Z.data()); };
  p.f.gradient = [data](const Point& Z) { return Point(Z.shape(), data->gradient(Z.data())); };
  p.f.gap = [data](const Point& z, const Point& at) { return 0.5 * data->quadratic_form(z.data() - at.data()); };
  p.h = indicator([](const Point& z) { return project_spectraplex(z); }, membership::spectraplex);
  p.omega.project = [](const Point& z) { return project_psd(z); };
  p.curvature.M_bar = std::max(data->lambda_max, -data->lambda_min);
  p.curvature.m_bar = -data->lambda_min;
  p.curvature.Dh = std::sqrt(2.0);
  p.initial_point = Point::from_matrix(Eigen::MatrixXd::Identity(n, n) / static_cast<double>(n));
  p.label = "qp_matrix(n=" + std::to_string(n) + ",l=" + std::to_string(data->l()) +
            ",seed=" + std::to_string(data->seed) + ")";
  return p;
}

inline ProblemInstance gen_qp_matrix(std::uint64_t seed, Eigen::Index l, Eigen::Index n, double density,
                                     double M_bar_target, double m_bar_target) {
  return qp_matrix_problem(make_qp_matrix_data(seed, {l, n, density, M_bar_target, m_bar_target}));
}

}  // namespace ncfista::problems
