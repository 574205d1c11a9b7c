#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>

namespace ncfista::problems {

/// Extreme eigenvalues (lambda_min, lambda_max) of alpha2 * P_A - alpha1 * P_B.
using SpectrumExtremes = std::function<std::pair<double, double>(double alpha1, double alpha2)>;

struct Alphas {
  double alpha1 = 0;
  double alpha2 = 0;
  double lambda_min = 0;
  double lambda_max = 0;
  int rounds = 0;
};

class CalibrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

/// Eigenvalues of alpha2 P_A - alpha1 P_B are positively homogeneous in
/// (alpha1, alpha2), so the ratio -lambda_min / lambda_max depends on
/// r = alpha1 / alpha2 only and is nondecreasing in r. Bisection on r hits the
/// target ratio; alpha2 then rescales lambda_max onto M_target.
inline Alphas calibrate_by_ratio(const SpectrumExtremes& extremes, double r_guess, double M_target,
                                 double m_target, double rel_tol) {
  const double target = m_target / M_target;
  auto ratio = [&](double r) {
    const auto [lo, hi] = extremes(r, 1.0);
    return hi > 0 ? -lo / hi : std::numeric_limits<double>::infinity();
  };
  double r_lo = 0.0;
  double r_hi = r_guess > 0 ? r_guess : 1.0;
  for (int i = 0; ratio(r_hi) < target; ++i) {
    if (i > 200) throw CalibrationError("calibrate_alphas: target ratio unreachable");
    r_lo = r_hi;
    r_hi *= 2.0;
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (r_lo + r_hi);
    const double q = ratio(mid);
    if (std::abs(q - target) <= 1e-3 * rel_tol * target) {
      r_lo = r_hi = mid;
      break;
    }
    (q < target ? r_lo : r_hi) = mid;
  }
  const double r = 0.5 * (r_lo + r_hi);
  const auto [lo, hi] = extremes(r, 1.0);
  if (!(hi > 0)) throw CalibrationError("calibrate_alphas: degenerate spectrum");
  Alphas a;
  a.alpha2 = M_target / hi;
  a.alpha1 = r * a.alpha2;
  std::tie(a.lambda_min, a.lambda_max) = extremes(a.alpha1, a.alpha2);
  if (std::abs(a.lambda_max - M_target) > rel_tol * M_target ||
      std::abs(-a.lambda_min - m_target) > rel_tol * m_target) {
    throw CalibrationError("calibrate_alphas: ratio bisection missed the targets");
  }
  return a;
}

}  // namespace detail

/// Chooses (alpha1, alpha2) so that lambda_max(H) = M_target and
/// lambda_min(H) = -m_target, each within `rel_tol`.
///
/// First tries the alternating rescaling alpha1 <- alpha1 m_target / |lambda_min|,
/// alpha2 <- alpha2 M_target / lambda_max from (alpha1_init, alpha2_init). That
/// map can oscillate when the top eigenvectors of the two parts nearly
/// coincide; after `max_rounds` it falls back to bisection on alpha1 / alpha2.
/// `rounds` is -1 when the fallback produced the answer.
inline Alphas calibrate_alphas(const SpectrumExtremes& extremes, double alpha1_init, double alpha2_init,
                               double M_target, double m_target, double rel_tol = 0.01,
                               int max_rounds = 100) {
  if (!(M_target > 0) || !(m_target > 0) || m_target > M_target) {
    throw std::invalid_argument("calibrate_alphas: need M_target >= m_target > 0");
  }
  if (!(alpha1_init > 0) || !(alpha2_init > 0)) {
    throw std::invalid_argument("calibrate_alphas: initial alphas must be positive");
  }
  Alphas a{alpha1_init, alpha2_init, 0, 0, 0};
  for (int round = 0; round <= max_rounds; ++round) {
    std::tie(a.lambda_min, a.lambda_max) = extremes(a.alpha1, a.alpha2);
    a.rounds = round;
    const bool max_ok = std::abs(a.lambda_max - M_target) <= rel_tol * M_target;
    const bool min_ok = std::abs(-a.lambda_min - m_target) <= rel_tol * m_target;
    if (max_ok && min_ok) return a;
    if (round == max_rounds || !std::isfinite(a.alpha1) || !std::isfinite(a.alpha2)) break;
    // A sign-wrong extreme means that part is swamped; grow it geometrically.
    a.alpha1 *= a.lambda_min < 0 ? m_target / -a.lambda_min : 10.0;
    a.alpha2 *= a.lambda_max > 0 ? M_target / a.lambda_max : 10.0;
  }
  Alphas b = detail::calibrate_by_ratio(extremes, alpha1_init / alpha2_init, M_target, m_target, rel_tol);
  b.rounds = -1;
  return b;
}

/// Dense form: H = alpha2 * P_A - alpha1 * P_B with both parts PSD and nonzero.
inline Alphas calibrate_alphas(const Eigen::MatrixXd& P_A, const Eigen::MatrixXd& P_B, double M_target,
                               double m_target, double rel_tol = 0.01, int max_rounds = 100) {
  if (P_A.rows() != P_A.cols() || P_B.rows() != P_B.cols() || P_A.rows() != P_B.rows()) {
    throw std::invalid_argument("calibrate_alphas: parts must be square and the same size");
  }
  const double top_A = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(P_A, Eigen::EigenvaluesOnly)
                           .eigenvalues()
                           .maxCoeff();
  const double top_B = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(P_B, Eigen::EigenvaluesOnly)
                           .eigenvalues()
                           .maxCoeff();
  if (!(top_A > 0) || !(top_B > 0)) throw CalibrationError("calibrate_alphas: a part is zero");
  SpectrumExtremes ext = [&](double a1, double a2) {
    const Eigen::MatrixXd H = a2 * P_A - a1 * P_B;
    const Eigen::VectorXd ev =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(H, Eigen::EigenvaluesOnly).eigenvalues();
    return std::make_pair(ev.minCoeff(), ev.maxCoeff());
  };
  return calibrate_alphas(ext, m_target / top_B, M_target / top_A, M_target, m_target, rel_tol, max_rounds);
}

}  // namespace ncfista::problems
