#pragma once

#include "ncfista/problem.hpp"
#include "ncfista/prox.hpp"
#include "ncfista/random.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <string>

namespace ncfista::problems {

/// f(V, W) = 1/2 ||X - V W||_F^2 over V >= 0, W >= 0.
struct NmfData {
  Eigen::MatrixXd X;  // n x l
  Eigen::Index k = 1;

  Eigen::Index n() const { return X.rows(); }
  Eigen::Index l() const { return X.cols(); }
};

/// Point is the pair (V, W) with V n x k and W k x l. Omega is the whole
/// space and dom h is unbounded, so no curvature constants are known.
/// Start: (1^{n x k} / (n k), 1^{k x l} / (k l)).
inline ProblemInstance build_nmf(const Eigen::MatrixXd& X, Eigen::Index k) {
  if (k < 1) throw std::invalid_argument("build_nmf: k must be positive");
  if (X.size() == 0) throw std::invalid_argument("build_nmf: empty data matrix");
  if (!X.allFinite() || X.minCoeff() < 0) throw std::invalid_argument("build_nmf: X must be finite and nonnegative");
  auto data = std::make_shared<const NmfData>(NmfData{X, k});
  const Eigen::Index n = X.rows(), l = X.cols();

  ProblemInstance p;
  p.f.value = [data](const Point& z) {
    return 0.5 * (data->X - z.matrix() * z.second()).squaredNorm();
  };
  p.f.gradient = [data](const Point& z) {
    const auto V = z.matrix();
    const auto W = z.second();
    const Eigen::MatrixXd residual = V * W - data->X;
    Point g(z.shape());
    g.matrix().noalias() = residual * W.transpose();
    g.second().noalias() = V.transpose() * residual;
    return g;
  };
  p.h = indicator([](const Point& z) { return project_nonneg(z); }, membership::nonneg);
  const double nk = static_cast<double>(n * k), kl = static_cast<double>(k * l);
  p.initial_point = Point::from_pair(Eigen::MatrixXd::Constant(n, k, 1.0 / nk), Eigen::MatrixXd::Constant(k, l, 1.0 / kl));
  p.label = "nmf(" + std::to_string(n) + "x" + std::to_string(l) + ",k=" + std::to_string(k) + ")";
  return p;
}

/// X ~ U[0,1]^{n x l} from a seeded stream.
inline Eigen::MatrixXd nmf_data_matrix(std::uint64_t seed, Eigen::Index n, Eigen::Index l) {
  return Rng(seed, 31).uniform_matrix(n, l);
}

inline ProblemInstance gen_nmf(std::uint64_t seed, Eigen::Index n, Eigen::Index l, Eigen::Index k) {
  ProblemInstance p = build_nmf(nmf_data_matrix(seed, n, l), k);
  p.label.pop_back();
  p.label += ",seed=" + std::to_string(seed) + ")";
  return p;
}

}  // namespace ncfista::problems
