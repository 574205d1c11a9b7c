#pragma once

#include "ncfista/problem.hpp"
#include "ncfista/problems/movielens.hpp"
#include "ncfista/prox.hpp"
#include "ncfista/random.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

namespace ncfista::problems {

struct Observation {
  Eigen::Index row = 0;  // 0-indexed
  Eigen::Index col = 0;
  double value = 0;
};

struct MatrixCompletionParams {
  double mu = 2.0;
  double beta = 1.1;
  double tau = 1.0;
  double M_tilde = 1.0;

  double p0() const { return beta / tau; }
  /// (M_bar, m_bar) = (max{M_tilde, 2 mu beta / tau^2}, 2 mu beta / tau^2).
  double m_bar() const { return 2.0 * mu * beta / (tau * tau); }
  double M_bar() const { return std::max(M_tilde, m_bar()); }

  void validate() const {
    if (!(mu > 0) || !(beta > 0) || !(tau > 0) || !(M_tilde > 0)) {
      throw std::invalid_argument("matrix completion: mu, beta, tau, M_tilde must be positive");
    }
  }
};

/// f(X) = 1/2 ||P_Q(X - O)||_F^2 + mu sum_i [p(sigma_i) - p0 sigma_i],
/// p(t) = beta log(1 + t/tau), h(X) = mu p0 ||X||_* + I{||X||_F <= R}.
struct MatrixCompletionData {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  std::vector<Observation> observed;
  MatrixCompletionParams params;
  double R = 0;
  std::uint64_t seed = 0;

  /// p(t) - p0 t on t >= 0.
  double penalty(double t) const {
    return params.beta * std::log1p(t / params.tau) - params.p0() * t;
  }

  double data_term(const Eigen::MatrixXd& X) const {
    double s = 0;
    for (const Observation& o : observed) {
      const double r = X(o.row, o.col) - o.value;
      s += r * r;
    }
    return 0.5 * s;
  }

  /// Squared singular values and the matching singular vectors of the
  /// smaller side, from the Gram matrix.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gram_eigen(const Eigen::MatrixXd& X, bool vectors) const {
    const Eigen::MatrixXd G = rows <= cols ? Eigen::MatrixXd(X * X.transpose()) : Eigen::MatrixXd(X.transpose() * X);
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(G, vectors ? Eigen::ComputeEigenvectors
                                                                     : Eigen::EigenvaluesOnly);
  }

  double value(const Eigen::MatrixXd& X) const {
    const auto eig = gram_eigen(X, false);
    double pen = 0;
    for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
      pen += penalty(std::sqrt(std::max(eig.eigenvalues()(i), 0.0)));
    }
    return data_term(X) + params.mu * pen;
  }

  /// P_Q(X - O) + mu U diag(p'(sigma) - p0) V'. Since p'(t) - p0 = -beta t / (tau (tau + t)),
  /// the spectral part equals mu U diag(w) U' X with w = -beta / (tau (tau + sigma)),
  /// which needs only the Gram eigenvectors and is smooth at sigma = 0.
  Eigen::MatrixXd gradient(const Eigen::MatrixXd& X) const {
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(rows, cols);
    for (const Observation& o : observed) G(o.row, o.col) = X(o.row, o.col) - o.value;
    const auto eig = gram_eigen(X, true);
    const Eigen::VectorXd sigma = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Eigen::VectorXd w =
        (-params.beta / params.tau) * (sigma.array() + params.tau).inverse().matrix();
    const Eigen::MatrixXd& Q = eig.eigenvectors();
    const Eigen::MatrixXd S = Q * w.asDiagonal() * Q.transpose();
    if (rows <= cols) {
      G.noalias() += params.mu * S * X;
    } else {
      G.noalias() += params.mu * X * S;
    }
    return G;
  }

  double nuclear_norm(const Eigen::MatrixXd& X) const {
    return Eigen::BDCSVD<Eigen::MatrixXd>(X).singularValues().sum();
  }
};

/// Keeps `sub_rows` users and `sub_cols` items chosen uniformly at random
/// (seeded) and reindexes them; 0 keeps every user / item.
inline std::vector<Observation> select_submatrix(const RatingSet& ratings, Eigen::Index sub_rows,
                                                 Eigen::Index sub_cols, std::uint64_t seed,
                                                 Eigen::Index& rows_out, Eigen::Index& cols_out) {
  auto pick = [seed](std::int32_t total, Eigen::Index want, std::uint64_t stream) {
    std::vector<std::int32_t> ids(static_cast<std::size_t>(total));
    std::iota(ids.begin(), ids.end(), 1);
    if (want > 0 && want < total) {
      Rng rng(seed, stream);
      for (std::size_t i = 0; i < static_cast<std::size_t>(want); ++i) {
        const auto j = static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(i), total - 1));
        std::swap(ids[i], ids[j]);
      }
      ids.resize(static_cast<std::size_t>(want));
      std::sort(ids.begin(), ids.end());
    }
    std::vector<Eigen::Index> map(static_cast<std::size_t>(total) + 1, -1);
    for (std::size_t i = 0; i < ids.size(); ++i) map[static_cast<std::size_t>(ids[i])] = static_cast<Eigen::Index>(i);
    return std::make_pair(map, static_cast<Eigen::Index>(ids.size()));
  };
  const auto [row_map, nr] = pick(ratings.users, sub_rows, 11);
  const auto [col_map, nc] = pick(ratings.items, sub_cols, 12);
  std::vector<Observation> out;
  for (const Rating& r : ratings.entries) {
    if (r.user > ratings.users || r.item > ratings.items) continue;
    const Eigen::Index i = row_map[static_cast<std::size_t>(r.user)];
    const Eigen::Index j = col_map[static_cast<std::size_t>(r.item)];
    if (i >= 0 && j >= 0) out.push_back({i, j, r.value});
  }
  rows_out = nr;
  cols_out = nc;
  return out;
}

/// R: Frobenius norm of the matrix equal to O on Q and 5 elsewhere.
inline double completion_radius(const std::vector<Observation>& obs, Eigen::Index rows, Eigen::Index cols) {
  double s = 25.0 * static_cast<double>(rows * cols - static_cast<Eigen::Index>(obs.size()));
  for (const Observation& o : obs) s += o.value * o.value;
  return std::sqrt(s);
}

inline std::shared_ptr<const MatrixCompletionData> make_matrix_completion_data(
    std::vector<Observation> observed, Eigen::Index rows, Eigen::Index cols, const MatrixCompletionParams& params,
    std::uint64_t seed) {
  params.validate();
  if (rows < 1 || cols < 1) throw std::invalid_argument("matrix completion: empty matrix");
  auto d = std::make_shared<MatrixCompletionData>();
  d->rows = rows;
  d->cols = cols;
  d->observed = std::move(observed);
  d->params = params;
  d->seed = seed;
  d->R = completion_radius(d->observed, rows, cols);
  return d;
}

/// Omega is the whole space; the start is a seeded standard Gaussian matrix
/// (pulled radially into the ball if it lies outside).
inline ProblemInstance matrix_completion_problem(std::shared_ptr<const MatrixCompletionData> data) {
  ProblemInstance p;
  p.f.value = [data](const Point& X) { return data->value(X.matrix()); };
  p.f.gradient = [data](const Point& X) { return Point::from_matrix(data->gradient(X.matrix())); };
  const double weight = data->params.mu * data->params.p0();
  const double R = data->R;
  p.h.value = [data, weight, R](const Point& X) {
    if (X.norm() > R * (1.0 + 1e-9)) return kInfinity;
    return weight * data->nuclear_norm(X.matrix());
  };
  p.h.resolvent = [weight, R](const Point& center, double c) { return prox_nuclear_ball(center, c, weight, R); };
  p.curvature.M_bar = data->params.M_bar();
  p.curvature.m_bar = data->params.m_bar();
  p.curvature.Dh = 2.0 * R;
  Rng rng(data->seed, 21);
  p.initial_point = project_ball(Point::from_matrix(rng.normal_matrix(data->rows, data->cols)), R);
  p.label = "matrix_completion(" + std::to_string(data->rows) + "x" + std::to_string(data->cols) +
            ",|Q|=" + std::to_string(data->observed.size()) + ",seed=" + std::to_string(data->seed) + ")";
  return p;
}

inline ProblemInstance build_matrix_completion(const RatingSet& ratings, const MatrixCompletionParams& params,
                                               Eigen::Index sub_rows, Eigen::Index sub_cols, std::uint64_t seed) {
  Eigen::Index rows = 0, cols = 0;
  auto obs = select_submatrix(ratings, sub_rows, sub_cols, seed, rows, cols);
  return matrix_completion_problem(make_matrix_completion_data(std::move(obs), rows, cols, params, seed));
}

}  // namespace ncfista::problems
