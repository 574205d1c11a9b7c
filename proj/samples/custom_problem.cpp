// A user-defined problem: sparse recovery with a concave correction,
//   min 1/2 ||A z - b||^2 - (gamma/2) ||z||^2 + w ||z||_1,  ||z||_inf <= 1,
// solved with ADAP-NC-FISTA, which needs no curvature constants.

#include "ncfista/ncfista.hpp"

#include <cmath>
#include <cstdio>

using namespace ncfista;

int main() {
  const Eigen::Index rows = 40, n = 80;
  const double gamma = 0.05, w = 0.05;
  Rng rng(7);
  const Eigen::MatrixXd A = rng.normal_matrix(rows, n) / std::sqrt(static_cast<double>(rows));
  Eigen::VectorXd truth = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; i += 10) truth(i) = 0.8;
  const Eigen::VectorXd b = A * truth;

  ProblemInstance p;
  p.f.value = [&](const Point& z) { return 0.5 * (A * z.data() - b).squaredNorm() - 0.5 * gamma * z.squared_norm(); };
  p.f.gradient = [&](const Point& z) {
    return Point::from_vector(A.transpose() * (A * z.data() - b) - gamma * z.data());
  };
  // h = w ||z||_1 + indicator of the unit box; its resolvent is soft-thresholding then clipping.
  p.h.value = [&](const Point& z) {
    return z.data().cwiseAbs().maxCoeff() > 1.0 + 1e-12 ? kInfinity : w * z.data().lpNorm<1>();
  };
  p.h.resolvent = [&](const Point& center, double c) {
    const Eigen::VectorXd shrunk =
        center.data().array().sign() * (center.data().array().abs() - w / c).max(0.0);
    return Point::from_vector(shrunk.cwiseMax(-1.0).cwiseMin(1.0));
  };
  p.initial_point = Point::from_vector(Eigen::VectorXd::Zero(n));
  p.label = "sparse_recovery";

  AdapConfig cfg;
  cfg.stopping = StoppingRule::relative(1e-8);
  const SolverResult r = run_adap(p, cfg);
  std::printf("%s: %s after %lld iterations (%lld resolvents)\n", p.label.c_str(), to_string(r.status),
              static_cast<long long>(r.counters.outer_iterations),
              static_cast<long long>(r.counters.resolvent_evals));
  const auto support = (r.y.data().array().abs() > 1e-8).count();
  std::printf("objective %.8f, %lld nonzeros, inclusion residual %.2e\n", r.objective,
              static_cast<long long>(support), residual_error(p, r.y, r.v));
}
