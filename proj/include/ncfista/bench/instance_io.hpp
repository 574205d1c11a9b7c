#pragma once

#include "ncfista/bench/config.hpp"
#include "ncfista/bench/instances.hpp"

#include <nlohmann/json.hpp>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <vector>

namespace ncfista::bench {

namespace detail {

/// Row-major nested arrays.
inline nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<double> r(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index j = 0; j < m.cols(); ++j) r[static_cast<std::size_t>(j)] = m(i, j);
    rows.push_back(r);
  }
  return rows;
}

inline nlohmann::json vector_json(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

/// [[row, col, value], ...] with 0-based indices.
inline nlohmann::json triplets_json(const Eigen::SparseMatrix<double>& m) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index k = 0; k < m.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it) out.push_back({it.row(), it.col(), it.value()});
  return out;
}

}  // namespace detail

/// Complete data of the instance a problem spec generates, so that it can be
/// rebuilt or inspected elsewhere.
inline nlohmann::json instance_json(const ProblemSpec& spec, const std::filesystem::path& base_dir = {}) {
  using nlohmann::json;
  json j;
  j["schema_version"] = kSchemaVersion;
  j["family"] = to_string(spec.family);
  j["seed"] = spec.seed;
  const ProblemInstance p = build_instance(spec, base_dir);
  j["label"] = p.label;
  json curv = json::object();
  if (p.curvature.M_bar) curv["M_bar"] = *p.curvature.M_bar;
  if (p.curvature.m_bar) curv["m_bar"] = *p.curvature.m_bar;
  if (p.curvature.Dh) curv["Dh"] = *p.curvature.Dh;
  j["curvature"] = curv;

  switch (spec.family) {
    case Family::qp_vector: {
      const auto d = problems::make_qp_vector_data(spec.seed, {spec.l, spec.n, spec.M_bar, spec.m_bar, spec.convex});
      j["alpha1"] = d->alpha1;
      j["alpha2"] = d->alpha2;
      j["D"] = detail::vector_json(d->D);
      j["B"] = detail::matrix_json(d->B);
      j["A"] = detail::matrix_json(d->A);
      j["b"] = detail::vector_json(d->b);
      break;
    }
    case Family::qp_matrix: {
      const auto d = problems::make_qp_matrix_data(spec.seed, {spec.l, spec.n, spec.density, spec.M_bar, spec.m_bar});
      j["n"] = d->n;
      j["alpha1"] = d->alpha1;
      j["alpha2"] = d->alpha2;
      j["D"] = detail::vector_json(d->D);
      j["b"] = detail::vector_json(d->b);
      json A = json::array(), B = json::array();
      for (const auto& m : d->A_mats) A.push_back(detail::triplets_json(m));
      for (const auto& m : d->B_mats) B.push_back(detail::triplets_json(m));
      j["A"] = A;
      j["B"] = B;
      break;
    }
    case Family::matrix_completion: {
      const auto ratings = problems::load_ratings_any(ratings_path(spec, base_dir).string());
      Eigen::Index rows = 0, cols = 0;
      const auto obs = problems::select_submatrix(ratings, spec.sub_rows, spec.sub_cols, spec.seed, rows, cols);
      j["rows"] = rows;
      j["cols"] = cols;
      j["mu"] = spec.mc.mu;
      j["beta"] = spec.mc.beta;
      j["tau"] = spec.mc.tau;
      j["R"] = problems::completion_radius(obs, rows, cols);
      json o = json::array();
      for (const auto& e : obs) o.push_back({e.row, e.col, e.value});
      j["observed"] = o;
      break;
    }
    case Family::nmf:
      j["k"] = spec.k;
      j["X"] = detail::matrix_json(problems::nmf_data_matrix(spec.seed, spec.n, spec.l));
      break;
    case Family::concave_interval:
      break;
  }
  j["initial_point"] = detail::vector_json(p.initial_point.data());
  return j;
}

}  // namespace ncfista::bench
