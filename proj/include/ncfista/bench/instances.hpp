#pragma once

#include "ncfista/adap_nc_fista.hpp"
#include "ncfista/bench/config.hpp"
#include "ncfista/nc_fista.hpp"
#include "ncfista/problems/matrix_completion.hpp"
#include "ncfista/problems/movielens.hpp"
#include "ncfista/problems/nmf.hpp"
#include "ncfista/problems/qp_matrix.hpp"
#include "ncfista/problems/qp_vector.hpp"
#include "ncfista/problems/toy.hpp"

#include <cstdlib>
#include <filesystem>
#include <stdexcept>
#include <string>

namespace ncfista::bench {

/// Ratings path for a matrix-completion spec: the configured path (relative
/// to `base_dir`), else $NCFISTA_MOVIELENS.
inline std::filesystem::path ratings_path(const ProblemSpec& spec, const std::filesystem::path& base_dir) {
  std::filesystem::path p = spec.path;
  if (p.empty()) {
    const char* env = std::getenv("NCFISTA_MOVIELENS");
    if (env == nullptr || *env == '\0') {
      throw std::runtime_error("matrix_completion: no ratings path given and NCFISTA_MOVIELENS is unset");
    }
    return env;
  }
  return p.is_relative() && !base_dir.empty() ? base_dir / p : p;
}

inline ProblemInstance build_instance(const ProblemSpec& spec, const std::filesystem::path& base_dir = {}) {
  ProblemInstance p;
  switch (spec.family) {
    case Family::qp_vector:
      p = problems::qp_vector_problem(
          problems::make_qp_vector_data(spec.seed, {spec.l, spec.n, spec.M_bar, spec.m_bar, spec.convex}));
      break;
    case Family::qp_matrix:
      p = problems::gen_qp_matrix(spec.seed, spec.l, spec.n, spec.density, spec.M_bar, spec.m_bar);
      break;
    case Family::matrix_completion: {
      const auto ratings = problems::load_ratings_any(ratings_path(spec, base_dir).string());
      p = problems::build_matrix_completion(ratings, spec.mc, spec.sub_rows, spec.sub_cols, spec.seed);
      break;
    }
    case Family::nmf:
      p = problems::gen_nmf(spec.seed, spec.n, spec.l, spec.k);
      break;
    case Family::concave_interval:
      p = problems::concave_interval();
      break;
  }
  if (spec.M_bar_scale != 1.0 && p.curvature.M_bar) *p.curvature.M_bar *= spec.M_bar_scale;
  if (spec.m_bar_scale != 1.0 && p.curvature.m_bar) *p.curvature.m_bar *= spec.m_bar_scale;
  return p;
}

inline bool is_adaptive(Method m) { return m != Method::NC; }

/// NC parameters fall back to the instance metadata: M = M_bar / 0.99, m = m_bar.
inline NcFistaConfig nc_config(const RunConfig& run, const ProblemInstance& problem, bool log_trajectory) {
  NcFistaConfig c;
  if (run.solver.M) {
    c.M = *run.solver.M;
  } else if (problem.curvature.M_bar) {
    c.M = *problem.curvature.M_bar / 0.99;
  } else {
    throw std::runtime_error("NC needs M: the instance has no known M_bar");
  }
  if (run.solver.m) {
    c.m = *run.solver.m;
  } else if (problem.curvature.m_bar) {
    c.m = *problem.curvature.m_bar;
  } else {
    throw std::runtime_error("NC needs m: the instance has no known m_bar");
  }
  c.A0 = run.solver.A0;
  c.stopping = run.stopping;
  c.max_iter = run.max_iter;
  c.log_trajectory = log_trajectory;
  return c;
}

inline AdapConfig adap_config(const RunConfig& run, bool log_trajectory) {
  AdapConfig c;
  c.M0 = run.solver.M0;
  c.m0 = run.solver.m0;
  c.theta = run.solver.theta;
  c.stopping = run.stopping;
  c.restart = run.solver.method == Method::RA || run.solver.method == Method::RA_BB;
  c.bb = run.solver.method == Method::AD_BB || run.solver.method == Method::RA_BB;
  c.max_outer = run.max_iter;
  c.max_inner_per_outer = run.solver.max_inner;
  c.log_trajectory = log_trajectory;
  return c;
}

inline SolverResult solve(const ProblemInstance& problem, const RunConfig& run, bool log_trajectory) {
  if (run.solver.method == Method::NC) return run_nc_fista(problem, nc_config(run, problem, log_trajectory));
  return run_adap(problem, adap_config(run, log_trajectory));
}

}  // namespace ncfista::bench
