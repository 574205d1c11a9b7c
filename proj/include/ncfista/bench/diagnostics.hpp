#pragma once

#include "ncfista/bench/config.hpp"
#include "ncfista/bench/grid.hpp"
#include "ncfista/bench/instances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

namespace ncfista::bench {

/// One invariant evaluated over a run. `margin` is the worst slack seen
/// (>= 0 means satisfied); skipped checks need ground truth the run lacks.
struct CheckResult {
  std::string name;
  bool passed = true;
  bool skipped = false;
  double margin = std::numeric_limits<double>::infinity();
  std::string detail;
};

struct DiagnosticReport {
  std::string problem;
  std::string solver;
  std::string error;  // set when the run itself failed
  std::vector<CheckResult> checks;

  bool passed() const {
    if (!error.empty()) return false;
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.skipped || c.passed; });
  }
};

namespace detail {

/// Tracks the worst slack of a family of inequalities lhs <= rhs.
class Worst {
 public:
  explicit Worst(std::string name) { r_.name = std::move(name); }

  /// Records lhs <= rhs with a relative allowance `rel` on |rhs|.
  void le(double lhs, double rhs, std::int64_t k, double rel = 0.0) {
    const double slack = rhs - lhs + rel * std::abs(rhs);
    if (!(slack >= 0) && r_.passed) {
      r_.passed = false;
      r_.detail = "first violation at k = " + std::to_string(k) + ": " + format_number(lhs) + " > " +
                  format_number(rhs);
    }
    if (std::isnan(slack) || slack < r_.margin) r_.margin = slack;
  }

  CheckResult done() && { return std::move(r_); }

 private:
  CheckResult r_;
};

inline CheckResult skipped(std::string name, std::string why) {
  CheckResult c;
  c.name = std::move(name);
  c.skipped = true;
  c.detail = std::move(why);
  return c;
}

}  // namespace detail

/// Checks every trajectory invariant of `run` against the instance's own
/// curvature metadata.
///
/// For restart and BB variants the per-iteration bounds use the line search's
/// starting stepsize in place of the previous lambda, since those variants
/// reset or reseed it. The inner-work bound only applies to plain AD.
inline DiagnosticReport diagnose(const ProblemInstance& problem, const RunConfig& run, const SolverResult& res) {
  DiagnosticReport rep;
  rep.problem = problem.label;
  rep.solver = to_string(run.solver.method);
  const auto& traj = res.trajectory;
  const bool adaptive = is_adaptive(run.solver.method);
  const auto M_bar = problem.curvature.M_bar;
  const auto m_bar = problem.curvature.m_bar;

  {
    detail::Worst w("stationarity_at_termination");
    const double threshold = run.stopping.threshold(res.grad_start_norm);
    w.le(res.v_norm, threshold, res.counters.outer_iterations);
    CheckResult c = std::move(w).done();
    if (res.status != Status::converged) {
      c.passed = false;
      c.detail = "budget exhausted";
    }
    rep.checks.push_back(std::move(c));
  }
  {
    detail::Worst w("residual_inclusion");
    if (res.v.size() == 0) {
      rep.checks.push_back(detail::skipped("residual_inclusion", "no iterations"));
    } else {
      w.le(residual_error(problem, res.y, res.v), 1e-8, res.counters.outer_iterations);
      rep.checks.push_back(std::move(w).done());
    }
  }
  {
    detail::Worst w("finite_iterates");
    for (const auto& t : traj) w.le(std::isfinite(t.v_norm) && std::isfinite(t.phi) ? 0.0 : 1.0, 0.0, t.k);
    rep.checks.push_back(std::move(w).done());
  }

  if (!adaptive) {
    const NcFistaConfig cfg = nc_config(run, problem, true);
    {
      detail::Worst w("one_resolvent_per_iteration");
      w.le(static_cast<double>(res.counters.resolvent_evals), static_cast<double>(res.counters.outer_iterations),
           res.counters.outer_iterations);
      w.le(static_cast<double>(res.counters.outer_iterations), static_cast<double>(res.counters.resolvent_evals),
           res.counters.outer_iterations);
      rep.checks.push_back(std::move(w).done());
    }
    if (!m_bar || cfg.m < *m_bar) {
      rep.checks.push_back(detail::skipped("weak_convexity_split", "needs m >= m_bar"));
    } else {
      // m_bar / kappa0 + m / a_k <= m
      detail::Worst w("weak_convexity_split");
      const double k0 = kappa0(cfg.A0);
      for (const auto& t : traj) w.le(*m_bar / k0 + cfg.m / t.a, cfg.m, t.k, 1e-12);
      rep.checks.push_back(std::move(w).done());
    }
    return rep;
  }

  const AdapConfig cfg = adap_config(run, true);
  {
    detail::Worst w("step_acceptance");  // lambda C <= 0.9
    for (const auto& t : traj) w.le(t.lambda * t.C, 0.9, t.k, 1e-12);
    rep.checks.push_back(std::move(w).done());
  }
  {
    // 2 m (lambda_start - lambda / a) >= m_lower lambda
    detail::Worst w("weak_convexity_test");
    for (const auto& t : traj) w.le(t.m_lower * t.lambda, 2.0 * t.m * (t.lambda_start - t.lambda / t.a), t.k, 1e-12);
    rep.checks.push_back(std::move(w).done());
  }
  {
    detail::Worst w("monotone_parameters");  // lambda <= lambda_start, m >= m_start
    for (const auto& t : traj) {
      w.le(t.lambda, t.lambda_start, t.k);
      w.le(t.m_start, t.m, t.k);
    }
    rep.checks.push_back(std::move(w).done());
  }
  if (!M_bar || !m_bar) {
    for (const char* n : {"stepsize_floor", "weak_convexity_cap", "curvature_ratio_range", "lower_estimate_range",
                          "m_never_updated", "inner_work_bound"}) {
      rep.checks.push_back(detail::skipped(n, "instance has no curvature ground truth"));
    }
    return rep;
  }
  {
    detail::Worst w("stepsize_floor");
    const double base = 0.9 / (cfg.theta * *M_bar);
    for (const auto& t : traj) {
      const double floor = std::min(base, cfg.bb ? t.lambda_start : cfg.lambda0());
      w.le(floor, t.lambda, t.k, 1e-12);
    }
    rep.checks.push_back(std::move(w).done());
  }
  {
    detail::Worst w("weak_convexity_cap");
    const double cap = std::max(2.0 * *m_bar, cfg.m0);
    for (const auto& t : traj) w.le(t.m, cap, t.k, 1e-12);
    rep.checks.push_back(std::move(w).done());
  }
  {
    detail::Worst w("curvature_ratio_range");
    for (const auto& t : traj) {
      w.le(-1.0001 * *m_bar, t.C_min, t.k);
      w.le(t.C_max, 1.0001 * *M_bar, t.k);
    }
    rep.checks.push_back(std::move(w).done());
  }
  {
    detail::Worst w("lower_estimate_range");
    for (const auto& t : traj) {
      w.le(0.0, t.m_lower, t.k);
      w.le(t.m_lower, 1.0001 * *m_bar, t.k);
    }
    rep.checks.push_back(std::move(w).done());
  }
  if (cfg.m0 >= *m_bar) {
    detail::Worst w("m_never_updated");
    for (const auto& t : traj) w.le(static_cast<double>(t.m_updates), 0.0, t.k);
    rep.checks.push_back(std::move(w).done());
  } else {
    rep.checks.push_back(detail::skipped("m_never_updated", "needs m0 >= m_bar"));
  }
  if (!cfg.bb && !cfg.restart) {
    detail::Worst w("inner_work_bound");
    w.le(static_cast<double>(res.counters.resolvent_evals - res.counters.outer_iterations),
         inner_work_bound(cfg, *M_bar, *m_bar), res.counters.outer_iterations);
    rep.checks.push_back(std::move(w).done());
  } else {
    rep.checks.push_back(detail::skipped("inner_work_bound", "plain AD only"));
  }
  return rep;
}

/// Runs `run` with trajectory logging and checks it.
inline DiagnosticReport run_diagnostics(const RunConfig& run, const std::filesystem::path& base_dir = {}) {
  DiagnosticReport rep;
  rep.solver = to_string(run.solver.method);
  rep.problem = to_string(run.problem.family);
  try {
    const ProblemInstance problem = build_instance(run.problem, base_dir);
    rep.problem = problem.label;
    const SolverResult res = solve(problem, run, true);
    return diagnose(problem, run, res);
  } catch (const std::exception& e) {
    rep.error = e.what();
  }
  return rep;
}

inline void write_report(std::ostream& out, const DiagnosticReport& rep) {
  out << rep.problem << "  " << rep.solver << "  " << (rep.passed() ? "PASS" : "FAIL") << '\n';
  if (!rep.error.empty()) out << "  error: " << rep.error << '\n';
  for (const CheckResult& c : rep.checks) {
    out << "  " << (c.skipped ? "skip" : c.passed ? "pass" : "FAIL") << "  " << c.name;
    if (!c.skipped) out << "  worst margin " << format_number(c.margin, 4);
    if (!c.detail.empty()) out << "  (" << c.detail << ")";
    out << '\n';
  }
}

}  // namespace ncfista::bench
