// Acceptance runner: one PASS / FAIL / SKIP line per criterion.
//
//   ncfista-acceptance              all criteria
//   ncfista-acceptance 3 5          only the listed criteria
//   ncfista-acceptance --except 9   everything but the listed criteria
//
// Exit status is 1 if any criterion failed, 77 if every selected criterion
// was skipped, else 0.

#include "ncfista/bench/diagnostics.hpp"
#include "ncfista/ncfista.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace ncfista;
namespace fs = std::filesystem;

namespace {

enum class Verdict { pass, fail, skip };

struct Outcome {
  Verdict verdict = Verdict::pass;
  std::string detail;
};

Outcome pass(std::string d) { return {Verdict::pass, std::move(d)}; }
Outcome fail(std::string d) { return {Verdict::fail, std::move(d)}; }
Outcome skip(std::string d) { return {Verdict::skip, std::move(d)}; }

std::string fmt(double x) { return bench::format_number(x, 4); }

/// Seeded runs registered by the criteria, replayed by the determinism check.
struct RecordedRun {
  std::string label;
  std::function<SolverResult()> solve;
  std::int64_t iterations;
  std::int64_t resolvents;
};
std::vector<RecordedRun> g_recorded;

SolverResult record(std::string label, std::function<SolverResult()> solve) {
  SolverResult r = solve();
  g_recorded.push_back({std::move(label), std::move(solve), r.counters.outer_iterations, r.counters.resolvent_evals});
  return r;
}

ProblemInstance qp(std::uint64_t seed, Eigen::Index n, Eigen::Index l, double M_bar, double m_bar) {
  return problems::gen_qp_vector(seed, l, n, M_bar, m_bar);
}

AdapConfig adap(double M0, double m0, double theta, StoppingRule stop, std::int64_t max_outer = 50000) {
  AdapConfig c;
  c.M0 = M0;
  c.m0 = m0;
  c.theta = theta;
  c.stopping = stop;
  c.max_outer = max_outer;
  return c;
}

// ---------------------------------------------------------------------------

Outcome c1_prox_oracles() {
  Rng rng(1001);
  double worst = 0;
  std::string where;
  auto note = [&](double err, const char* what) {
    if (err > worst) worst = err, where = what;
  };
  auto sym = [&](Eigen::Index n) {
    const Eigen::MatrixXd G = 2.0 * rng.normal_matrix(n, n);
    return Eigen::MatrixXd(0.5 * (G + G.transpose()));
  };
  for (int t = 0; t < 200; ++t) {
    const Eigen::Index n = 1 + rng.uniform_int(0, 4);
    const Eigen::VectorXd v = 2.0 * rng.normal_matrix(n, 1);
    note((project_simplex(v) - oracles::simplex_by_supports(v)).norm(), "simplex");
    const Eigen::MatrixXd Z = sym(n);
    note((project_spectraplex(Z) - oracles::spectraplex_by_bisection(Z)).norm(), "spectraplex");
    // nonneg and ball: coordinatewise / radial optimality conditions
    const Point p = project_nonneg(Point::from_vector(v));
    for (Eigen::Index i = 0; i < n; ++i) note(std::abs(p.data()(i) - (v(i) > 0 ? v(i) : 0.0)), "nonneg");
    const Point b = project_ball(Point::from_vector(v), 1.0);
    if (v.norm() > 1.0) {
      note(std::abs(b.norm() - 1.0), "ball");
      note((v - b.data() - (v.norm() - 1.0) * b.data()).norm(), "ball");
    } else {
      note((b.data() - v).norm(), "ball");
    }
  }
  for (int t = 0; t < 8; ++t) {
    const Eigen::MatrixXd Z = sym(1 + rng.uniform_int(0, 2));
    note((project_psd(Z) - oracles::psd_by_factor_descent(Z)).norm(), "psd");
  }
  for (int t = 0; t < 6; ++t) {
    const Eigen::Index r = 1 + rng.uniform_int(0, 2), c = 1 + rng.uniform_int(0, 2);
    const Eigen::MatrixXd Z = 2.0 * rng.normal_matrix(r, c);
    const double coef = 0.5 + rng.uniform(), weight = rng.uniform(), R = 0.5 + 2.0 * rng.uniform();
    note((prox_nuclear_ball(Z, coef, weight, R) - oracles::nuclear_prox_by_dual_ascent(Z, coef, weight, R, 50000)).norm(),
         "nuclear_ball");
  }
  const std::string d = "worst deviation " + fmt(worst) + (where.empty() ? "" : " (" + where + ")");
  return worst <= 1e-5 ? pass(d) : fail(d);
}

Outcome c2_gradients() {
  using testing::fd_gradient;
  using testing::random_point;
  using testing::rel_err;
  Rng rng(1002);
  double worst = 0;
  std::string where;
  auto check = [&](const ProblemInstance& p, const Point& z) {
    const double e = rel_err(p.f.gradient(z).data(), fd_gradient(p.f.value, z));
    if (e > worst) worst = e, where = p.label;
  };
  const ProblemInstance pv = problems::gen_qp_vector(1, 5, 12, 1e3, 10);
  const ProblemInstance pm = problems::gen_qp_matrix(1, 3, 4, 1.0, 1e3, 10);
  std::vector<problems::Observation> obs;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 4; ++j)
      if (rng.uniform() < 0.5) obs.push_back({i, j, static_cast<double>(rng.uniform_int(1, 5))});
  const ProblemInstance pc = problems::matrix_completion_problem(problems::make_matrix_completion_data(obs, 5, 4, {}, 1));
  const ProblemInstance pn = problems::gen_nmf(1, 6, 5, 2);
  for (int t = 0; t < 5; ++t) {
    check(pv, random_point(rng, pv.initial_point));
    const Eigen::MatrixXd G = rng.normal_matrix(4, 4);
    check(pm, Point::from_matrix(G + G.transpose()));
    check(pc, random_point(rng, pc.initial_point, 2.0));
    check(pn, random_point(rng, pn.initial_point));
  }
  const std::string d = "worst relative error " + fmt(worst) + " (" + where + ")";
  return worst <= 1e-5 ? pass(d) : fail(d);
}

Outcome c3_fista_reduction() {
  const auto data = problems::make_qp_vector_data(3, {10, 100, 1e4, 1.0, true});
  const ProblemInstance p = problems::qp_vector_problem(data);
  if (data->alpha1 != 0.0) return fail("instance is not convex");
  NcFistaConfig cfg;
  cfg.M = *p.curvature.M_bar / 0.99;
  cfg.m = 0.0;
  const auto ref = testing::reference_fista([&](const Eigen::VectorXd& z) { return data->gradient(z); },
                                            [](const Eigen::VectorXd& z) { return project_simplex(z); },
                                            p.initial_point.data(), cfg.M, 100);
  NcFistaState s = NcFistaState::initial(p.initial_point, cfg);
  Counters c;
  double worst = 0;
  for (int k = 0; k < 100; ++k) {
    nc_fista_step(p, cfg, s, c);
    worst = std::max(worst, (s.y.data() - ref[static_cast<std::size_t>(k)]).norm());
  }
  const std::string d = "max iterate gap over 100 steps " + fmt(worst);
  return worst <= 1e-10 ? pass(d) : fail(d);
}

Outcome c4_worked_step() {
  const ProblemInstance p = problems::concave_interval();
  NcFistaConfig cfg;
  cfg.M = 2.0;
  cfg.m = 1.0;
  cfg.A0 = 2.0;
  NcFistaState s = NcFistaState::initial(p.initial_point, cfg);
  Counters c;
  const Point v = nc_fista_step(p, cfg, s, c);
  const double e = std::max({std::abs(s.y.data()(0) - 2.0 / 3.0), std::abs(v.data()(0) + 2.0 / 3.0),
                             std::abs(s.x.data()(0) - 0.75)});
  const std::string d = "y1 = " + bench::format_number(s.y.data()(0), 17) + ", v1 = " +
                        bench::format_number(v.data()(0), 17) + ", x1 = " + bench::format_number(s.x.data()(0), 17);
  return e <= 1e-12 ? pass(d) : fail(d);
}

Outcome c5_invariants() {
  int runs = 0, failed = 0;
  std::string first;
  for (double m_bar : {1.0, 1e2, 1e4}) {
    for (std::uint64_t seed : {1, 2, 3}) {
      for (bench::Method method :
           {bench::Method::NC, bench::Method::AD, bench::Method::RA, bench::Method::AD_BB, bench::Method::RA_BB}) {
        bench::RunConfig run;
        run.problem.family = bench::Family::qp_vector;
        run.problem.seed = seed;
        run.problem.n = 100;
        run.problem.l = 10;
        run.problem.M_bar = 1e5;
        run.problem.m_bar = m_bar;
        run.solver.method = method;
        run.stopping = StoppingRule::relative(1e-7);
        run.max_iter = 100000;
        const ProblemInstance p = bench::build_instance(run.problem);
        const std::string label = p.label + " " + bench::to_string(method);
        const SolverResult res = record(label, [p, run] { return bench::solve(p, run, true); });
        const bench::DiagnosticReport rep = bench::diagnose(p, run, res);
        ++runs;
        if (!rep.passed()) {
          ++failed;
          if (first.empty()) {
            std::ostringstream s;
            bench::write_report(s, rep);
            first = s.str();
          }
        }
      }
    }
  }
  const std::string d = std::to_string(runs - failed) + "/" + std::to_string(runs) + " runs satisfy every invariant";
  if (failed > 0) {
    std::cerr << first;
    return fail(d);
  }
  return pass(d);
}

Outcome c6_resolvent_bound() {
  const double theta = 1.25, M0 = 1.0, m0 = 1.0;
  int bad = 0, runs = 0;
  double tightest = kInfinity;
  for (double m_bar : {1.0, 1e2, 1e4}) {
    for (std::uint64_t seed : {1, 2, 3}) {
      const ProblemInstance p = qp(seed, 100, 10, 1e5, m_bar);
      const double Mb = *p.curvature.M_bar, mb = *p.curvature.m_bar;
      const AdapConfig cfg = adap(M0, m0, theta, StoppingRule::relative(1e-7), 100000);
      const SolverResult r = record(p.label + " AD (1,1)", [p, cfg] { return run_adap(p, cfg); });
      const double lambda0 = 1.0 / M0;
      const double bound = std::ceil(std::log(std::max(1.0, theta * lambda0 * Mb / 0.9)) / std::log(theta)) +
                           std::ceil(std::log2(std::max(1.0, 2.0 * mb / m0))) + 2.0;
      const double extra = static_cast<double>(r.counters.resolvent_evals - r.counters.outer_iterations);
      tightest = std::min(tightest, bound - extra);
      ++runs;
      if (extra > bound || r.status != Status::converged) ++bad;
    }
  }
  const std::string d = std::to_string(runs - bad) + "/" + std::to_string(runs) + " runs within bound, min slack " +
                        fmt(tightest);
  return bad == 0 ? pass(d) : fail(d);
}

Outcome c7_m_never_updates() {
  int bad = 0, runs = 0;
  for (const auto& [Mb, mb] : std::vector<std::pair<double, double>>{{1e4, 1e2}, {1e5, 1.0}, {1e5, 1e4}}) {
    for (std::uint64_t seed : {1, 2, 3}) {
      const ProblemInstance p = qp(seed, 100, 10, Mb, mb);
      const double m0 = 2.0 * *p.curvature.m_bar;
      AdapConfig cfg = adap(std::max(1.0, m0), m0, 1.25, StoppingRule::relative(1e-7), 100000);
      cfg.log_trajectory = true;
      const SolverResult r = record(p.label + " AD m0=2m", [p, cfg] { return run_adap(p, cfg); });
      ++runs;
      bool ok = r.status == Status::converged;
      for (const auto& t : r.trajectory) ok = ok && t.m == m0 && t.m_start == m0 && t.m_updates == 0;
      if (!ok) ++bad;
    }
  }
  const std::string d = std::to_string(runs - bad) + "/" + std::to_string(runs) + " runs keep m = m0 throughout";
  return bad == 0 ? pass(d) : fail(d);
}

Outcome c8_restart_beats_nc() {
  std::ostringstream d;
  bool ok = true;
  for (std::uint64_t seed : {1, 2, 3}) {
    const ProblemInstance p = qp(seed, 300, 10, 1e6, 1e2);
    NcFistaConfig nc = NcFistaConfig::from_curvature(*p.curvature.M_bar, *p.curvature.m_bar);
    nc.A0 = 1000;
    nc.stopping = StoppingRule::relative(1e-7);
    nc.max_iter = 500000;
    AdapConfig ra = adap(1, 1, 1.25, StoppingRule::relative(1e-7), 500000);
    ra.restart = true;
    const SolverResult rn = record(p.label + " NC", [p, nc] { return run_nc_fista(p, nc); });
    const SolverResult rr = record(p.label + " RA", [p, ra] { return run_adap(p, ra); });
    const bool seed_ok = rr.status == Status::converged &&
                         rr.counters.outer_iterations < rn.counters.outer_iterations;
    ok = ok && seed_ok;
    d << (seed > 1 ? "; " : "") << "seed " << seed << ": RA " << rr.counters.outer_iterations << " vs NC "
      << rn.counters.outer_iterations << (rn.status == Status::converged ? "" : " (budget)");
  }
  return ok ? pass(d.str()) : fail(d.str());
}

std::optional<fs::path> movielens_path() {
  if (const char* env = std::getenv("NCFISTA_MOVIELENS"); env && *env && fs::exists(env)) return fs::path(env);
  const fs::path local = fs::path(NCFISTA_SOURCE_DIR) / "tests" / "data" / "u.data";
  if (fs::exists(local)) return local;
  return std::nullopt;
}

Outcome c9_matrix_completion() {
  const auto path = movielens_path();
  if (!path) return skip("MovieLens u.data not found (set NCFISTA_MOVIELENS or add tests/data/u.data)");
  const problems::RatingSet ratings = problems::load_ratings_any(path->string());
  const problems::MatrixCompletionParams params{2.0, 1.1, 1.0, 1.0};
  const ProblemInstance p = problems::build_matrix_completion(ratings, params, 200, 300, 1);
  const AdapConfig cfg = adap(1.0, 0.5, 1.25, StoppingRule::relative(5e-4), 5000);
  const SolverResult r = record(p.label + " AD", [p, cfg] { return run_adap(p, cfg); });
  const double start = p.objective(p.initial_point);
  std::ostringstream d;
  d << "M_bar = " << fmt(params.M_bar()) << ", " << r.counters.outer_iterations << " iterations, "
    << to_string(r.status) << ", objective " << fmt(start) << " -> " << fmt(r.objective);
  const bool ok = std::abs(params.M_bar() - 4.4) < 1e-12 && r.status == Status::converged && r.objective <= start;
  return ok ? pass(d.str()) : fail(d.str());
}

Outcome c10_nmf() {
  const ProblemInstance p = problems::gen_nmf(1, 50, 40, 5);
  const AdapConfig cfg = adap(1000, 1000, 1.25, StoppingRule::relative(1e-5), 100000);
  const SolverResult r = record(p.label + " AD", [p, cfg] { return run_adap(p, cfg); });
  const double lowest = r.y.data().minCoeff();
  std::ostringstream d;
  d << r.counters.outer_iterations << " iterations, " << to_string(r.status) << ", relative residual "
    << fmt(r.relative_residual()) << ", min entry " << fmt(lowest);
  return r.status == Status::converged && lowest >= 0.0 ? pass(d.str()) : fail(d.str());
}

Outcome c11_determinism() {
  if (g_recorded.empty()) return skip("no seeded runs were recorded (run together with other criteria)");
  int bad = 0;
  for (const RecordedRun& run : g_recorded) {
    const SolverResult r = run.solve();
    if (r.counters.outer_iterations != run.iterations || r.counters.resolvent_evals != run.resolvents) {
      ++bad;
      std::cerr << "  nondeterministic: " << run.label << '\n';
    }
  }
  const std::string d = std::to_string(g_recorded.size() - static_cast<std::size_t>(bad)) + "/" +
                        std::to_string(g_recorded.size()) + " repeated runs reproduce their counts";
  return bad == 0 ? pass(d) : fail(d);
}

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;  // 0 = none
  Outcome (*run)();
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {1, "prox operators match brute-force oracles", 30, c1_prox_oracles},
      {2, "gradients match finite differences", 30, c2_gradients},
      {3, "NC with m = 0 equals FISTA", 10, c3_fista_reduction},
      {4, "worked 1-D step", 0, c4_worked_step},
      {5, "trajectory invariants on generated QPs", 120, c5_invariants},
      {6, "resolvent-count bound", 0, c6_resolvent_bound},
      {7, "m never updated when m0 = 2 m_bar", 0, c7_m_never_updates},
      {8, "RA needs fewer iterations than NC", 300, c8_restart_beats_nc},
      {9, "matrix completion desk run", 600, c9_matrix_completion},
      {10, "NMF smoke", 120, c10_nmf},
      {11, "determinism", 0, c11_determinism},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only, except;
  bool excluding = false;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--except") {
      excluding = true;
      continue;
    }
    try {
      (excluding ? except : only).insert(std::stoi(a));
    } catch (const std::exception&) {
      std::cerr << "usage: " << argv[0] << " [criterion ...] [--except criterion ...]\n";
      return 2;
    }
  }

  int failed = 0, skipped = 0, ran = 0;
  for (const Criterion& c : criteria()) {
    if ((!only.empty() && !only.count(c.id)) || except.count(c.id)) continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.verdict == Verdict::pass && c.budget_seconds > 0 && secs > c.budget_seconds) {
      o = fail(o.detail + "; over the " + fmt(c.budget_seconds) + " s budget");
    }
    const char* tag = o.verdict == Verdict::pass ? "PASS" : o.verdict == Verdict::fail ? "FAIL" : "SKIP";
    std::cout << "criterion " << c.id << ": " << tag << "  " << c.title << "  [" << o.detail << "; "
              << bench::format_number(secs, 3) << " s]" << std::endl;
    failed += o.verdict == Verdict::fail;
    skipped += o.verdict == Verdict::skip;
  }
  if (failed > 0) return 1;
  if (ran > 0 && skipped == ran) return 77;
  return 0;
}
