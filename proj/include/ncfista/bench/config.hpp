#pragma once

#include "ncfista/problems/matrix_completion.hpp"
#include "ncfista/result.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ncfista::bench {

inline constexpr int kSchemaVersion = 1;

/// Malformed or inconsistent configuration (as opposed to a failed run).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Family { qp_vector, qp_matrix, matrix_completion, nmf, concave_interval };

enum class Method { NC, AD, AD_BB, RA, RA_BB };

inline const char* to_string(Family f) {
  switch (f) {
    case Family::qp_vector: return "qp_vector";
    case Family::qp_matrix: return "qp_matrix";
    case Family::matrix_completion: return "matrix_completion";
    case Family::nmf: return "nmf";
    case Family::concave_interval: return "concave_interval";
  }
  return "?";
}

inline const char* to_string(Method m) {
  switch (m) {
    case Method::NC: return "NC";
    case Method::AD: return "AD";
    case Method::AD_BB: return "AD-BB";
    case Method::RA: return "RA";
    case Method::RA_BB: return "RA-BB";
  }
  return "?";
}

struct ProblemSpec {
  Family family = Family::qp_vector;
  std::uint64_t seed = 1;
  std::int64_t n = 100;
  std::int64_t l = 10;
  std::int64_t k = 5;          // nmf inner dimension
  double density = 0.025;      // qp_matrix
  double M_bar = 1e4;          // qp targets
  double m_bar = 1e2;
  bool convex = false;         // qp_vector with alpha1 = 0
  std::string path;            // matrix_completion ratings (u.data or cache)
  problems::MatrixCompletionParams mc;
  std::int64_t sub_rows = 200;
  std::int64_t sub_cols = 300;
  // Multipliers applied to the curvature metadata after generation; used to
  // feed the solvers and diagnostics deliberately wrong constants.
  double M_bar_scale = 1.0;
  double m_bar_scale = 1.0;
};

struct SolverSpec {
  Method method = Method::AD;
  std::optional<double> M;  // NC; defaults to M_bar / 0.99
  std::optional<double> m;  // NC; defaults to m_bar
  double A0 = 2.0;          // NC
  double M0 = 1.0;
  double m0 = 1.0;
  double theta = 1.25;
  std::int64_t max_inner = 200;
};

/// Exactly one problem and one solver.
struct RunConfig {
  std::string name;
  ProblemSpec problem;
  SolverSpec solver;
  StoppingRule stopping = StoppingRule::relative(1e-7);
  std::int64_t max_iter = 50000;
};

struct GridConfig {
  std::vector<RunConfig> runs;
  bool diagnostics = false;
  std::filesystem::path base_dir;  // relative data paths resolve against this
};

namespace detail {

using nlohmann::json;

inline void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
}

inline void only_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) throw ConfigError(where + ": unknown key '" + it.key() + "'");
  }
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

inline void read_positive(const json& j, const char* key, double& out, const std::string& where) {
  read(j, key, out, where);
  if (!(out > 0) || !std::isfinite(out)) throw ConfigError(where + "." + key + " must be positive");
}

inline Family parse_family(const std::string& s, const std::string& where) {
  for (Family f : {Family::qp_vector, Family::qp_matrix, Family::matrix_completion, Family::nmf,
                   Family::concave_interval}) {
    if (s == to_string(f)) return f;
  }
  throw ConfigError(where + ": unknown problem family '" + s + "'");
}

inline Method parse_method(const std::string& s, const std::string& where) {
  for (Method m : {Method::NC, Method::AD, Method::AD_BB, Method::RA, Method::RA_BB}) {
    if (s == to_string(m)) return m;
  }
  throw ConfigError(where + ": unknown solver '" + s + "' (NC, AD, AD-BB, RA, RA-BB)");
}

inline ProblemSpec parse_problem(const json& j, const std::string& where) {
  require_object(j, where);
  only_keys(j,
            {"family", "seed", "n", "l", "k", "density", "M_bar", "m_bar", "convex", "path", "mu", "beta",
             "tau", "M_tilde", "sub_rows", "sub_cols", "M_bar_scale", "m_bar_scale"},
            where);
  if (!j.contains("family")) throw ConfigError(where + ": missing 'family'");
  ProblemSpec p;
  p.family = parse_family(j.at("family").get<std::string>(), where);
  read(j, "seed", p.seed, where);
  read(j, "n", p.n, where);
  read(j, "l", p.l, where);
  read(j, "k", p.k, where);
  read(j, "density", p.density, where);
  read(j, "M_bar", p.M_bar, where);
  read(j, "m_bar", p.m_bar, where);
  read(j, "convex", p.convex, where);
  read(j, "path", p.path, where);
  read(j, "mu", p.mc.mu, where);
  read(j, "beta", p.mc.beta, where);
  read(j, "tau", p.mc.tau, where);
  read(j, "M_tilde", p.mc.M_tilde, where);
  read(j, "sub_rows", p.sub_rows, where);
  read(j, "sub_cols", p.sub_cols, where);
  read_positive(j, "M_bar_scale", p.M_bar_scale, where);
  read_positive(j, "m_bar_scale", p.m_bar_scale, where);

  if (p.n < 1 || p.l < 1 || p.k < 1) throw ConfigError(where + ": n, l, k must be positive");
  if (!(p.density > 0) || p.density > 1) throw ConfigError(where + ": density must lie in (0, 1]");
  if (!(p.M_bar > 0) || !(p.m_bar > 0) || p.m_bar > p.M_bar) {
    throw ConfigError(where + ": need M_bar >= m_bar > 0");
  }
  if (p.sub_rows < 0 || p.sub_cols < 0) throw ConfigError(where + ": sub_rows, sub_cols must be >= 0");
  try {
    p.mc.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  }
  return p;
}

inline SolverSpec parse_solver(const json& j, const std::string& where) {
  SolverSpec s;
  if (j.is_string()) {
    s.method = parse_method(j.get<std::string>(), where);
    return s;
  }
  require_object(j, where);
  only_keys(j, {"method", "M", "m", "A0", "M0", "m0", "theta", "max_inner"}, where);
  if (!j.contains("method")) throw ConfigError(where + ": missing 'method'");
  s.method = parse_method(j.at("method").get<std::string>(), where);
  if (j.contains("M")) s.M = j.at("M").get<double>();
  if (j.contains("m")) s.m = j.at("m").get<double>();
  read_positive(j, "A0", s.A0, where);
  read_positive(j, "M0", s.M0, where);
  read_positive(j, "m0", s.m0, where);
  read(j, "theta", s.theta, where);
  read(j, "max_inner", s.max_inner, where);
  if (s.M && !(*s.M > 0)) throw ConfigError(where + ".M must be positive");
  if (s.m && (!(*s.m >= 0) || (s.M && *s.m > *s.M))) throw ConfigError(where + ": need M >= m >= 0");
  if (s.M0 < s.m0) throw ConfigError(where + ": need M0 >= m0");
  if (!(s.theta > 1)) throw ConfigError(where + ".theta must exceed 1");
  if (s.max_inner < 1) throw ConfigError(where + ".max_inner must be positive");
  return s;
}

inline StoppingRule parse_stopping(const json& j, const std::string& where) {
  require_object(j, where);
  only_keys(j, {"kind", "tol"}, where);
  StoppingRule r = StoppingRule::relative(1e-7);
  std::string kind = "relative";
  read(j, "kind", kind, where);
  if (kind == "absolute") {
    r.kind = StoppingRule::Kind::absolute;
  } else if (kind != "relative") {
    throw ConfigError(where + ".kind must be 'absolute' or 'relative'");
  }
  read_positive(j, "tol", r.tol, where);
  return r;
}

/// Common run fields shared by "runs" entries and the "grid" block.
inline void parse_run_common(const json& j, RunConfig& r, const std::string& where) {
  if (j.contains("stopping")) r.stopping = parse_stopping(j.at("stopping"), where + ".stopping");
  read(j, "max_iter", r.max_iter, where);
  if (r.max_iter < 0) throw ConfigError(where + ".max_iter must be nonnegative");
}

}  // namespace detail

/// Parses a configuration document:
///
///   { "schema_version": 1, "diagnostics": false,
///     "runs": [ { "name": ..., "problem": {...}, "solver": {...} | "AD",
///                 "stopping": {"kind": "relative", "tol": 1e-7}, "max_iter": 50000 } ],
///     "grid": { "problems": [...], "solvers": [...], "seeds": [...],
///               "stopping": {...}, "max_iter": ... } }
///
/// Grid entries expand in problem, seed, solver order after the explicit runs.
inline GridConfig parse_config(const nlohmann::json& doc) {
  using detail::json;
  try {
    detail::require_object(doc, "config");
    detail::only_keys(doc, {"schema_version", "diagnostics", "runs", "grid", "description"}, "config");
    if (!doc.contains("schema_version")) throw ConfigError("config: missing 'schema_version'");
    if (doc.at("schema_version") != kSchemaVersion) {
      throw ConfigError("config: unsupported schema_version " + doc.at("schema_version").dump());
    }
    GridConfig g;
    detail::read(doc, "diagnostics", g.diagnostics, "config");

    if (doc.contains("runs")) {
      const json& runs = doc.at("runs");
      if (!runs.is_array()) throw ConfigError("config.runs: expected an array");
      for (std::size_t i = 0; i < runs.size(); ++i) {
        const std::string where = "runs[" + std::to_string(i) + "]";
        const json& j = runs[i];
        detail::require_object(j, where);
        detail::only_keys(j, {"name", "problem", "solver", "stopping", "max_iter"}, where);
        if (!j.contains("problem") || !j.contains("solver")) {
          throw ConfigError(where + ": needs exactly one 'problem' and one 'solver'");
        }
        RunConfig r;
        detail::read(j, "name", r.name, where);
        r.problem = detail::parse_problem(j.at("problem"), where + ".problem");
        r.solver = detail::parse_solver(j.at("solver"), where + ".solver");
        detail::parse_run_common(j, r, where);
        g.runs.push_back(std::move(r));
      }
    }

    if (doc.contains("grid")) {
      const json& j = doc.at("grid");
      detail::require_object(j, "grid");
      detail::only_keys(j, {"problems", "solvers", "seeds", "stopping", "max_iter"}, "grid");
      if (!j.contains("problems") || !j.at("problems").is_array() || !j.contains("solvers") ||
          !j.at("solvers").is_array()) {
        throw ConfigError("grid: needs 'problems' and 'solvers' arrays");
      }
      RunConfig base;
      detail::parse_run_common(j, base, "grid");
      std::vector<std::uint64_t> seeds;
      if (j.contains("seeds")) seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
      for (std::size_t p = 0; p < j.at("problems").size(); ++p) {
        const std::string pw = "grid.problems[" + std::to_string(p) + "]";
        const ProblemSpec prob = detail::parse_problem(j.at("problems")[p], pw);
        std::vector<std::uint64_t> ss = seeds.empty() ? std::vector<std::uint64_t>{prob.seed} : seeds;
        for (std::uint64_t seed : ss) {
          for (std::size_t s = 0; s < j.at("solvers").size(); ++s) {
            RunConfig r = base;
            r.problem = prob;
            r.problem.seed = seed;
            r.solver = detail::parse_solver(j.at("solvers")[s], "grid.solvers[" + std::to_string(s) + "]");
            g.runs.push_back(std::move(r));
          }
        }
      }
    }
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

inline GridConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in, nullptr, true, true);  // allow comments
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  GridConfig g = parse_config(doc);
  g.base_dir = path.parent_path();
  return g;
}

/// Command-line overrides: every run gets the seed and/or iteration budget.
inline void apply_overrides(GridConfig& g, std::optional<std::uint64_t> seed, std::optional<std::int64_t> max_iter) {
  for (RunConfig& r : g.runs) {
    if (seed) r.problem.seed = *seed;
    if (max_iter) r.max_iter = *max_iter;
  }
}

}  // namespace ncfista::bench
