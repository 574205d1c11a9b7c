#pragma once

#include "ncfista/bench/config.hpp"
#include "ncfista/bench/instances.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace ncfista::bench {

struct ResultRow {
  std::string problem;
  std::string solver;
  std::int64_t iterations = 0;
  std::int64_t resolvents = 0;
  double wall_time = 0;  // seconds, solve only
  double objective = 0;
  double relative_residual = 0;
  std::string status;  // converged, max_iter or "error: ..."

  bool ok() const { return status == "converged" || status == "max_iter"; }
};

struct RunOutput {
  ResultRow row;
  SolverResult result;  // empty when the run failed
};

/// Builds the instance, solves it and fills a row. Any failure after the
/// config was accepted (missing data file, line-search blow-up, ...) lands
/// in `status` instead of propagating.
inline RunOutput run_one(const RunConfig& run, const std::filesystem::path& base_dir = {},
                         bool log_trajectory = false) {
  RunOutput out;
  out.row.solver = to_string(run.solver.method);
  out.row.problem = to_string(run.problem.family);
  try {
    const ProblemInstance problem = build_instance(run.problem, base_dir);
    out.row.problem = problem.label;
    const auto t0 = std::chrono::steady_clock::now();
    out.result = solve(problem, run, log_trajectory);
    out.row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.row.iterations = out.result.counters.outer_iterations;
    out.row.resolvents = out.result.counters.resolvent_evals;
    out.row.objective = out.result.objective;
    out.row.relative_residual = out.result.relative_residual();
    out.row.status = to_string(out.result.status);
  } catch (const std::exception& e) {
    out.row.status = std::string("error: ") + e.what();
  }
  return out;
}

/// Runs every config; results keep the config order whatever `jobs` is.
inline std::vector<RunOutput> run_grid(const GridConfig& grid, bool log_trajectory = false, unsigned jobs = 1) {
  std::vector<RunOutput> out(grid.runs.size());
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(grid.runs.size())));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < grid.runs.size(); ++i) out[i] = run_one(grid.runs[i], grid.base_dir, log_trajectory);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < jobs; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < grid.runs.size(); i = next++) {
        out[i] = run_one(grid.runs[i], grid.base_dir, log_trajectory);
      }
    });
  }
  for (auto& th : pool) th.join();
  return out;
}

// ---------------------------------------------------------------------------
// Output
// ---------------------------------------------------------------------------

/// Fixed significant digits keep the CSV short and byte-stable.
inline std::string format_number(double x, int digits = 10) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, digits);
  return std::string(buf, res.ptr);
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

/// Deterministic part of the rows: everything except wall time.
inline void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << "problem,solver,iterations,resolvents,objective,relative_residual,status\n";
  for (const ResultRow& r : rows) {
    out << csv_field(r.problem) << ',' << csv_field(r.solver) << ',' << r.iterations << ',' << r.resolvents << ','
        << format_number(r.objective) << ',' << format_number(r.relative_residual, 6) << ','
        << csv_field(r.status) << '\n';
  }
}

inline void write_timing_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << "index,problem,solver,wall_time\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out << i << ',' << csv_field(rows[i].problem) << ',' << csv_field(rows[i].solver) << ','
        << format_number(rows[i].wall_time, 6) << '\n';
  }
}

inline void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryRecord>& traj) {
  out << "k,v_norm,phi,lambda,m,C,resolvents\n";
  for (const TrajectoryRecord& t : traj) {
    out << t.k << ',' << format_number(t.v_norm) << ',' << format_number(t.phi, 15) << ','
        << format_number(t.lambda) << ',' << format_number(t.m) << ',' << format_number(t.C) << ','
        << t.resolvents << '\n';
  }
}

/// Aligned plain-text table with the same columns plus wall time.
inline void write_text_table(std::ostream& out, const std::vector<ResultRow>& rows) {
  const std::vector<std::string> head = {"problem", "solver", "iterations", "resolvents",
                                         "time(s)", "objective", "rel.residual", "status"};
  std::vector<std::vector<std::string>> cells;
  for (const ResultRow& r : rows) {
    cells.push_back({r.problem, r.solver, std::to_string(r.iterations), std::to_string(r.resolvents),
                     format_number(r.wall_time, 3), format_number(r.objective), format_number(r.relative_residual, 3),
                     r.status});
  }
  std::vector<std::size_t> width(head.size());
  for (std::size_t c = 0; c < head.size(); ++c) {
    width[c] = head[c].size();
    for (const auto& row : cells) width[c] = std::max(width[c], row[c].size());
  }
  auto line = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      const bool numeric = c >= 2 && c <= 6;
      const std::string pad(width[c] - row[c].size(), ' ');
      out << (numeric ? pad + row[c] : row[c] + (c + 1 < row.size() ? pad : "")) << (c + 1 < row.size() ? "  " : "");
    }
    out << '\n';
  };
  line(head);
  std::size_t total = 0;
  for (std::size_t w : width) total += w + 2;
  out << std::string(total - 2, '-') << '\n';
  for (const auto& row : cells) line(row);
}

inline std::vector<ResultRow> rows_of(const std::vector<RunOutput>& outputs) {
  std::vector<ResultRow> rows;
  rows.reserve(outputs.size());
  for (const RunOutput& o : outputs) rows.push_back(o.row);
  return rows;
}

}  // namespace ncfista::bench
