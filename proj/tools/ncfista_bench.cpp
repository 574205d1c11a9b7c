// ncfista-bench: run solver grids, check trajectory invariants, dump
// generated instances and cache MovieLens ratings.

#include "ncfista/bench/config.hpp"
#include "ncfista/bench/diagnostics.hpp"
#include "ncfista/bench/grid.hpp"
#include "ncfista/bench/instance_io.hpp"
#include "ncfista/problems/movielens.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using namespace ncfista;

namespace {

enum Exit : int { kOk = 0, kUsage = 1, kConfigError = 2, kRunError = 3, kDiagnosticFailure = 4 };

struct Common {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> max_iter;
  bool trajectory = false;
  unsigned jobs = 1;
};

void add_common(CLI::App* app, Common& c, bool needs_config = true) {
  auto* opt = app->add_option("--config", c.config, "JSON run configuration");
  if (needs_config) opt->required();
  app->add_option("--out", c.out, "output directory")->capture_default_str();
  app->add_option("--seed", c.seed, "override every problem seed");
  app->add_option("--max-iter", c.max_iter, "override every outer-iteration budget")->check(CLI::NonNegativeNumber);
}

bench::GridConfig load(const Common& c) {
  bench::GridConfig g = bench::load_config(c.config);
  bench::apply_overrides(g, c.seed, c.max_iter);
  return g;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  return f;
}

int diagnose_all(const bench::GridConfig& g, const fs::path& out_dir) {
  auto report = open_out(out_dir / "diagnostics.txt");
  bool all = true;
  for (const auto& run : g.runs) {
    const bench::DiagnosticReport rep = bench::run_diagnostics(run, g.base_dir);
    bench::write_report(std::cout, rep);
    bench::write_report(report, rep);
    all = all && rep.passed();
  }
  std::cout << (all ? "all diagnostics passed\n" : "diagnostic failures\n");
  return all ? kOk : kDiagnosticFailure;
}

int cmd_run(const Common& c) {
  const bench::GridConfig g = load(c);
  const fs::path out_dir = c.out;
  fs::create_directories(out_dir);
  const auto outputs = bench::run_grid(g, c.trajectory, c.jobs);
  const auto rows = bench::rows_of(outputs);

  auto results = open_out(out_dir / "results.csv");
  bench::write_results_csv(results, rows);
  auto timing = open_out(out_dir / "timing.csv");
  bench::write_timing_csv(timing, rows);
  auto table = open_out(out_dir / "results.txt");
  bench::write_text_table(table, rows);
  bench::write_text_table(std::cout, rows);

  if (c.trajectory) {
    fs::create_directories(out_dir / "trajectories");
    for (std::size_t i = 0; i < outputs.size(); ++i) {
      if (!outputs[i].row.ok()) continue;
      auto f = open_out(out_dir / "trajectories" / ("run_" + std::to_string(i) + ".csv"));
      bench::write_trajectory_csv(f, outputs[i].result.trajectory);
    }
  }

  bool run_failed = false;
  for (const auto& r : rows) {
    if (!r.ok()) {
      std::cerr << r.problem << " / " << r.solver << ": " << r.status << '\n';
      run_failed = true;
    }
  }
  if (run_failed) return kRunError;
  if (g.diagnostics) return diagnose_all(g, out_dir);
  return kOk;
}

int cmd_diag(const Common& c) {
  const bench::GridConfig g = load(c);
  fs::create_directories(c.out);
  return diagnose_all(g, c.out);
}

int cmd_gen(const Common& c) {
  const bench::GridConfig g = load(c);
  const fs::path out_dir = c.out;
  fs::create_directories(out_dir);
  int status = kOk;
  for (std::size_t i = 0; i < g.runs.size(); ++i) {
    const fs::path path = out_dir / ("instance_" + std::to_string(i) + ".json");
    try {
      const auto j = bench::instance_json(g.runs[i].problem, g.base_dir);
      auto f = open_out(path);
      f << j.dump() << '\n';
      std::cout << path.string() << "  " << j.at("label").get<std::string>() << '\n';
    } catch (const std::exception& e) {
      std::cerr << "run " << i << ": " << e.what() << '\n';
      status = kRunError;
    }
  }
  return status;
}

int cmd_ingest(const std::string& input, const Common& c) {
  problems::RatingSet s;
  try {
    s = problems::load_movielens(input);
  } catch (const problems::RatingFormatError& e) {
    std::cerr << e.what() << '\n';
    return kConfigError;
  }
  const fs::path out_dir = c.out;
  fs::create_directories(out_dir);
  const fs::path path = out_dir / "ratings.bin";
  problems::write_rating_cache(s, path.string());
  std::cout << path.string() << ": " << s.entries.size() << " ratings, " << s.users << " users x " << s.items
            << " items\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Benchmark harness for NC-FISTA and ADAP-NC-FISTA"};
  app.require_subcommand(1);

  Common run_opts, diag_opts, gen_opts, ingest_opts;
  auto* run = app.add_subcommand("run", "run a solver grid and write result tables");
  add_common(run, run_opts);
  run->add_flag("--trajectory", run_opts.trajectory, "write per-iteration trajectory CSVs");
  run->add_option("--jobs", run_opts.jobs, "concurrent runs")->check(CLI::PositiveNumber);

  auto* diag = app.add_subcommand("diag", "check trajectory invariants for every configured run");
  add_common(diag, diag_opts);

  auto* gen = app.add_subcommand("gen", "write the generated instances as JSON");
  add_common(gen, gen_opts);

  std::string ingest_input;
  auto* ingest = app.add_subcommand("ingest", "convert a MovieLens u.data file to the binary rating cache");
  ingest->add_option("input", ingest_input, "path to u.data")->required();
  ingest->add_option("--out", ingest_opts.out, "output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (*run) return cmd_run(run_opts);
    if (*diag) return cmd_diag(diag_opts);
    if (*gen) return cmd_gen(gen_opts);
    if (*ingest) return cmd_ingest(ingest_input, ingest_opts);
  } catch (const bench::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRunError;
  }
  return kUsage;
}
