// fastkm: generate datasets, cluster them (baseline or two-stage k-means),
// benchmark both variants and plot convergence traces.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "fastkm/bench.hpp"
#include "fastkm/dataset.hpp"
#include "fastkm/plot.hpp"
#include "fastkm/trace_io.hpp"
#include "fastkm/two_stage.hpp"

namespace {

using namespace fastkm;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

Seed resolve_seed(const std::optional<Seed>& seed) {
  if (seed) return *seed;
  std::random_device rd;
  return (static_cast<Seed>(rd()) << 32) ^ rd();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << text;
  if (!out.flush()) throw DataError("write failed for '" + path.string() + "'");
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct GenerateArgs {
  BlobSpec spec;
  std::optional<Seed> seed;
  std::string shape = "gaussian";
  std::string data = "blobs.csv";
  std::string labels = "blobs_labels.csv";
  std::string centers = "blobs_centers.csv";
};

int cmd_generate(GenerateArgs& a) {
  a.spec.seed = resolve_seed(a.seed);
  a.spec.shape = blob_shape_from_string(a.shape);
  a.spec.validate();
  const Blobs blobs = generate_blobs(a.spec);
  save_csv(blobs.points, a.data);
  save_labels(blobs.labels, a.labels);
  save_csv(blobs.centers, a.centers);
  std::cout << "generated blobs n=" << a.spec.n << " d=" << a.spec.d << " k=" << a.spec.k
            << " spread=" << format_double(a.spec.spread)
            << " separation=" << format_double(a.spec.separation)
            << " shape=" << to_string(a.spec.shape) << " seed=" << a.spec.seed << '\n'
            << "wrote " << a.data << ", " << a.labels << ", " << a.centers << '\n';
  return kExitOk;
}

struct ClusterArgs {
  std::string data;
  bool header = false;
  std::string mode = "two-stage";
  std::size_t k = 0;
  double fraction = 0.10;
  double tol_fast = 1e-3;
  double tol_slow = 1e-6;
  std::size_t max_iters = 300;
  std::optional<Seed> seed;
  std::size_t workers = 1;
  std::string out_prefix = "cluster";
};

void print_stage(const ClusterResult& r, std::string_view name, std::size_t n) {
  std::cout << name << ": points=" << n << " iterations=" << r.iters
            << " converged=" << (r.converged ? "yes" : "no") << " wcss=" << format_double(r.wcss)
            << " distance_computations=" << r.distance_computations
            << " empty_clusters=" << r.empty_clusters << '\n';
}

int cmd_cluster(const ClusterArgs& a) {
  const Dataset ds = load_csv(a.data, a.header);
  if (a.k > ds.rows()) {
    throw DataError("k=" + std::to_string(a.k) + " exceeds point count " + std::to_string(ds.rows()));
  }
  const Seed seed = resolve_seed(a.seed);
  const Parallelism par{a.workers};

  IterationTrace trace;
  const ClusterResult* final_result = nullptr;
  TwoStageResult staged;
  ClusterResult single;
  std::uint64_t distances = 0;

  const auto start = std::chrono::steady_clock::now();
  if (a.mode == "two-stage") {
    TwoStageConfig cfg;
    cfg.k = a.k;
    cfg.sample_fraction = a.fraction;
    cfg.fast = {a.tol_fast, a.max_iters};
    cfg.slow = {a.tol_slow, a.max_iters};
    cfg.seed = seed;
    staged = run_two_stage(ds, cfg, par);
    final_result = &staged.slow;
  } else {
    single = run_baseline(ds, a.k, {a.tol_slow, a.max_iters}, seed, par);
    final_result = &single;
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::cout << "mode=" << a.mode << " n=" << ds.rows() << " d=" << ds.cols() << " k=" << a.k
            << " seed=" << seed << " workers=" << a.workers << '\n';
  if (a.mode == "two-stage") {
    print_stage(staged.fast, "fast stage", staged.sample_indices.size());
    print_stage(staged.slow, "slow stage", ds.rows());
    trace = staged.fast.trace;
    trace.insert(trace.end(), staged.slow.trace.begin(), staged.slow.trace.end());
    distances = staged.fast.distance_computations + staged.slow.distance_computations;
    if (staged.fast_empty_cluster_warning) {
      std::cout << "warning: fast stage ended with " << staged.fast.empty_clusters
                << " empty cluster(s); consider a larger --fraction\n";
    }
  } else {
    print_stage(single, "baseline", ds.rows());
    trace = single.trace;
    distances = single.distance_computations;
  }
  std::cout << "final wcss=" << format_double(final_result->wcss)
            << " distance_computations=" << distances << " wall_seconds=" << seconds << '\n';

  save_labels(final_result->labels, a.out_prefix + "_labels.csv");
  save_csv(final_result->centers, a.out_prefix + "_centers.csv");
  std::ostringstream coords, stats;
  write_trace_coordinates(coords, trace);
  write_trace_stats(stats, trace);
  write_text(a.out_prefix + "_trace.csv", coords.str());
  write_text(a.out_prefix + "_trace_stats.csv", stats.str());
  return kExitOk;
}

struct BenchArgs {
  std::string config;
  std::string data;
  bool header = false;
  BlobSpec blobs{100000, 10, 6, 1.0, 10.0, 0};
  std::string shape = "gaussian";
  std::size_t k = 6;
  std::vector<double> fractions{0.10, 0.15, 0.20, 0.30, 0.40};
  std::vector<double> tolerances{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9, 1e-10};
  std::size_t repetitions = 5;
  std::optional<Seed> seed;
  std::size_t workers = 1;
  std::size_t max_iters = 300;
  std::string out_prefix = "bench";
};

int cmd_bench(BenchArgs& a) {
  BenchConfig cfg;
  if (!a.config.empty()) {
    cfg = load_bench_config(a.config);
  } else {
    cfg.k = a.k;
    cfg.sample_fractions = a.fractions;
    cfg.tolerances = a.tolerances;
    cfg.repetitions = a.repetitions;
    cfg.seed = resolve_seed(a.seed);
    cfg.workers = a.workers;
    cfg.max_iters = a.max_iters;
    if (!a.data.empty()) {
      cfg.source = FileSource{a.data, a.header};
    } else {
      a.blobs.k = a.k;
      a.blobs.seed = cfg.seed;
      a.blobs.shape = blob_shape_from_string(a.shape);
      cfg.source = a.blobs;
    }
    cfg.validate();
  }
  const BenchReport report = run_benchmark(cfg);
  const std::string table = emit_report(report, ReportFormat::table);
  write_text(a.out_prefix + ".json", emit_report(report, ReportFormat::json));
  write_text(a.out_prefix + ".csv", emit_report(report, ReportFormat::csv));
  write_text(a.out_prefix + ".txt", table);
  std::cout << table;
  return kExitOk;
}

struct PlotArgs {
  std::string trace;
  std::string stats;
  std::vector<std::string> reports;
  std::string view = "coordinate";
  std::size_t center = 0;
  std::size_t dim = 0;
  std::vector<std::size_t> dims{0, 1};
  std::string output = "trace.svg";
};

int cmd_trace_plot(const PlotArgs& a) {
  plot::Figure fig;
  if (a.view == "coordinate" || a.view == "path") {
    if (a.trace.empty()) throw UsageError("--trace is required for view '" + a.view + "'");
    const auto rows = load_trace_coordinates(a.trace);
    fig = a.view == "coordinate" ? plot::coordinate_figure(rows, a.center, a.dim)
                                 : plot::center_path_figure(rows, a.dims.at(0), a.dims.at(1));
  } else if (a.view == "shift") {
    const std::string path = !a.stats.empty() ? a.stats : a.trace;
    if (path.empty()) throw UsageError("--stats is required for view 'shift'");
    fig = plot::shift_figure(load_trace_stats(path));
  } else {
    if (a.reports.empty()) throw UsageError("--report is required for view 'timing'");
    std::vector<BenchReport> reports;
    for (const auto& p : a.reports) reports.push_back(parse_report_json(read_text(p)));
    fig = plot::timing_figure(std::move(reports));
  }
  write_text(a.output, fig.render_svg());
  std::cout << "wrote " << a.output << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fastkm: two-stage k-means clustering, benchmarks and traces"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Generate a synthetic blob dataset");
  g->add_option("--n", gen.spec.n, "Number of points")->check(CLI::PositiveNumber);
  g->add_option("--d", gen.spec.d, "Dimension")->check(CLI::PositiveNumber);
  g->add_option("--k", gen.spec.k, "Number of generating clusters")->check(CLI::PositiveNumber);
  g->add_option("--spread", gen.spec.spread, "Per-axis standard deviation");
  g->add_option("--separation", gen.spec.separation, "Minimum distance between centers");
  g->add_option("--shape", gen.shape, "gaussian or uniform")
      ->check(CLI::IsMember({"gaussian", "uniform"}));
  g->add_option("--seed", gen.seed, "RNG seed (printed when omitted)");
  g->add_option("--out-data", gen.data, "Dataset CSV path");
  g->add_option("--out-labels", gen.labels, "Generating labels CSV path");
  g->add_option("--out-centers", gen.centers, "Generating centers CSV path");

  ClusterArgs cl;
  auto* c = app.add_subcommand("cluster", "Cluster a CSV dataset");
  c->add_option("--data", cl.data, "Dataset CSV")->required();
  c->add_flag("--header", cl.header, "Skip the first CSV row");
  c->add_option("--mode", cl.mode, "baseline or two-stage")
      ->check(CLI::IsMember({"baseline", "two-stage"}));
  c->add_option("--k", cl.k, "Number of clusters")->required()->check(CLI::PositiveNumber);
  c->add_option("--fraction", cl.fraction, "Fast-stage sample fraction");
  c->add_option("--tol-fast", cl.tol_fast, "Fast-stage tolerance (squared shift)");
  c->add_option("--tol-slow", cl.tol_slow, "Slow-stage and baseline tolerance (squared shift)");
  c->add_option("--max-iters", cl.max_iters, "Iteration cap per stage")->check(CLI::PositiveNumber);
  c->add_option("--seed", cl.seed, "RNG seed (printed when omitted)");
  c->add_option("--workers", cl.workers, "Worker threads")->check(CLI::PositiveNumber);
  c->add_option("--out-prefix", cl.out_prefix, "Prefix for labels/centers/trace CSVs");

  BenchArgs be;
  auto* b = app.add_subcommand("bench", "Benchmark two-stage against baseline k-means");
  b->add_option("--config", be.config, "key = value config file");
  b->add_option("--data", be.data, "Dataset CSV (default: generated blobs)");
  b->add_flag("--header", be.header, "Skip the first CSV row");
  b->add_option("--n", be.blobs.n, "Generated points")->check(CLI::PositiveNumber);
  b->add_option("--d", be.blobs.d, "Generated dimension")->check(CLI::PositiveNumber);
  b->add_option("--spread", be.blobs.spread, "Generated per-axis standard deviation");
  b->add_option("--separation", be.blobs.separation, "Generated center separation");
  b->add_option("--shape", be.shape, "Generated cluster shape: gaussian or uniform")
      ->check(CLI::IsMember({"gaussian", "uniform"}));
  b->add_option("--k", be.k, "Number of clusters")->check(CLI::PositiveNumber);
  b->add_option("--fractions", be.fractions, "Sample fractions, ascending")->delimiter(',');
  b->add_option("--tolerances", be.tolerances, "Tolerances, descending")->delimiter(',');
  b->add_option("--repetitions", be.repetitions, "Repetitions per cell")->check(CLI::PositiveNumber);
  b->add_option("--seed", be.seed, "RNG seed (printed when omitted)");
  b->add_option("--workers", be.workers, "Worker threads")->check(CLI::PositiveNumber);
  b->add_option("--max-iters", be.max_iters, "Iteration cap per stage")->check(CLI::PositiveNumber);
  b->add_option("--out-prefix", be.out_prefix, "Prefix for .json/.csv/.txt reports");

  PlotArgs pl;
  auto* p = app.add_subcommand("trace-plot", "Render a trace or bench report as SVG");
  p->add_option("--trace", pl.trace, "Trace coordinates CSV");
  p->add_option("--stats", pl.stats, "Trace stats CSV (view 'shift')");
  p->add_option("--report", pl.reports, "Bench report JSON (view 'timing'; repeatable)");
  p->add_option("--view", pl.view, "coordinate, path, shift or timing")
      ->check(CLI::IsMember({"coordinate", "path", "shift", "timing"}));
  p->add_option("--center", pl.center, "Center index (view 'coordinate')");
  p->add_option("--dim", pl.dim, "Coordinate index (view 'coordinate')");
  p->add_option("--dims", pl.dims, "Two coordinate indices (view 'path')")
      ->delimiter(',')
      ->expected(2);
  p->add_option("--output", pl.output, "Output SVG path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*g) return cmd_generate(gen);
    if (*c) return cmd_cluster(cl);
    if (*b) return cmd_bench(be);
    if (*p) return cmd_trace_plot(pl);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
