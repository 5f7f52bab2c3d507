#include "fastkm/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "fastkm/two_stage.hpp"

namespace fastkm {

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("cost model overflow");
  return out;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("cost model overflow");
  return out;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::string describe(const DatasetSource& source) {
  if (const auto* blobs = std::get_if<BlobSpec>(&source)) {
    std::ostringstream os;
    os << "blobs(n=" << blobs->n << ",d=" << blobs->d << ",k=" << blobs->k
       << ",spread=" << format_double(blobs->spread)
       << ",separation=" << format_double(blobs->separation) << ",seed=" << blobs->seed
       << ",shape=" << to_string(blobs->shape) << ")";
    return os.str();
  }
  return "file(" + std::get<FileSource>(source).path.string() + ")";
}

}  // namespace

std::uint64_t predicted_cost(std::uint64_t k, std::uint64_t q, std::uint64_t n) {
  if (k == 0 || q == 0 || n == 0) throw UsageError("cost model inputs must be positive");
  return checked_mul(checked_mul(k, q), n);
}

std::uint64_t predicted_two_stage_cost(std::uint64_t k, std::uint64_t q_fast, std::uint64_t n_fast,
                                       std::uint64_t q_slow, std::uint64_t n) {
  return checked_add(predicted_cost(k, q_fast, n_fast), predicted_cost(k, q_slow, n));
}

void BenchConfig::validate() const {
  if (k < 1) throw UsageError("k must be >= 1");
  if (repetitions < 1) throw UsageError("repetitions must be >= 1");
  if (workers < 1) throw UsageError("workers must be >= 1");
  if (max_iters < 1) throw UsageError("max_iters must be >= 1");
  if (sample_fractions.empty()) throw UsageError("fractions must not be empty");
  if (tolerances.empty()) throw UsageError("tolerances must not be empty");
  for (const double f : sample_fractions) {
    if (!(f > 0.0 && f <= 1.0)) throw UsageError("fractions: each value must be in (0, 1]");
  }
  if (!std::is_sorted(sample_fractions.begin(), sample_fractions.end()) ||
      std::adjacent_find(sample_fractions.begin(), sample_fractions.end()) != sample_fractions.end()) {
    throw UsageError("fractions: values must be strictly ascending");
  }
  for (const double t : tolerances) {
    if (!(t > 0.0)) throw UsageError("tolerances: each value must be > 0");
  }
  for (std::size_t i = 1; i < tolerances.size(); ++i) {
    if (!(tolerances[i] < tolerances[i - 1])) {
      throw UsageError("tolerances: values must be strictly descending");
    }
  }
  if (!(fast_tolerance >= 0.0)) throw UsageError("fast_tolerance must be >= 0");
  if (const auto* blobs = std::get_if<BlobSpec>(&source)) blobs->validate();
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_real(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size() || !std::isfinite(v)) throw std::invalid_argument(value);
    return v;
  } catch (const std::logic_error&) {
    throw UsageError("config key '" + key + "': expected a number, got '" + value + "'");
  }
}

std::uint64_t to_count(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    if (value.empty() || value.front() == '-') throw std::invalid_argument(value);
    const unsigned long long v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::logic_error&) {
    throw UsageError("config key '" + key + "': expected a non-negative integer, got '" + value + "'");
  }
}

std::vector<double> to_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_real(key, trim(item)));
  if (out.empty()) throw UsageError("config key '" + key + "': empty list");
  return out;
}

bool to_flag(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw UsageError("config key '" + key + "': expected true/false, got '" + value + "'");
}

}  // namespace

BenchConfig parse_bench_config(std::istream& in) {
  BenchConfig cfg;
  BlobSpec blobs;
  FileSource file;
  std::string source = "blobs";
  bool data_seed_set = false;
  std::map<std::string, std::size_t> seen;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw UsageError("config line " + std::to_string(line_no) + ": missing key");
    if (seen.count(key)) throw UsageError("config key '" + key + "' given twice");
    seen[key] = line_no;
    if (value.empty()) throw UsageError("config key '" + key + "': missing value");

    if (key == "source") {
      if (value != "blobs" && value != "file") {
        throw UsageError("config key 'source': expected 'blobs' or 'file', got '" + value + "'");
      }
      source = value;
    } else if (key == "path") {
      file.path = value;
    } else if (key == "header") {
      file.has_header = to_flag(key, value);
    } else if (key == "n") {
      blobs.n = to_count(key, value);
    } else if (key == "d") {
      blobs.d = to_count(key, value);
    } else if (key == "blob_k") {
      blobs.k = to_count(key, value);
    } else if (key == "spread") {
      blobs.spread = to_real(key, value);
    } else if (key == "separation") {
      blobs.separation = to_real(key, value);
    } else if (key == "shape") {
      if (value != "gaussian" && value != "uniform") {
        throw UsageError("config key 'shape': expected 'gaussian' or 'uniform', got '" + value + "'");
      }
      blobs.shape = blob_shape_from_string(value);
    } else if (key == "data_seed") {
      blobs.seed = to_count(key, value);
      data_seed_set = true;
    } else if (key == "k") {
      cfg.k = to_count(key, value);
    } else if (key == "fractions") {
      cfg.sample_fractions = to_list(key, value);
    } else if (key == "tolerances") {
      cfg.tolerances = to_list(key, value);
    } else if (key == "repetitions") {
      cfg.repetitions = to_count(key, value);
    } else if (key == "seed") {
      cfg.seed = to_count(key, value);
    } else if (key == "workers") {
      cfg.workers = to_count(key, value);
    } else if (key == "max_iters") {
      cfg.max_iters = to_count(key, value);
    } else if (key == "fast_tolerance") {
      cfg.fast_tolerance = to_real(key, value);
    } else {
      throw UsageError("config key '" + key + "' is not recognized");
    }
  }

  if (source == "file") {
    if (file.path.empty()) throw UsageError("config key 'path' is required when source = file");
    cfg.source = file;
  } else {
    if (!seen.count("blob_k")) blobs.k = cfg.k;
    if (!data_seed_set) blobs.seed = cfg.seed;
    cfg.source = blobs;
  }
  cfg.validate();
  return cfg;
}

BenchConfig load_bench_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config '" + path.string() + "'");
  return parse_bench_config(in);
}

BenchReport run_benchmark(const BenchConfig& cfg, const Dataset& ds, std::string dataset_label) {
  cfg.validate();
  using clock = std::chrono::steady_clock;
  const Parallelism par{cfg.workers};

  BenchReport report;
  report.dataset = std::move(dataset_label);
  report.n = ds.rows();
  report.d = ds.cols();
  report.k = cfg.k;
  report.seed = cfg.seed;
  report.repetitions = cfg.repetitions;
  report.workers = cfg.workers;
  report.fractions = cfg.sample_fractions;
  report.tolerances = cfg.tolerances;

  for (const double tol : cfg.tolerances) {
    for (const double fraction : cfg.sample_fractions) {
      BenchCell cell;
      cell.fraction = fraction;
      cell.tolerance = tol;
      std::vector<double> t_two, t_base, q_fast, q_slow, q_base, ratios;
      for (std::size_t r = 0; r < cfg.repetitions; ++r) {
        const Seed seed = cfg.seed + r;
        const StageParams base_params{tol, cfg.max_iters};
        TwoStageConfig two;
        two.k = cfg.k;
        two.sample_fraction = fraction;
        two.fast = {std::max(tol, cfg.fast_tolerance), cfg.max_iters};
        two.slow = {tol, cfg.max_iters};
        two.seed = seed;

        auto start = clock::now();
        const ClusterResult base = run_baseline(ds, cfg.k, base_params, seed, par);
        const double base_s = std::chrono::duration<double>(clock::now() - start).count();

        start = clock::now();
        const TwoStageResult staged = run_two_stage(ds, two, par);
        const double two_s = std::chrono::duration<double>(clock::now() - start).count();

        t_base.push_back(std::max(base_s, 1e-9));
        t_two.push_back(std::max(two_s, 1e-9));
        q_base.push_back(static_cast<double>(base.iters));
        q_fast.push_back(static_cast<double>(staged.fast.iters));
        q_slow.push_back(static_cast<double>(staged.slow.iters));
        ratios.push_back(base.wcss > 0.0 ? staged.slow.wcss / base.wcss
                                         : (staged.slow.wcss > 0.0 ? HUGE_VAL : 1.0));
        cell.baseline_converged = cell.baseline_converged && base.converged;
        cell.two_stage_converged =
            cell.two_stage_converged && staged.fast.converged && staged.slow.converged;
        cell.fast_empty_cluster_warnings += staged.fast_empty_cluster_warning ? 1 : 0;
      }
      cell.median_time_baseline = median(t_base);
      cell.median_time_two_stage = median(t_two);
      cell.speedup = cell.median_time_baseline / cell.median_time_two_stage;
      cell.baseline_iters = median(q_base);
      cell.fast_iters = median(q_fast);
      cell.slow_iters = median(q_slow);
      cell.wcss_ratio = median(ratios);
      report.cells.push_back(cell);
    }
  }
  return report;
}

BenchReport run_benchmark(const BenchConfig& cfg) {
  cfg.validate();
  Dataset ds;
  if (const auto* blobs = std::get_if<BlobSpec>(&cfg.source)) {
    ds = generate_blobs(*blobs).points;
  } else {
    const auto& file = std::get<FileSource>(cfg.source);
    ds = load_csv(file.path, file.has_header);
  }
  return run_benchmark(cfg, ds, describe(cfg.source));
}

std::string two_significant(double v) {
  if (!std::isfinite(v)) return v > 0 ? "inf" : "nan";
  if (v == 0.0) return "0.0";
  const int magnitude = static_cast<int>(std::floor(std::log10(std::fabs(v))));
  const int decimals = std::max(0, 1 - magnitude);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

namespace {

using nlohmann::json;

json cell_to_json(const BenchCell& c) {
  return json{{"fraction", c.fraction},
              {"tolerance", c.tolerance},
              {"median_time_two_stage", c.median_time_two_stage},
              {"median_time_baseline", c.median_time_baseline},
              {"speedup", c.speedup},
              {"fast_iters", c.fast_iters},
              {"slow_iters", c.slow_iters},
              {"baseline_iters", c.baseline_iters},
              {"wcss_ratio", c.wcss_ratio},
              {"baseline_converged", c.baseline_converged},
              {"two_stage_converged", c.two_stage_converged},
              {"fast_empty_cluster_warnings", c.fast_empty_cluster_warnings}};
}

BenchCell cell_from_json(const json& j) {
  BenchCell c;
  j.at("fraction").get_to(c.fraction);
  j.at("tolerance").get_to(c.tolerance);
  j.at("median_time_two_stage").get_to(c.median_time_two_stage);
  j.at("median_time_baseline").get_to(c.median_time_baseline);
  j.at("speedup").get_to(c.speedup);
  j.at("fast_iters").get_to(c.fast_iters);
  j.at("slow_iters").get_to(c.slow_iters);
  j.at("baseline_iters").get_to(c.baseline_iters);
  j.at("wcss_ratio").get_to(c.wcss_ratio);
  j.at("baseline_converged").get_to(c.baseline_converged);
  j.at("two_stage_converged").get_to(c.two_stage_converged);
  j.at("fast_empty_cluster_warnings").get_to(c.fast_empty_cluster_warnings);
  return c;
}

std::string render_table(const BenchReport& r) {
  std::ostringstream os;
  os << "dataset: " << r.dataset << "  n=" << r.n << " d=" << r.d << " k=" << r.k
     << "  seed=" << r.seed << " repetitions=" << r.repetitions << " workers=" << r.workers << "\n\n";

  auto grid = [&](const std::string& title, auto&& value) {
    os << title << '\n';
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-10s", "tol");
    os << buf;
    for (const double f : r.fractions) {
      std::snprintf(buf, sizeof buf, "%12s", (two_significant(f * 100.0) + "%").c_str());
      os << buf;
    }
    os << '\n';
    for (std::size_t t = 0; t < r.tolerances.size(); ++t) {
      std::snprintf(buf, sizeof buf, "%-10.0e", r.tolerances[t]);
      os << buf;
      for (std::size_t f = 0; f < r.fractions.size(); ++f) {
        std::snprintf(buf, sizeof buf, "%12s", value(r.cell(t, f)).c_str());
        os << buf;
      }
      os << '\n';
    }
    os << '\n';
  };

  grid("speed-up (baseline / two-stage)", [](const BenchCell& c) {
    return two_significant(c.speedup) + (c.baseline_converged && c.two_stage_converged ? "" : "*");
  });
  grid("median seconds (two-stage / baseline)", [](const BenchCell& c) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g/%.3g", c.median_time_two_stage, c.median_time_baseline);
    return std::string(buf);
  });
  grid("median iterations (fast+slow / baseline)", [](const BenchCell& c) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g+%g/%g", c.fast_iters, c.slow_iters, c.baseline_iters);
    return std::string(buf);
  });
  os << "* a run in this cell hit max_iters before converging\n";
  return os.str();
}

std::string render_csv(const BenchReport& r) {
  std::ostringstream os;
  os << "fraction,tolerance,median_time_two_stage,median_time_baseline,speedup,fast_iters,"
        "slow_iters,baseline_iters,wcss_ratio,baseline_converged,two_stage_converged,"
        "fast_empty_cluster_warnings,n,d,k,seed,repetitions,workers\n";
  for (std::size_t t = 0; t < r.tolerances.size(); ++t) {
    for (std::size_t f = 0; f < r.fractions.size(); ++f) {
      const auto& c = r.cell(t, f);
      os << format_double(c.fraction) << ',' << format_double(c.tolerance) << ','
         << format_double(c.median_time_two_stage) << ',' << format_double(c.median_time_baseline)
         << ',' << format_double(c.speedup) << ',' << format_double(c.fast_iters) << ','
         << format_double(c.slow_iters) << ',' << format_double(c.baseline_iters) << ','
         << format_double(c.wcss_ratio) << ',' << (c.baseline_converged ? 1 : 0) << ','
         << (c.two_stage_converged ? 1 : 0) << ',' << c.fast_empty_cluster_warnings << ',' << r.n
         << ',' << r.d << ',' << r.k << ',' << r.seed << ',' << r.repetitions << ',' << r.workers
         << '\n';
    }
  }
  return os.str();
}

}  // namespace

std::string emit_report(const BenchReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::table:
      return render_table(report);
    case ReportFormat::csv:
      return render_csv(report);
    case ReportFormat::json: {
      json cells = json::array();
      for (const auto& c : report.cells) cells.push_back(cell_to_json(c));
      const json j{{"dataset", report.dataset},   {"n", report.n},
                   {"d", report.d},               {"k", report.k},
                   {"seed", report.seed},         {"repetitions", report.repetitions},
                   {"workers", report.workers},   {"fractions", report.fractions},
                   {"tolerances", report.tolerances}, {"cells", cells}};
      return j.dump(2) + "\n";
    }
  }
  return {};
}

BenchReport parse_report_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    BenchReport r;
    j.at("dataset").get_to(r.dataset);
    j.at("n").get_to(r.n);
    j.at("d").get_to(r.d);
    j.at("k").get_to(r.k);
    j.at("seed").get_to(r.seed);
    j.at("repetitions").get_to(r.repetitions);
    j.at("workers").get_to(r.workers);
    j.at("fractions").get_to(r.fractions);
    j.at("tolerances").get_to(r.tolerances);
    for (const auto& c : j.at("cells")) r.cells.push_back(cell_from_json(c));
    if (r.cells.size() != r.fractions.size() * r.tolerances.size()) {
      throw DataError("report has " + std::to_string(r.cells.size()) + " cells for a " +
                      std::to_string(r.tolerances.size()) + "x" + std::to_string(r.fractions.size()) +
                      " grid");
    }
    return r;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed bench report: ") + e.what());
  }
}

}  // namespace fastkm
