// sepnmf command-line front end: extract, synth, bench, outliers.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "manifest.hpp"
#include "sepnmf/error.hpp"
#include "sepnmf/io.hpp"
#include "sepnmf/metrics.hpp"
#include "sepnmf/outliers.hpp"
#include "sepnmf/selectors.hpp"
#include "sepnmf/spa.hpp"
#include "sepnmf/synth.hpp"
#include "sepnmf/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitAlgorithm = 3;

// Thrown for usage problems detected after CLI11 parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string joined_args(int argc, char** argv) {
  std::string out;
  for (int i = 0; i < argc; ++i) {
    if (i) out += ' ';
    out += argv[i];
  }
  return out;
}

void write_json(const fs::path& path, const json& doc) {
  if (path == "-") {
    std::cout << doc.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw sepnmf::InvalidArgument("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& s, const char* what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError(std::string("bad ") + what + " '" + s + "'");
  }
}

// "default", "geom:<lo>:<hi>:<count>" (0 is prepended) or "d1,d2,...".
sepnmf::Vector parse_grid(const std::string& spec, int exp_id) {
  if (spec == "default") return sepnmf::default_grid(exp_id);
  if (spec.rfind("geom:", 0) == 0) {
    std::vector<std::string> parts;
    std::stringstream ss(spec.substr(5));
    std::string p;
    while (std::getline(ss, p, ':')) parts.push_back(p);
    if (parts.size() != 3) throw UsageError("grid must look like geom:<lo>:<hi>:<count>");
    const double count = parse_double(parts[2], "grid count");
    if (count < 1 || count != static_cast<double>(static_cast<std::size_t>(count))) {
      throw UsageError("grid count must be a positive integer");
    }
    return sepnmf::geometric_grid(parse_double(parts[0], "grid lo"),
                                  parse_double(parts[1], "grid hi"),
                                  static_cast<std::size_t>(count), true);
  }
  sepnmf::Vector g;
  for (const auto& item : split_list(spec)) g.push_back(parse_double(item, "grid value"));
  if (g.empty()) throw UsageError("empty grid");
  return g;
}

// Ascending, 1-based. Extraction order is kept in the JSON report.
std::string index_line(std::vector<std::size_t> idx) {
  std::sort(idx.begin(), idx.end());
  std::string out;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(idx[i] + 1);
  }
  return out;
}

unsigned jobs_default() {
  if (const char* env = std::getenv("SEPNMF_JOBS")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring invalid SEPNMF_JOBS='" << env << "'\n";
  }
  return 1;
}

// ---------------------------------------------------------------- extract

struct ExtractArgs {
  std::string input;
  std::optional<std::size_t> r;
  std::string selector = "l2";
  bool fast = false;
  bool naive = false;
  bool normalize = false;
  std::optional<double> tol;
  bool bound = false;
  std::string json_path;
};

int run_extract(const ExtractArgs& a, const std::string& command) {
  const sepnmf::DenseMatrix m = sepnmf::io::read_matrix(a.input);
  sepnmf::ExtractionOptions opts;
  opts.target_r = a.r;
  opts.residual_tol = a.tol;
  opts.selector = sepnmf::parse_selector(a.selector);
  opts.variant = a.fast ? sepnmf::Variant::FastUpdate : sepnmf::Variant::Naive;
  opts.l1_normalize = a.normalize;
  if (!opts.target_r && !opts.residual_tol) throw UsageError("give -r or --tol");

  const sepnmf::ExtractionResult res = sepnmf::extract(m, opts);
  std::cout << index_line(res.indices) << '\n';

  json report{{"schema_version", sepnmf::io::kSchemaVersion},
              {"kind", "sepnmf.extract"},
              {"rows", m.rows()},
              {"cols", m.cols()},
              {"selector", opts.selector.name()},
              {"variant", a.fast ? "fast" : "naive"},
              {"normalize", a.normalize},
              {"result", sepnmf::io::to_json(res)}};
  if (a.bound) {
    const sepnmf::DenseMatrix base =
        a.normalize ? sepnmf::l1_normalize_columns(m).first : m;
    const sepnmf::DenseMatrix w = base.select_columns(res.indices);
    const auto tb = sepnmf::theorem_bound(w, opts.selector);
    report["theorem_bound"] = {{"eps_max", tb.eps_max}, {"err_factor", tb.err_factor},
                               {"w", "extracted columns"}};
    std::cerr << "theorem bound on extracted columns: eps_max " << tb.eps_max << ", err_factor "
              << tb.err_factor << '\n';
  }
  if (!a.json_path.empty()) {
    json cfg{{"r", a.r ? json(*a.r) : json()},
             {"tol", a.tol ? json(*a.tol) : json()},
             {"selector", opts.selector.name()},
             {"fast", a.fast},
             {"normalize", a.normalize}};
    report["manifest"] = sepnmf::cli::run_manifest(command, cfg, 0, {fs::path(a.input)});
    write_json(a.json_path, report);
  }
  return 0;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  int exp = 0;
  double delta = 0.0;
  unsigned long long seed = 0;
  std::optional<std::size_t> m;
  std::optional<std::size_t> r;
  std::optional<std::size_t> n_mix;
  bool desk = false;
  std::string out;
  std::string format = "csv";
};

sepnmf::ExperimentConfig config_from(int exp, double delta, unsigned long long seed, bool desk,
                                     std::optional<std::size_t> m, std::optional<std::size_t> r,
                                     std::optional<std::size_t> n_mix) {
  sepnmf::ExperimentConfig c;
  if (desk) c = sepnmf::ExperimentConfig::desk(exp, delta, seed);
  c.exp_id = exp;
  c.delta = delta;
  c.seed = seed;
  if (m) c.m = *m;
  if (r) c.r = *r;
  c.n_mix = n_mix;
  c.validate();
  return c;
}

int run_synth(const SynthArgs& a, const std::string& command) {
  const auto c = config_from(a.exp, a.delta, a.seed, a.desk, a.m, a.r, a.n_mix);
  const auto fmt = sepnmf::io::parse_format(a.format);
  const sepnmf::Instance inst = sepnmf::generate(c);
  const fs::path matrix_path = a.out + "." + sepnmf::io::format_name(fmt);
  const fs::path truth_path = a.out + ".truth.json";
  const fs::path manifest_path = a.out + ".manifest.json";
  if (matrix_path.has_parent_path()) fs::create_directories(matrix_path.parent_path());
  sepnmf::io::write_matrix(matrix_path, inst.M, fmt);
  write_json(truth_path, sepnmf::io::truth_sidecar(c, inst.truth));
  json man = sepnmf::cli::run_manifest(command, sepnmf::io::to_json(c), a.seed, {});
  man["outputs"] = {{matrix_path.string(), sepnmf::cli::sha256_file(matrix_path)},
                    {truth_path.string(), sepnmf::cli::sha256_file(truth_path)}};
  write_json(manifest_path, man);
  std::cout << "wrote " << matrix_path.string() << " (" << inst.M.rows() << "x" << inst.M.cols()
            << "), " << truth_path.string() << '\n';
  return 0;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
  std::string exps = "1,2,3,4";
  std::string algs = "spa,ppi,vca,sivm";
  std::string grid = "default";
  std::size_t trials = 25;
  unsigned long long seed = 0;
  std::string out;
  std::optional<unsigned> jobs;
  bool desk = false;
  std::optional<std::size_t> m;
  std::optional<std::size_t> r;
  std::optional<std::size_t> n_mix;
  bool no_bound = false;
};

int run_bench(const BenchArgs& a, const std::string& command) {
  std::vector<sepnmf::NamedExtractor> algs;
  for (const auto& name : split_list(a.algs)) algs.push_back(sepnmf::make_extractor(name));
  if (algs.empty()) throw UsageError("no algorithms given");
  std::vector<int> exps;
  for (const auto& e : split_list(a.exps)) {
    const double v = parse_double(e, "experiment");
    if (v != 1 && v != 2 && v != 3 && v != 4) throw UsageError("experiments must be in 1..4");
    exps.push_back(static_cast<int>(v));
  }
  if (exps.empty()) throw UsageError("no experiments given");
  if (a.trials == 0) throw UsageError("--trials must be >= 1");

  sepnmf::SweepOptions so;
  so.trials = a.trials;
  so.seed = a.seed;
  so.jobs = a.jobs.value_or(jobs_default());
  so.with_bound = !a.no_bound;

  fs::create_directories(a.out);
  std::vector<sepnmf::RecoveryReport> all;
  json summary{{"schema_version", sepnmf::io::kSchemaVersion},
               {"kind", "sepnmf.bench"},
               {"trials", a.trials},
               {"seed", a.seed},
               {"experiments", json::array()}};
  std::cout << std::left << std::setw(5) << "exp" << std::setw(10) << "algorithm"
            << std::setw(14) << "threshold" << std::setw(14) << "threshold_99"
            << "predicted\n";
  for (int exp : exps) {
    const auto c = config_from(exp, 0.0, a.seed, a.desk, a.m, a.r, a.n_mix);
    const sepnmf::Vector grid = parse_grid(a.grid, exp);
    auto reports = sepnmf::sweep_many(algs, c, grid, so);
    json ej{{"config", sepnmf::io::to_json(c)}, {"grid", grid}, {"reports", json::array()}};
    for (const auto& rep : reports) {
      ej["reports"].push_back(sepnmf::io::to_json(rep));
      std::ostringstream thr;
      if (rep.noiseless_failure) {
        thr << "/";
      } else {
        thr << std::setprecision(4) << rep.threshold_full;
      }
      std::cout << std::left << std::setw(5) << exp << std::setw(10) << rep.algorithm
                << std::setw(14) << thr.str() << std::setw(14) << std::setprecision(4)
                << rep.threshold_99;
      if (rep.bound_predicted) std::cout << std::setprecision(3) << *rep.bound_predicted;
      std::cout << '\n';
      all.push_back(rep);
    }
    summary["experiments"].push_back(ej);
  }
  {
    std::ofstream csv(fs::path(a.out) / "recovery.csv");
    if (!csv) throw sepnmf::InvalidArgument("cannot write recovery.csv in " + a.out);
    sepnmf::io::write_recovery_csv(csv, all);
  }
  write_json(fs::path(a.out) / "summary.json", summary);
  json cfg{{"experiments", exps}, {"algorithms", split_list(a.algs)}, {"grid", a.grid},
           {"trials", a.trials},  {"jobs", so.jobs},                   {"desk", a.desk}};
  write_json(fs::path(a.out) / "manifest.json",
             sepnmf::cli::run_manifest(command, cfg, a.seed, {}));
  return 0;
}

// ---------------------------------------------------------------- outliers

struct OutlierArgs {
  std::string input;
  std::size_t r = 0;
  std::size_t t = 0;
  std::string selector = "l2";
  std::optional<double> qp_tol;
  std::size_t qp_max_iters = 5000;
  bool strict = false;
  std::string json_path;
};

int run_outliers(const OutlierArgs& a, const std::string& command) {
  const sepnmf::DenseMatrix m = sepnmf::io::read_matrix(a.input);
  sepnmf::OutlierOptions opts;
  opts.r = a.r;
  opts.t = a.t;
  opts.selector = sepnmf::parse_selector(a.selector);
  opts.qp_tol = a.qp_tol;
  opts.qp_max_iters = a.qp_max_iters;
  const sepnmf::OutlierResult res = sepnmf::extract_with_outliers(m, opts);

  std::cout << index_line(res.kept.indices) << '\n';
  for (std::size_t i = 0; i < res.scores.size(); ++i) {
    std::cout << "  " << res.scores[i].first + 1 << ' ' << std::setprecision(10)
              << res.scores[i].second << (i < a.r ? " kept" : " outlier") << '\n';
  }
  if (!a.json_path.empty()) {
    json report{{"schema_version", sepnmf::io::kSchemaVersion},
                {"kind", "sepnmf.outliers"},
                {"result", sepnmf::io::to_json(res)}};
    json cfg{{"r", a.r}, {"t", a.t}, {"selector", opts.selector.name()},
             {"qp_tol", a.qp_tol ? json(*a.qp_tol) : json()}, {"qp_max_iters", a.qp_max_iters}};
    report["manifest"] = sepnmf::cli::run_manifest(command, cfg, 0, {fs::path(a.input)});
    write_json(a.json_path, report);
  }
  if (!res.solution.converged) {
    std::cerr << (a.strict ? "error" : "warning") << " [solve]: abundance solver stopped at "
              << a.qp_max_iters << " iterations before reaching the tolerance\n";
    if (a.strict) return kExitAlgorithm;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Separable NMF column extraction and robustness benchmarks"};
  app.set_version_flag("--version", std::string(sepnmf::kVersion));
  app.require_subcommand(1);

  ExtractArgs ea;
  auto* ex = app.add_subcommand("extract", "Extract r columns from a matrix file");
  ex->add_option("input", ea.input, "Matrix file (CSV or raw)")->required();
  ex->add_option("-r,--rank", ea.r, "Number of columns to extract");
  ex->add_option("--selector", ea.selector, "l2 | robust:<alpha> | pnorm:<p>");
  auto* fast_flag = ex->add_flag("--fast", ea.fast, "Norm-update variant (l2 only)");
  auto* naive_flag = ex->add_flag("--naive", ea.naive, "Explicit residual (default)");
  fast_flag->excludes(naive_flag);
  ex->add_flag("--normalize", ea.normalize, "Scale columns to unit l1 norm first");
  ex->add_option("--tol", ea.tol, "Stop when every residual column norm is <= tol");
  ex->add_flag("--bound", ea.bound, "Report the robustness bound of the extracted columns");
  ex->add_option("--json", ea.json_path, "Write a JSON report ('-' for stdout)");

  SynthArgs sa;
  auto* sy = app.add_subcommand("synth", "Generate a synthetic experiment instance");
  sy->add_option("--exp", sa.exp, "Experiment 1..4")->required();
  sy->add_option("--delta", sa.delta, "Noise level");
  sy->add_option("--seed", sa.seed, "Seed (default 0)");
  sy->add_option("--m", sa.m, "Rows (default 200)");
  sy->add_option("--r", sa.r, "Endmembers (default 20)");
  sy->add_option("--n-mix", sa.n_mix, "Dirichlet columns for experiments 2 and 4");
  sy->add_flag("--desk", sa.desk, "Use m = 40, r = 8");
  sy->add_option("--out", sa.out, "Output prefix")->required();
  sy->add_option("--format", sa.format, "csv | raw");

  BenchArgs ba;
  auto* be = app.add_subcommand("bench", "Recovery sweeps over noise levels");
  be->add_option("--exp", ba.exps, "Comma-separated experiments");
  be->add_option("--alg", ba.algs, "Comma-separated algorithms: spa,spa-fast,ppi,vca,sivm");
  be->add_option("--grid", ba.grid, "default | geom:<lo>:<hi>:<count> | d1,d2,...");
  be->add_option("--trials", ba.trials, "Trials per noise level");
  be->add_option("--seed", ba.seed, "Master seed (default 0)");
  be->add_option("--out", ba.out, "Output directory")->required();
  be->add_option("--jobs", ba.jobs, "Worker threads (default $SEPNMF_JOBS or 1)")
      ->check(CLI::PositiveNumber);
  be->add_flag("--desk", ba.desk, "Use m = 40, r = 8");
  be->add_option("--m", ba.m, "Rows");
  be->add_option("--r", ba.r, "Endmembers");
  be->add_option("--n-mix", ba.n_mix, "Dirichlet columns for experiments 2 and 4");
  be->add_flag("--no-bound", ba.no_bound, "Skip the predicted-bound column");

  OutlierArgs oa;
  auto* ou = app.add_subcommand("outliers", "Extraction tolerant to outlier columns");
  ou->add_option("input", oa.input, "Matrix file (CSV or raw)")->required();
  ou->add_option("-r,--rank", oa.r, "Number of endmembers")->required();
  ou->add_option("-t,--outliers", oa.t, "Maximum number of outliers")->required();
  ou->add_option("--selector", oa.selector, "l2 | robust:<alpha> | pnorm:<p>");
  ou->add_option("--qp-tol", oa.qp_tol, "Solver tolerance (default 1e-8 ||M||_F)");
  ou->add_option("--qp-max-iters", oa.qp_max_iters, "Solver iteration cap");
  ou->add_flag("--strict", oa.strict, "Fail when the solver does not converge");
  ou->add_option("--json", oa.json_path, "Write a JSON report ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  const std::string command = joined_args(argc, argv);
  try {
    if (*ex) return run_extract(ea, command);
    if (*sy) return run_synth(sa, command);
    if (*be) return run_bench(ba, command);
    if (*ou) return run_outliers(oa, command);
  } catch (const UsageError& e) {
    std::cerr << "error [usage]: " << e.what() << '\n';
    return kExitUsage;
  } catch (const sepnmf::InvalidArgument& e) {
    std::cerr << "error [input]: " << e.what() << '\n';
    return kExitUsage;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error [io]: " << e.what() << '\n';
    return kExitUsage;
  } catch (const sepnmf::Error& e) {
    std::cerr << "error [algorithm]: " << e.what() << '\n';
    return kExitAlgorithm;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitAlgorithm;
  }
  return kExitUsage;
}
