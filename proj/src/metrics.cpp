#include "sepnmf/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <set>
#include <string>
#include <thread>

#include "sepnmf/baselines.hpp"
#include "sepnmf/error.hpp"
#include "sepnmf/random.hpp"

namespace sepnmf {

namespace {

constexpr std::uint64_t kAlgorithmStream = 3;
constexpr std::uint64_t kMixStream = 2;

Instance instance_with_w(const DenseMatrix& w, const ExperimentConfig& config, double delta) {
  if (config.exp_id == 1 || config.exp_id == 3) return gen_middle_points(w, delta);
  return gen_dirichlet_gaussian(w, config.mixtures(), delta,
                                derive_seed(config.seed, {kMixStream}));
}

}  // namespace

double recovery_fraction(const ExtractionResult& result, const GroundTruth& truth) {
  const std::size_t r = truth.W.cols();
  std::set<std::size_t> found;
  for (std::size_t j : result.indices) {
    if (j < truth.pure_column_map.size() && truth.pure_column_map[j]) {
      found.insert(*truth.pure_column_map[j]);
    }
  }
  return static_cast<double>(found.size()) / static_cast<double>(r);
}

void compute_thresholds(RecoveryReport& report) {
  report.threshold_full = 0.0;
  report.threshold_99 = 0.0;
  report.last_perfect_delta = 0.0;
  report.noiseless_failure = false;
  bool full_alive = true;
  bool p99_alive = true;
  for (const SweepPoint& p : report.per_delta) {
    const bool perfect = p.trials > 0 && p.perfect_trials == p.trials;
    if (p.delta == 0.0 && !perfect) report.noiseless_failure = true;
    if (perfect) report.last_perfect_delta = p.delta;
    full_alive = full_alive && perfect;
    p99_alive = p99_alive && p.mean_recovery >= 0.99;
    if (full_alive) report.threshold_full = p.delta;
    if (p99_alive) report.threshold_99 = p.delta;
  }
}

NamedExtractor make_extractor(std::string_view name, const SelectorSpec& selector) {
  const std::string n(name);
  if (n == "spa") {
    return {n, [selector](const DenseMatrix& m, std::size_t r, std::uint64_t) {
              ExtractionOptions o;
              o.target_r = r;
              o.selector = selector;
              return extract(m, o);
            }};
  }
  if (n == "spa-fast") {
    return {n, [](const DenseMatrix& m, std::size_t r, std::uint64_t) {
              return extract_fast(m, r);
            }};
  }
  auto baseline = [](auto fn) {
    return [fn](const DenseMatrix& m, std::size_t r, std::uint64_t seed) {
      BaselineOptions o;
      o.r = r;
      o.seed = seed;
      return fn(m, o);
    };
  };
  if (n == "ppi") return {n, baseline(ppi)};
  if (n == "vca") return {n, baseline(vca)};
  if (n == "sivm") return {n, baseline(sivm)};
  throw InvalidArgument("unknown algorithm '" + n + "' (expected spa, spa-fast, ppi, vca, sivm)");
}

std::vector<RecoveryReport> sweep_many(std::span<const NamedExtractor> algorithms,
                                       const ExperimentConfig& config,
                                       std::span<const double> deltas, const SweepOptions& opts) {
  config.validate();
  if (opts.trials == 0) throw InvalidArgument("sweep: trials must be >= 1");
  if (!std::is_sorted(deltas.begin(), deltas.end())) {
    throw InvalidArgument("sweep: deltas must be ascending");
  }
  const std::size_t nd = deltas.size();
  const std::size_t nt = opts.trials;
  const std::size_t na = algorithms.size();

  // recovery[(d * nt + t) * na + a]; failed flags alongside.
  std::vector<double> recovery(nd * nt * na, 0.0);
  std::vector<char> failed(nd * nt * na, 0);
  std::vector<double> predicted(nt, 0.0);

  std::atomic<std::size_t> next{0};
  std::exception_ptr fatal;
  std::mutex fatal_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t item = next.fetch_add(1);
      if (item >= nd * nt) return;
      const std::size_t d = item / nt;
      const std::size_t t = item % nt;
      try {
        ExperimentConfig c = config;
        c.delta = deltas[d];
        c.seed = derive_seed(opts.seed, {static_cast<std::uint64_t>(config.exp_id), d, t});
        const Instance inst = generate(c);
        const std::uint64_t alg_seed = derive_seed(c.seed, {kAlgorithmStream});
        for (std::size_t a = 0; a < na; ++a) {
          const std::size_t slot = item * na + a;
          try {
            recovery[slot] = recovery_fraction(algorithms[a].fn(inst.M, c.r, alg_seed), inst.truth);
          } catch (const Error&) {
            failed[slot] = 1;
          }
        }
        if (opts.with_bound && d == 0) {
          try {
            predicted[t] = predicted_bound(inst.truth.W, c, SelectorSpec::squared_l2(),
                                           opts.convention)
                               .predicted_delta;
          } catch (const RankDeficiency&) {
            predicted[t] = 0.0;
          }
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(fatal_mutex);
        if (!fatal) fatal = std::current_exception();
        next.store(nd * nt);
        return;
      }
    }
  };

  const unsigned jobs = std::max(1u, opts.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (fatal) std::rethrow_exception(fatal);

  std::vector<RecoveryReport> reports(na);
  for (std::size_t a = 0; a < na; ++a) {
    RecoveryReport& rep = reports[a];
    rep.algorithm = algorithms[a].name;
    rep.exp_id = config.exp_id;
    for (std::size_t d = 0; d < nd; ++d) {
      SweepPoint p;
      p.delta = deltas[d];
      p.trials = nt;
      double sum = 0.0;
      for (std::size_t t = 0; t < nt; ++t) {
        const std::size_t slot = (d * nt + t) * na + a;
        sum += recovery[slot];
        if (recovery[slot] == 1.0) ++p.perfect_trials;
        if (failed[slot]) ++p.failed_trials;
      }
      p.mean_recovery = sum / static_cast<double>(nt);
      rep.per_delta.push_back(p);
    }
    compute_thresholds(rep);
    if (opts.with_bound && nd > 0) {
      double s = 0.0;
      for (double v : predicted) s += v;
      rep.bound_predicted = s / static_cast<double>(nt);
    }
  }
  return reports;
}

RecoveryReport sweep(const NamedExtractor& algorithm, const ExperimentConfig& config,
                     std::span<const double> deltas, const SweepOptions& opts) {
  return sweep_many(std::span<const NamedExtractor>(&algorithm, 1), config, deltas, opts).front();
}

Vector geometric_grid(double lo, double hi, std::size_t count, bool include_zero) {
  if (!(lo > 0.0) || !(hi >= lo)) throw InvalidArgument("geometric_grid: need 0 < lo <= hi");
  Vector g;
  if (include_zero) g.push_back(0.0);
  if (count == 1) {
    g.push_back(lo);
    return g;
  }
  const double ratio = std::log(hi / lo);
  for (std::size_t i = 0; i < count; ++i) {
    g.push_back(lo * std::exp(ratio * static_cast<double>(i) / static_cast<double>(count - 1)));
  }
  return g;
}

Vector default_grid(int exp_id) {
  switch (exp_id) {
    case 1:
    case 2:
      return geometric_grid(2.5e-3, 1.0, 59, true);
    case 3:
      return geometric_grid(1e-4, 4e-2, 59, true);
    case 4:
      return geometric_grid(2e-6, 8e-4, 59, true);
    default:
      throw InvalidArgument("default_grid: experiment must be 1..4");
  }
}

double noise_per_delta(const ExperimentConfig& config) {
  ExperimentConfig c = config;
  c.delta = 1.0;
  return max_column_norm(generate(c).truth.N);
}

BoundReport predicted_bound(const DenseMatrix& w, const ExperimentConfig& config,
                            const SelectorSpec& selector, BoundConvention convention) {
  const TheoremBound tb = theorem_bound(w, selector, convention);
  BoundReport rep;
  rep.eps_max = tb.eps_max;
  rep.err_factor = tb.err_factor;
  rep.noise_per_delta = max_column_norm(instance_with_w(w, config, 1.0).truth.N);
  rep.predicted_delta = rep.noise_per_delta > 0.0 ? rep.eps_max / rep.noise_per_delta : 0.0;
  return rep;
}

BoundReport bound_report(const ExperimentConfig& config, const SelectorSpec& selector,
                         std::size_t trials, std::uint64_t seed, BoundConvention convention) {
  BoundReport rep = predicted_bound(generate_w(config), config, selector, convention);
  SweepOptions so;
  so.trials = trials;
  so.seed = seed;
  const Vector grid = default_grid(config.exp_id);
  rep.observed_delta = sweep(make_extractor("spa", selector), config, grid, so).threshold_full;
  return rep;
}

}  // namespace sepnmf
