#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sepnmf/dense_matrix.hpp"
#include "sepnmf/extraction_result.hpp"
#include "sepnmf/selectors.hpp"
#include "sepnmf/spa.hpp"
#include "sepnmf/synth.hpp"

namespace sepnmf {

/// Fraction of endmembers k such that some extracted index is a pure column
/// of k. Several pure copies of the same endmember count once.
double recovery_fraction(const ExtractionResult& result, const GroundTruth& truth);

struct SweepPoint {
  double delta = 0.0;
  double mean_recovery = 0.0;
  std::size_t trials = 0;
  /// Trials with recovery exactly 1.
  std::size_t perfect_trials = 0;
  /// Trials where the extractor threw; they count as recovery 0.
  std::size_t failed_trials = 0;
};

struct RecoveryReport {
  std::string algorithm;
  int exp_id = 0;
  std::vector<SweepPoint> per_delta;
  /// Largest grid delta such that every trial at it and at every smaller grid
  /// delta recovered all endmembers. 0 when the first grid point already fails.
  double threshold_full = 0.0;
  /// Same walk with mean recovery >= 0.99.
  double threshold_99 = 0.0;
  /// Largest grid delta with all trials perfect, ignoring failures below it.
  double last_perfect_delta = 0.0;
  /// The grid contains delta = 0 and some trial failed there.
  bool noiseless_failure = false;
  /// Average theorem-predicted delta over the W draws of the sweep, if computed.
  std::optional<double> bound_predicted;
};

/// Recomputes the threshold fields of `report` from per_delta.
void compute_thresholds(RecoveryReport& report);

using ExtractorFn =
    std::function<ExtractionResult(const DenseMatrix& m, std::size_t r, std::uint64_t seed)>;

struct NamedExtractor {
  std::string name;
  ExtractorFn fn;
};

/// "spa", "spa-fast", "ppi", "vca" or "sivm". `selector` applies to "spa".
NamedExtractor make_extractor(std::string_view name,
                              const SelectorSpec& selector = SelectorSpec::squared_l2());

struct SweepOptions {
  std::size_t trials = 25;
  std::uint64_t seed = 0;
  /// Worker threads; results do not depend on it.
  unsigned jobs = 1;
  /// Also compute the average theorem-predicted delta (l2 selector).
  bool with_bound = false;
  BoundConvention convention = BoundConvention::PublishedTable;
};

/// Runs every extractor on the same instances: for grid index d and trial t
/// the instance seed is derive_seed(seed, {exp_id, d, t}) and the extractor
/// seed derive_seed(instance seed, {3}). `deltas` must be ascending.
std::vector<RecoveryReport> sweep_many(std::span<const NamedExtractor> algorithms,
                                       const ExperimentConfig& config,
                                       std::span<const double> deltas, const SweepOptions& opts);

RecoveryReport sweep(const NamedExtractor& algorithm, const ExperimentConfig& config,
                     std::span<const double> deltas, const SweepOptions& opts);

/// `count` points geometrically spaced over [lo, hi], preceded by 0 when
/// include_zero is set.
Vector geometric_grid(double lo, double hi, std::size_t count, bool include_zero);

/// 0 followed by 59 geometric points over an experiment-specific range.
Vector default_grid(int exp_id);

/// max_i ||n_i|| / delta for the instance generate(config) would produce.
double noise_per_delta(const ExperimentConfig& config);

struct BoundReport {
  double eps_max = 0.0;
  double err_factor = 0.0;
  double noise_per_delta = 0.0;
  /// eps_max / noise_per_delta
  double predicted_delta = 0.0;
  /// threshold_full of an l2 sweep, when one was run.
  std::optional<double> observed_delta;
};

/// Converts the robustness bound of W into a noise level delta for the
/// experiment described by `config` (whose W is taken to be `w`).
BoundReport predicted_bound(const DenseMatrix& w, const ExperimentConfig& config,
                            const SelectorSpec& selector,
                            BoundConvention convention = BoundConvention::PublishedTable);

/// predicted_bound for the W of `config`, plus the observed threshold of an
/// SPA sweep (trials per point, default grid) under `selector`.
BoundReport bound_report(const ExperimentConfig& config, const SelectorSpec& selector,
                         std::size_t trials, std::uint64_t seed,
                         BoundConvention convention = BoundConvention::PublishedTable);

}  // namespace sepnmf
