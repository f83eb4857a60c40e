#include <cmath>

#include "doctest.h"
#include "sepnmf/error.hpp"
#include "sepnmf/metrics.hpp"

using namespace sepnmf;

namespace {

RecoveryReport report_from(std::initializer_list<std::pair<double, std::size_t>> points,
                           std::size_t trials = 4) {
  RecoveryReport r;
  for (const auto& [d, perfect] : points) {
    SweepPoint p;
    p.delta = d;
    p.trials = trials;
    p.perfect_trials = perfect;
    p.mean_recovery = (perfect + 0.5 * (trials - perfect)) / static_cast<double>(trials);
    r.per_delta.push_back(p);
  }
  compute_thresholds(r);
  return r;
}

}  // namespace

TEST_CASE("recovery fraction") {
  GroundTruth t{DenseMatrix::identity(3), DenseMatrix(3, 5), DenseMatrix(3, 5), {}};
  t.pure_column_map = {0, 1, 2, std::nullopt, 1};
  ExtractionResult r;
  r.indices = {0, 1, 2};
  CHECK(recovery_fraction(r, t) == 1.0);
  r.indices = {1, 4, 3};
  CHECK(recovery_fraction(r, t) == doctest::Approx(1.0 / 3.0));
  r.indices = {4, 0, 2};
  CHECK(recovery_fraction(r, t) == 1.0);
  r.indices = {};
  CHECK(recovery_fraction(r, t) == 0.0);
}

TEST_CASE("thresholds stop at the first failure") {
  auto r = report_from({{0, 4}, {0.1, 4}, {0.2, 3}, {0.3, 4}, {0.4, 0}});
  CHECK(r.threshold_full == 0.1);
  CHECK(r.last_perfect_delta == 0.3);
  CHECK_FALSE(r.noiseless_failure);
  // mean 0.875 at 0.2 breaks the 99% walk too.
  CHECK(r.threshold_99 == 0.1);

  r = report_from({{0, 3}, {0.1, 4}});
  CHECK(r.threshold_full == 0.0);
  CHECK(r.noiseless_failure);
  CHECK(r.last_perfect_delta == 0.1);

  r = report_from({{0, 100}, {0.5, 99}}, 100);
  CHECK(r.threshold_full == 0.0);
  CHECK(r.threshold_99 == 0.5);
}

TEST_CASE("grids") {
  const auto g = geometric_grid(1e-3, 1, 4, true);
  REQUIRE(g.size() == 5);
  CHECK(g[0] == 0.0);
  CHECK(g[1] == doctest::Approx(1e-3));
  CHECK(g[2] == doctest::Approx(1e-2));
  CHECK(g[4] == doctest::Approx(1.0));
  for (int e = 1; e <= 4; ++e) {
    const auto d = default_grid(e);
    CHECK(d.size() == 60);
    CHECK(d.front() == 0.0);
    for (std::size_t i = 1; i < d.size(); ++i) CHECK(d[i] > d[i - 1]);
  }
  CHECK(default_grid(3).back() == doctest::Approx(4e-2));
  CHECK_THROWS_AS(geometric_grid(0, 1, 3, false), InvalidArgument);
  CHECK_THROWS_AS(default_grid(0), InvalidArgument);
}

TEST_CASE("sweep results do not depend on the worker count") {
  const auto cfg = ExperimentConfig::desk(2, 0.0, 0);
  const Vector grid{0.0, 0.05, 0.2, 0.6};
  std::vector<NamedExtractor> algs{make_extractor("spa"), make_extractor("vca"),
                                   make_extractor("ppi")};
  SweepOptions a;
  a.trials = 6;
  a.seed = 17;
  SweepOptions b = a;
  b.jobs = 3;
  const auto ra = sweep_many(algs, cfg, grid, a);
  const auto rb = sweep_many(algs, cfg, grid, b);
  for (std::size_t k = 0; k < algs.size(); ++k) {
    CHECK(ra[k].algorithm == algs[k].name);
    for (std::size_t d = 0; d < grid.size(); ++d) {
      CHECK(ra[k].per_delta[d].mean_recovery == rb[k].per_delta[d].mean_recovery);
      CHECK(ra[k].per_delta[d].perfect_trials == rb[k].per_delta[d].perfect_trials);
    }
    CHECK(ra[k].threshold_full == rb[k].threshold_full);
  }
  // Noiseless SPA is exact.
  CHECK(ra[0].per_delta[0].mean_recovery == 1.0);
  CHECK(sweep(algs[0], cfg, grid, a).threshold_full == ra[0].threshold_full);
}

TEST_CASE("sweep records extractor failures and keeps going") {
  NamedExtractor boom{"boom", [](const DenseMatrix&, std::size_t, std::uint64_t) -> ExtractionResult {
                        throw ConvergenceFailure("nope");
                      }};
  SweepOptions o;
  o.trials = 3;
  const Vector grid{0.0, 0.1};
  const auto r = sweep(boom, ExperimentConfig::desk(1, 0.0, 0), grid, o);
  CHECK(r.per_delta[0].failed_trials == 3);
  CHECK(r.per_delta[1].mean_recovery == 0.0);
  CHECK(r.noiseless_failure);
  const Vector bad{0.1, 0.0};
  CHECK_THROWS_AS(sweep(boom, ExperimentConfig::desk(1, 0.0, 0), bad, o), InvalidArgument);
  CHECK_THROWS_AS(make_extractor("nmf"), InvalidArgument);
}

TEST_CASE("noise per unit delta") {
  // Middle points: max_i ||m_i - wbar|| over the pair midpoints.
  ExperimentConfig c = ExperimentConfig::desk(1, 0.3, 2);
  const auto inst = generate([&] {
    auto k = c;
    k.delta = 1.0;
    return k;
  }());
  CHECK(noise_per_delta(c) == doctest::Approx(max_column_norm(inst.truth.N)));
  c.exp_id = 2;
  // Gaussian columns of length m: norms concentrate near sqrt(m).
  const double v = noise_per_delta(c);
  CHECK(v > std::sqrt(40.0));
  CHECK(v < 2.0 * std::sqrt(40.0));
}

TEST_CASE("predicted bound") {
  const auto c = ExperimentConfig::desk(2, 0.0, 4);
  const auto w = generate_w(c);
  const auto b = predicted_bound(w, c, SelectorSpec::squared_l2());
  const auto tb = theorem_bound(w, SelectorSpec::squared_l2(), BoundConvention::PublishedTable);
  CHECK(b.eps_max == tb.eps_max);
  CHECK(b.noise_per_delta == doctest::Approx(noise_per_delta(c)));
  CHECK(b.predicted_delta == doctest::Approx(b.eps_max / b.noise_per_delta));
  SweepOptions o;
  o.trials = 2;
  o.with_bound = true;
  const Vector grid{0.0};
  const auto r = sweep(make_extractor("spa"), c, grid, o);
  REQUIRE(r.bound_predicted);
  CHECK(*r.bound_predicted > 0.0);
}
