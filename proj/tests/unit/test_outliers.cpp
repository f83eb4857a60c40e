#include <cmath>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"
#include "sepnmf/error.hpp"
#include "sepnmf/linalg.hpp"
#include "sepnmf/outliers.hpp"

using namespace sepnmf;

TEST_CASE("simplex least squares, exact cases") {
  const auto id = DenseMatrix::identity(3);
  const auto s = simplex_least_squares(id, id, 1e-12, 5000);
  CHECK(s.converged);
  CHECK(oracle::max_abs_diff(s.G, id) < 1e-9);
  CHECK(s.objective < 1e-18);

  const auto m = DenseMatrix::from_rows({{0.5}, {0.5}, {0}});
  const auto g = simplex_least_squares(id, m, 1e-12, 5000).G;
  CHECK(g(0, 0) == doctest::Approx(0.5));
  CHECK(g(1, 0) == doctest::Approx(0.5));
  CHECK(g(2, 0) == doctest::Approx(0.0));
}

TEST_CASE("simplex least squares recovers planted coefficients") {
  Rng rng(71);
  for (int t = 0; t < 20; ++t) {
    const auto a = testing_util::gaussian(rng, 10, 4);
    DenseMatrix x(4, 15);
    for (std::size_t j = 0; j < 15; ++j) {
      const auto d = rng.dirichlet(Vector(5, 1.0));  // last coordinate is slack
      for (std::size_t k = 0; k < 4; ++k) x(k, j) = d[k];
    }
    const auto sol = simplex_least_squares(a, matmul(a, x), 1e-12, 20000);
    CHECK(sol.converged);
    CHECK(oracle::max_abs_diff(sol.G, x) < 1e-6);
    CHECK(sol.objective <= 1e-10);
  }
}

TEST_CASE("simplex least squares iterates stay feasible and satisfy the fixed point") {
  Rng rng(72);
  const auto a = testing_util::gaussian(rng, 6, 5);
  const auto m = 3.0 * testing_util::gaussian(rng, 6, 10);
  const auto sol = simplex_least_squares(a, m, 1e-10, 20000);
  CHECK(sol.converged);
  const double lip = std::pow(singular_values(a).front(), 2);
  const auto grad = matmul_tn(a, matmul(a, sol.G) - m);
  for (std::size_t j = 0; j < 10; ++j) {
    double sum = 0;
    Vector step(5);
    for (std::size_t k = 0; k < 5; ++k) {
      CHECK(sol.G(k, j) >= -1e-10);
      sum += sol.G(k, j);
      step[k] = sol.G(k, j) - grad(k, j) / lip;
    }
    CHECK(sum <= 1 + 1e-10);
    const Vector p = simplex_project(step);
    double res = 0;
    for (std::size_t k = 0; k < 5; ++k) res += std::pow(p[k] - sol.G(k, j), 2);
    CHECK(std::sqrt(res) <= 1e-10);
  }
}

TEST_CASE("iteration cap is reported") {
  Rng rng(73);
  const auto a = testing_util::gaussian(rng, 6, 5);
  const auto m = testing_util::gaussian(rng, 6, 3);
  const auto sol = simplex_least_squares(a, m, 1e-15, 2);
  CHECK_FALSE(sol.converged);
  CHECK(sol.iterations == 2);
}

TEST_CASE("score report") {
  const auto g = DenseMatrix::from_rows({{1, 0.5}, {0, 0.5}});
  const std::vector<std::size_t> j{4, 9};
  const auto rep = outlier_score_report(g, j);
  CHECK(rep[0] == std::pair<std::size_t, double>{4, 1.5});
  CHECK(rep[1] == std::pair<std::size_t, double>{9, 0.5});
  const std::vector<std::size_t> k{7, 3, 5};
  const auto ties = outlier_score_report(DenseMatrix::identity(3), k);
  CHECK(ties[0].first == 7);
  CHECK(ties[1].first == 3);
  CHECK(ties[2].first == 5);
  Rng rng(74);
  const auto r = testing_util::gaussian(rng, 4, 6);
  const std::vector<std::size_t> idx{0, 1, 2, 3};
  for (const auto& [i, s] : outlier_score_report(r, idx)) {
    double want = 0;
    for (std::size_t c = 0; c < 6; ++c) want += std::abs(r(i, c));
    CHECK(s == doctest::Approx(want));
  }
}

TEST_CASE("toy instance with one outlier") {
  const auto m = DenseMatrix::from_rows({{1, 0, 0, 0.5}, {0, 1, 0, 0.5}, {0, 0, 1, 0}});
  OutlierOptions o;
  o.r = 2;
  o.t = 1;
  const auto res = extract_with_outliers(m, o);
  CHECK(std::set<std::size_t>(res.candidates.begin(), res.candidates.end()) ==
        std::set<std::size_t>{0, 1, 2});
  CHECK(res.kept.indices == std::vector<std::size_t>{0, 1});
  CHECK(res.scores[0].second == doctest::Approx(1.5));
  CHECK(res.scores[1].second == doctest::Approx(1.5));
  CHECK(res.scores[2].second == doctest::Approx(1.0));
}

TEST_CASE("planted outliers are rejected") {
  Rng rng(75);
  for (int t = 0; t < 20; ++t) {
    const auto w = testing_util::uniform(rng, 20, 4);
    const auto outl = testing_util::uniform(rng, 20, 2);
    DenseMatrix h(4, 30);
    for (std::size_t j = 0; j < 30; ++j) {
      const auto d = rng.dirichlet(Vector(4, 1.0));
      for (std::size_t k = 0; k < 4; ++k) h(k, j) = d[k];
    }
    const auto m = w.hcat(outl).hcat(matmul(w, h));
    OutlierOptions o;
    o.r = 4;
    o.t = 2;
    const auto res = extract_with_outliers(m, o);
    CHECK(std::set<std::size_t>(res.kept.indices.begin(), res.kept.indices.end()) ==
          std::set<std::size_t>{0, 1, 2, 3});
  }
}

TEST_CASE("outlier option validation") {
  const auto m = DenseMatrix::identity(4);
  OutlierOptions o;
  o.r = 1;
  CHECK_THROWS_AS(extract_with_outliers(m, o), InvalidOptions);
  o.r = 3;
  o.t = 2;
  CHECK_THROWS_AS(extract_with_outliers(m, o), InvalidOptions);
  // r + t fits but t > m - r.
  const auto tall = DenseMatrix(3, 6, 1.0);
  o.r = 2;
  o.t = 2;
  CHECK_THROWS_AS(extract_with_outliers(tall, o), InvalidOptions);
}

TEST_CASE("rank deficient over-extraction degrades gracefully") {
  // Rank 3 data, r + t = 4 requested: proceeds with 3 candidates.
  const auto m = DenseMatrix::from_rows(
      {{1, 0, 0, 0.5, 0.2}, {0, 1, 0, 0.5, 0.3}, {0, 0, 1, 0, 0.5}, {0, 0, 0, 0, 0}});
  OutlierOptions o;
  o.r = 2;
  o.t = 2;
  const auto res = extract_with_outliers(m, o);
  CHECK(res.candidates.size() == 3);
  CHECK(res.kept.indices.size() == 2);
  o.r = 4;
  o.t = 0;
  CHECK_THROWS_AS(extract_with_outliers(m, o), RankDeficiency);
}
