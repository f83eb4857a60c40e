#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "sepnmf/baselines.hpp"
#include "sepnmf/error.hpp"

using namespace sepnmf;

namespace {

BaselineOptions opts(std::size_t r, std::uint64_t seed = 0) {
  BaselineOptions o;
  o.r = r;
  o.seed = seed;
  return o;
}

std::set<std::size_t> as_set(const std::vector<std::size_t>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("baselines recover vertices of noiseless separable data") {
  Rng rng(81);
  const std::set<std::size_t> want{0, 1, 2, 3, 4};
  for (int t = 0; t < 10; ++t) {
    const auto w = testing_util::uniform(rng, 25, 5);
    const auto m = testing_util::separable(rng, w, 40);
    CHECK(as_set(vca(m, opts(5, t)).indices) == want);
    CHECK(as_set(sivm(m, opts(5)).indices) == want);
    auto p = opts(5, t);
    p.ppi_K = 5000;
    CHECK(as_set(ppi(m, p).indices) == want);
  }
}

TEST_CASE("ppi votes") {
  // Two points on a line: every direction votes once for each end.
  const auto m = DenseMatrix::from_rows({{0, 1, 0.5}, {0, 1, 0.5}});
  auto o = opts(2, 3);
  o.ppi_K = 100;
  const auto res = ppi(m, o);
  CHECK(as_set(res.indices) == std::set<std::size_t>{0, 1});
  CHECK(res.step_scores[0] + res.step_scores[1] == doctest::Approx(200.0));
  // Identical columns: every direction picks the first index for both ends.
  const auto same = DenseMatrix(3, 4, 1.0);
  const auto s = ppi(same, opts(1, 4));
  CHECK(s.indices.front() == 0);
  CHECK(s.step_scores.front() == doctest::Approx(1000.0));
}

TEST_CASE("baselines are deterministic in the seed") {
  Rng rng(82);
  const auto m = testing_util::gaussian(rng, 12, 40);
  CHECK(ppi(m, opts(4, 9)).indices == ppi(m, opts(4, 9)).indices);
  CHECK(vca(m, opts(4, 9)).indices == vca(m, opts(4, 9)).indices);
  CHECK(sivm(m, opts(4, 1)).indices == sivm(m, opts(4, 2)).indices);
}

TEST_CASE("vca without principal components") {
  Rng rng(83);
  const auto w = testing_util::uniform(rng, 10, 3);
  const auto m = testing_util::separable(rng, w, 20);
  auto o = opts(3, 5);
  o.vca_use_pca = false;
  CHECK(as_set(vca(m, o).indices) == std::set<std::size_t>{0, 1, 2});
}

TEST_CASE("sivm starts from the far end of the data") {
  const auto m = DenseMatrix::from_rows({{0, 1, 5, 2}, {0, 0, 0, 3}});
  const auto res = sivm(m, opts(2));
  // Farthest from column 0 is column 2; farthest from column 2 is column 0.
  CHECK(res.indices.front() == 0);
  CHECK(res.indices[1] == 2);
}

TEST_CASE("baseline argument checks") {
  const auto m = DenseMatrix::identity(3);
  CHECK_THROWS_AS(ppi(m, opts(4)), InvalidArgument);
  CHECK_THROWS_AS(vca(m, opts(0)), InvalidArgument);
  CHECK_THROWS_AS(sivm(m, opts(4)), InvalidArgument);
  auto o = opts(2);
  o.ppi_K = 0;
  CHECK_THROWS_AS(ppi(m, o), InvalidArgument);
}
