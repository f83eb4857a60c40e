#include <cmath>
#include <numeric>
#include <set>

#include "doctest.h"
#include "sepnmf/error.hpp"
#include "sepnmf/random.hpp"

using namespace sepnmf;

TEST_CASE("bit source is the standard 64-bit Mersenne Twister") {
  // The C++ standard fixes the 10000th output of a default-seeded mt19937_64.
  Rng rng(5489);
  std::uint64_t v = 0;
  for (int i = 0; i < 10000; ++i) v = rng.next_u64();
  CHECK(v == 9981545732273789042ULL);
}

TEST_CASE("uniform uses the top 53 bits") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) {
    const double u = a.uniform();
    CHECK(u == static_cast<double>(b.next_u64() >> 11) / 9007199254740992.0);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("same seed, same stream") {
  Rng a(7), b(7);
  for (int i = 0; i < 50; ++i) {
    CHECK(a.normal() == b.normal());
    CHECK(a.gamma(0.4) == b.gamma(0.4));
  }
}

TEST_CASE("derived seeds separate streams") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t a = 0; a < 10; ++a)
    for (std::uint64_t b = 0; b < 10; ++b) seen.insert(derive_seed(0, {a, b}));
  CHECK(seen.size() == 100);
  CHECK(derive_seed(1, {2, 3}) == derive_seed(1, {2, 3}));
  CHECK(derive_seed(1, {2, 3}) != derive_seed(1, {3, 2}));
  CHECK(derive_seed(1, {}) != derive_seed(2, {}));
}

TEST_CASE("moments of the distributions") {
  Rng rng(1);
  constexpr int n = 200000;
  double s = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    s += z;
    s2 += z * z;
  }
  CHECK(std::abs(s / n) < 0.01);
  CHECK(std::abs(s2 / n - 1.0) < 0.02);

  for (double shape : {0.05, 0.3, 1.0, 2.5, 9.0}) {
    double g = 0, g2 = 0;
    for (int i = 0; i < n; ++i) {
      const double x = rng.gamma(shape);
      CHECK_FALSE(x < 0.0);
      g += x;
      g2 += x * x;
    }
    const double mean = g / n;
    const double var = g2 / n - mean * mean;
    CHECK(mean == doctest::Approx(shape).epsilon(0.03));
    CHECK(var == doctest::Approx(shape).epsilon(0.08));
  }
  CHECK_THROWS_AS(rng.gamma(0.0), InvalidArgument);
}

TEST_CASE("dirichlet draws live on the simplex") {
  Rng rng(3);
  const std::vector<double> alpha{0.01, 0.5, 1.0, 3.0};
  std::vector<double> mean(4, 0.0);
  constexpr int n = 50000;
  for (int i = 0; i < n; ++i) {
    const auto d = rng.dirichlet(alpha);
    CHECK(std::accumulate(d.begin(), d.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    for (int k = 0; k < 4; ++k) mean[k] += d[k] / n;
  }
  const double total = std::accumulate(alpha.begin(), alpha.end(), 0.0);
  for (int k = 0; k < 4; ++k) CHECK(std::abs(mean[k] - alpha[k] / total) < 3e-3);
}

TEST_CASE("sphere directions are unit vectors") {
  Rng rng(9);
  for (int i = 0; i < 100; ++i) {
    const auto c = rng.sphere(7);
    double s = 0;
    for (double v : c) s += v * v;
    CHECK(s == doctest::Approx(1.0));
  }
}
