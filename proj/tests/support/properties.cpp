#include "properties.hpp"

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "sepnmf/linalg.hpp"
#include "sepnmf/random.hpp"

namespace props {

namespace {

using sepnmf::DenseMatrix;
using sepnmf::Rng;
using sepnmf::Vector;

DenseMatrix gaussian(Rng& rng, std::size_t m, std::size_t n) {
  DenseMatrix a(m, n);
  for (double& v : a.data()) v = rng.normal();
  return a;
}

Vector gaussian_vec(Rng& rng, std::size_t n) {
  Vector v(n);
  for (double& x : v) x = rng.normal();
  return v;
}

std::size_t between(Rng& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.uniform() * static_cast<double>(hi - lo + 1));
}

// Uniform point in the radius-K ball of R^dim.
Vector in_ball(Rng& rng, std::size_t dim, double K) {
  Vector x = rng.sphere(dim);
  const double rad = K * std::pow(rng.uniform(), 1.0 / static_cast<double>(dim));
  for (double& v : x) v *= rad;
  return x;
}

void record(Outcome& o, double violation) {
  ++o.cases;
  if (violation > 0.0) {
    ++o.failures;
    o.worst = std::max(o.worst, violation);
  }
}

}  // namespace

Outcome projection_monotonicity(std::size_t cases, std::uint64_t seed) {
  Rng rng(seed);
  Outcome o;
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t m = between(rng, 2, 12), n = between(rng, 1, 10);
    const DenseMatrix r = gaussian(rng, m, n);
    const Vector u = gaussian_vec(rng, m);
    const DenseMatrix p = sepnmf::project_out(r, u);
    double v = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      v = std::max(v, sepnmf::norm2(p.col(j)) - sepnmf::norm2(r.col(j)) - 1e-12);
      v = std::max(v, std::abs(sepnmf::dot(u, p.col(j))) -
                          1e-10 * sepnmf::norm2(u) * std::max(1.0, sepnmf::norm2(r.col(j))));
    }
    record(o, v);
  }
  return o;
}

Outcome norm_update_identity(std::size_t cases, std::uint64_t seed) {
  Rng rng(seed);
  Outcome o;
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t m = between(rng, 2, 20);
    const Vector u = gaussian_vec(rng, m), v = gaussian_vec(rng, m);
    const double got =
        sepnmf::norm_sq_after_projection(sepnmf::dot(v, v), sepnmf::dot(u, v), sepnmf::dot(u, u));
    const Vector pv = sepnmf::matvec(oracle::projector(u), v);
    const double want = sepnmf::dot(pv, pv);
    record(o, std::abs(got - want) - 1e-9 * std::max(want, 1e-300) - 1e-12 * sepnmf::dot(v, v));
  }
  return o;
}

Outcome cauchy_interlacing(std::size_t cases, std::uint64_t seed) {
  Rng rng(seed);
  Outcome o;
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t r = between(rng, 2, 6);
    const std::size_t m = between(rng, r, 10);
    const std::size_t k = between(rng, 1, r - 1);
    const DenseMatrix w = gaussian(rng, m, r);
    DenseMatrix pw = w;
    for (std::size_t i = 0; i < k; ++i) sepnmf::project_out_inplace(pw, gaussian_vec(rng, m));
    const Vector sw = sepnmf::singular_values(w);
    const Vector sp = sepnmf::singular_values(pw);
    const double tol = 1e-8 * std::max(1.0, sw.front());
    double v = sp.front() - sw.front() - tol;
    v = std::max(v, sw[r - 1] - sp[r - 1 - k] - tol);
    record(o, v);
  }
  return o;
}

Outcome weyl_perturbation(std::size_t cases, std::uint64_t seed) {
  Rng rng(seed);
  Outcome o;
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t m = between(rng, 2, 10), n = between(rng, 2, 10);
    const DenseMatrix a = gaussian(rng, m, n);
    const double scale = std::pow(10.0, -3.0 * rng.uniform());
    const DenseMatrix noise = scale * gaussian(rng, m, n);
    const Vector sa = sepnmf::singular_values(a);
    const Vector sb = sepnmf::singular_values(a + noise);
    const double s1n = sepnmf::singular_values(noise).front();
    double v = 0.0;
    for (std::size_t i = 0; i < sa.size(); ++i) {
      v = std::max(v, std::abs(sa[i] - sb[i]) - s1n - 1e-8 * std::max(1.0, sa.front()));
    }
    record(o, v);
  }
  return o;
}

Outcome w_geometry_chain(std::size_t cases, std::uint64_t seed) {
  Rng rng(seed);
  Outcome o;
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t r = between(rng, 2, 8);
    const std::size_t m = between(rng, r, 15);
    DenseMatrix w = gaussian(rng, m, r);
    if (rng.uniform() < 0.5) {
      for (double& x : w.data()) x = std::abs(x);
    }
    const sepnmf::WGeometry g = sepnmf::w_geometry(w);
    const double tol = 1e-10 * std::max(1.0, g.sigma_max);
    double v = g.sigma_min - g.omega - tol;
    v = std::max(v, g.k_max - g.sigma_max - tol);
    v = std::max(v, g.nu - g.k_max - tol);
    v = std::max(v, g.omega - g.nu - tol);
    record(o, v);
  }
  return o;
}

Outcome simplex_idempotent(std::size_t cases, std::uint64_t seed) {
  Rng rng(seed);
  Outcome o;
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t n = between(rng, 1, 12);
    Vector x(n);
    for (double& v : x) v = 4.0 * rng.uniform() - 2.0;
    const Vector p = sepnmf::simplex_project(x);
    const Vector pp = sepnmf::simplex_project(p);
    double v = 0.0, sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      v = std::max(v, std::abs(p[i] - pp[i]) - 1e-14);
      v = std::max(v, -p[i]);
      sum += p[i];
    }
    v = std::max(v, sum - 1.0 - 1e-12);
    record(o, v);
  }
  return o;
}

Outcome simplex_nonexpansive(std::size_t cases, std::uint64_t seed) {
  Rng rng(seed);
  Outcome o;
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t n = between(rng, 1, 12);
    Vector x(n), y(n);
    for (double& v : x) v = 4.0 * rng.uniform() - 2.0;
    for (double& v : y) v = 4.0 * rng.uniform() - 2.0;
    const Vector px = sepnmf::simplex_project(x), py = sepnmf::simplex_project(y);
    double dp = 0.0, dx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      dp += (px[i] - py[i]) * (px[i] - py[i]);
      dx += (x[i] - y[i]) * (x[i] - y[i]);
    }
    record(o, std::sqrt(dp) - std::sqrt(dx) - 1e-12);
  }
  return o;
}

Outcome selector_sandwich(const sepnmf::SelectorSpec& s, double K, std::size_t dim,
                          std::size_t cases, std::uint64_t seed) {
  Rng rng(seed);
  Outcome o;
  for (std::size_t c = 0; c < cases; ++c) {
    const Vector x = in_ball(rng, dim, K);
    record(o, sepnmf::sandwich_check(s, x, K) ? 0.0 : 1.0);
  }
  return o;
}

Outcome selector_midpoint(const sepnmf::SelectorSpec& s, double K, std::size_t dim,
                          std::size_t cases, std::uint64_t seed) {
  Rng rng(seed);
  Outcome o;
  const double mu = sepnmf::constants(s, K, dim).mu;
  for (std::size_t c = 0; c < cases; ++c) {
    const Vector x = in_ball(rng, dim, K), y = in_ball(rng, dim, K);
    Vector mid(dim);
    double d2 = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      mid[i] = 0.5 * (x[i] + y[i]);
      d2 += (x[i] - y[i]) * (x[i] - y[i]);
    }
    const double lhs = sepnmf::evaluate(s, mid);
    const double rhs = 0.5 * (sepnmf::evaluate(s, x) + sepnmf::evaluate(s, y)) - mu / 8.0 * d2;
    record(o, lhs - rhs - 1e-12 * (1.0 + d2));
  }
  return o;
}

Outcome selector_lipschitz(const sepnmf::SelectorSpec& s, double K, std::size_t dim,
                           std::size_t cases, std::uint64_t seed) {
  Rng rng(seed);
  Outcome o;
  const double L = sepnmf::constants(s, K, dim).L;
  constexpr double h = 1e-6;
  auto fd_grad = [&](Vector x) {
    Vector g(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      const double keep = x[i];
      x[i] = keep + h;
      const double fp = sepnmf::evaluate(s, x);
      x[i] = keep - h;
      const double fm = sepnmf::evaluate(s, x);
      x[i] = keep;
      g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
  };
  for (std::size_t c = 0; c < cases; ++c) {
    const Vector x = in_ball(rng, dim, K), y = in_ball(rng, dim, K);
    const Vector gx = fd_grad(x), gy = fd_grad(y);
    double dg = 0.0, dx = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      dg += (gx[i] - gy[i]) * (gx[i] - gy[i]);
      dx += (x[i] - y[i]) * (x[i] - y[i]);
    }
    record(o, std::sqrt(dg) - L * std::sqrt(dx) - 1e-4);
  }
  return o;
}

}  // namespace props
