#include "sepnmf/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

#include "sepnmf/error.hpp"
#include "sepnmf/random.hpp"

namespace sepnmf {

Vector column_norms_sq(const DenseMatrix& m) {
  Vector out(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) {
    const auto c = m.col(j);
    out[j] = dot(c, c);
  }
  return out;
}

DenseMatrix project_out(const DenseMatrix& r, std::span<const double> u) {
  DenseMatrix out = r;
  project_out_inplace(out, u);
  return out;
}

void project_out_inplace(DenseMatrix& r, std::span<const double> u) {
  if (u.size() != r.rows()) throw InvalidArgument("project_out: direction length mismatch");
  const double uu = dot(u, u);
  if (!(uu > 0.0)) throw ZeroDirection("project_out: zero direction");
  for (std::size_t j = 0; j < r.cols(); ++j) {
    auto c = r.col(j);
    const double coef = dot(u, c) / uu;
    if (coef == 0.0) continue;
    for (std::size_t i = 0; i < c.size(); ++i) c[i] -= coef * u[i];
  }
}

double norm_sq_after_projection(double norm_sq_v, double dot_uv, double norm_sq_u) {
  if (!(norm_sq_u > 0.0)) throw ZeroDirection("norm_sq_after_projection: zero direction");
  return std::max(0.0, norm_sq_v - dot_uv * dot_uv / norm_sq_u);
}

namespace {

// One-sided Jacobi on a tall matrix (rows >= cols).
SvdResult jacobi_tall(const DenseMatrix& a, const SvdOptions& opts) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  DenseMatrix u = a;
  DenseMatrix v = DenseMatrix::identity(n);

  bool converged = n == 1;
  for (int sweep = 0; sweep < opts.max_sweeps && !converged; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        auto up = u.col(p);
        auto uq = u.col(q);
        const double alpha = dot(up, up);
        const double beta = dot(uq, uq);
        const double gamma = dot(up, uq);
        if (alpha == 0.0 || beta == 0.0) continue;
        if (std::abs(gamma) <= opts.tolerance * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const double x = up[i];
          const double y = uq[i];
          up[i] = c * x - s * y;
          uq[i] = s * x + c * y;
        }
        auto vp = v.col(p);
        auto vq = v.col(q);
        for (std::size_t i = 0; i < n; ++i) {
          const double x = vp[i];
          const double y = vq[i];
          vp[i] = c * x - s * y;
          vq[i] = s * x + c * y;
        }
      }
    }
    converged = !rotated;
  }
  if (!converged) {
    throw ConvergenceFailure("svd: no convergence after " + std::to_string(opts.max_sweeps) +
                             " sweeps");
  }

  Vector s(n);
  for (std::size_t j = 0; j < n; ++j) s[j] = norm2(u.col(j));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return s[x] > s[y]; });

  const double smax = s[order[0]];
  const double zero_tol = std::max(smax, 1.0) * 1e-300;
  SvdResult out{DenseMatrix(m, n), Vector(n), DenseMatrix(n, n)};
  std::vector<bool> filled(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    out.s[k] = s[j];
    std::copy(v.col(j).begin(), v.col(j).end(), out.v.col(k).begin());
    if (s[j] > zero_tol && s[j] > smax * 1e-15) {
      auto dst = out.u.col(k);
      const auto src = u.col(j);
      for (std::size_t i = 0; i < m; ++i) dst[i] = src[i] / s[j];
      filled[k] = true;
    }
  }
  // Complete U for (numerically) zero singular values with unit vectors
  // orthogonalized against the columns already present.
  std::size_t next_axis = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (filled[k]) continue;
    for (; next_axis < m; ++next_axis) {
      Vector cand(m, 0.0);
      cand[next_axis] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t j = 0; j < n; ++j) {
          if (!filled[j]) continue;
          const double d = dot(out.u.col(j), cand);
          for (std::size_t i = 0; i < m; ++i) cand[i] -= d * out.u(i, j);
        }
      }
      const double nrm = norm2(cand);
      if (nrm > 0.5) {
        for (std::size_t i = 0; i < m; ++i) out.u(i, k) = cand[i] / nrm;
        filled[k] = true;
        ++next_axis;
        break;
      }
    }
  }
  return out;
}

}  // namespace

SvdResult svd(const DenseMatrix& m, const SvdOptions& opts) {
  if (m.rows() >= m.cols()) return jacobi_tall(m, opts);
  SvdResult t = jacobi_tall(m.transpose(), opts);
  return SvdResult{std::move(t.v), std::move(t.s), std::move(t.u)};
}

Vector singular_values(const DenseMatrix& m) { return svd(m).s; }

DenseMatrix orthonormal_basis(const DenseMatrix& m, double drop_tol) {
  const std::size_t rows = m.rows();
  std::vector<Vector> kept;
  kept.reserve(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) {
    const auto src = m.col(j);
    Vector v(src.begin(), src.end());
    const double original = norm2(v);
    if (!(original > 0.0)) continue;
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vector& q : kept) {
        const double d = dot(q, v);
        for (std::size_t i = 0; i < rows; ++i) v[i] -= d * q[i];
      }
    }
    const double nrm = norm2(v);
    if (nrm <= drop_tol * original) continue;
    for (double& x : v) x /= nrm;
    kept.push_back(std::move(v));
    if (kept.size() == rows) break;
  }
  if (kept.empty()) throw ZeroDirection("orthonormal_basis: matrix has no nonzero direction");
  return DenseMatrix::from_columns(kept);
}

SvdResult truncated_svd(const DenseMatrix& m, std::size_t rank, Rng& rng,
                        std::size_t oversample, int power_iters) {
  const std::size_t kmax = std::min(m.rows(), m.cols());
  if (rank == 0 || rank > kmax) throw InvalidArgument("truncated_svd: rank out of range");
  const std::size_t k = std::min(kmax, rank + oversample);

  auto take = [&](SvdResult full, std::size_t count) {
    count = std::min(count, full.s.size());
    std::vector<std::size_t> idx(count);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    return SvdResult{full.u.select_columns(idx), Vector(full.s.begin(), full.s.begin() + count),
                     full.v.select_columns(idx)};
  };

  if (2 * k >= kmax) return take(svd(m), rank);

  DenseMatrix omega(m.cols(), k);
  for (double& x : omega.data()) x = rng.normal();
  DenseMatrix q = orthonormal_basis(matmul(m, omega));
  for (int it = 0; it < power_iters; ++it) {
    const DenseMatrix z = orthonormal_basis(matmul_tn(m, q));
    q = orthonormal_basis(matmul(m, z));
  }
  const DenseMatrix b = matmul_tn(q, m);  // k' x n
  SvdResult small = svd(b);
  SvdResult full{matmul(q, small.u), std::move(small.s), std::move(small.v)};
  return take(std::move(full), rank);
}

Vector simplex_project(std::span<const double> x) {
  Vector clipped(x.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    clipped[i] = std::max(0.0, x[i]);
    sum += clipped[i];
  }
  if (sum <= 1.0) return clipped;

  Vector sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    cumsum += sorted[j];
    const double t = (cumsum - 1.0) / static_cast<double>(j + 1);
    if (sorted[j] - t > 0.0) theta = t;
  }
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::max(0.0, x[i] - theta);
  return out;
}

WGeometry w_geometry(const DenseMatrix& w) {
  WGeometry g;
  const std::size_t r = w.cols();
  g.k_max = 0.0;
  g.nu = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < r; ++j) {
    const double n = norm2(w.col(j));
    g.k_max = std::max(g.k_max, n);
    g.nu = std::min(g.nu, n);
  }
  g.gamma = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < r; ++a) {
    for (std::size_t b = a + 1; b < r; ++b) {
      double sq = 0.0;
      for (std::size_t i = 0; i < w.rows(); ++i) {
        const double d = w(i, a) - w(i, b);
        sq += d * d;
      }
      g.gamma = std::min(g.gamma, std::sqrt(sq));
    }
  }
  g.omega = std::min(g.nu, g.gamma / std::sqrt(2.0));
  const Vector s = singular_values(w);
  g.sigma_max = s.front();
  g.sigma_min = w.rows() >= r ? s.back() : 0.0;
  g.kappa = g.sigma_min > 0.0 ? g.sigma_max / g.sigma_min : std::numeric_limits<double>::infinity();
  return g;
}

}  // namespace sepnmf
