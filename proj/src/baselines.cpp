#include "sepnmf/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "sepnmf/error.hpp"
#include "sepnmf/linalg.hpp"
#include "sepnmf/random.hpp"

namespace sepnmf {

namespace {

enum StreamTag : std::uint64_t { kPpiStream = 1, kVcaPcaStream = 2, kVcaDirStream = 3 };

void check_r(const DenseMatrix& m, std::size_t r, std::size_t cap, const char* who) {
  if (r == 0 || r > cap) {
    throw InvalidArgument(std::string(who) + ": r = " + std::to_string(r) +
                          " out of range for a " + std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()) + " matrix");
  }
}

// Index of the largest entry among untaken columns; first index on ties.
std::size_t argmax_free(const Vector& v, const std::vector<bool>& taken) {
  std::size_t best = v.size();
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (taken[j]) continue;
    if (best == v.size() || v[j] > v[best]) best = j;
  }
  return best;
}

Vector distances_from(const DenseMatrix& m, std::size_t j) {
  Vector d(m.cols());
  const auto ref = m.col(j);
  for (std::size_t k = 0; k < m.cols(); ++k) {
    const auto c = m.col(k);
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      const double x = c[i] - ref[i];
      s += x * x;
    }
    d[k] = std::sqrt(s);
  }
  return d;
}

}  // namespace

ExtractionResult ppi(const DenseMatrix& m, const BaselineOptions& opts) {
  check_r(m, opts.r, m.cols(), "ppi");
  if (opts.ppi_K == 0) throw InvalidArgument("ppi: ppi_K must be >= 1");
  Rng rng(derive_seed(opts.seed, {kPpiStream}));
  const std::size_t n = m.cols();
  std::vector<std::size_t> votes(n, 0);
  for (std::size_t k = 0; k < opts.ppi_K; ++k) {
    const Vector c = rng.sphere(m.rows());
    std::size_t hi = 0;
    std::size_t lo = 0;
    double vhi = -std::numeric_limits<double>::infinity();
    double vlo = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      const double v = dot(c, m.col(j));
      if (v > vhi) {
        vhi = v;
        hi = j;
      }
      if (v < vlo) {
        vlo = v;
        lo = j;
      }
    }
    ++votes[hi];
    if (lo != hi) ++votes[lo];
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return votes[a] > votes[b]; });
  ExtractionResult out;
  for (std::size_t i = 0; i < opts.r; ++i) {
    out.indices.push_back(order[i]);
    out.step_scores.push_back(static_cast<double>(votes[order[i]]));
    const double next = i + 1 < n ? static_cast<double>(votes[order[i + 1]]) : 0.0;
    const double top = static_cast<double>(votes[order[i]]);
    out.step_margins.push_back(top > 0.0 ? (top - next) / top : 0.0);
  }
  return out;
}

ExtractionResult vca(const DenseMatrix& m, const BaselineOptions& opts) {
  check_r(m, opts.r, std::min(m.rows(), m.cols()), "vca");
  const std::size_t rows = m.rows();
  const std::size_t n = m.cols();

  DenseMatrix r = m;
  if (opts.vca_use_pca) {
    Vector mean(rows, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const auto c = m.col(j);
      for (std::size_t i = 0; i < rows; ++i) mean[i] += c[i];
    }
    for (double& v : mean) v /= static_cast<double>(n);
    DenseMatrix centered = m;
    for (std::size_t j = 0; j < n; ++j) {
      auto c = centered.col(j);
      for (std::size_t i = 0; i < rows; ++i) c[i] -= mean[i];
    }
    const std::size_t dims = std::min({std::max<std::size_t>(opts.r - 1, 1), rows, n});
    if (frobenius_norm(centered) > 0.0) {
      Rng pca_rng(derive_seed(opts.seed, {kVcaPcaStream}));
      const SvdResult pcs = truncated_svd(centered, dims, pca_rng);
      const DenseMatrix coords = matmul_tn(pcs.u, centered);
      const DenseMatrix denoised = matmul(pcs.u, coords);
      for (std::size_t j = 0; j < n; ++j) {
        auto dst = r.col(j);
        const auto src = denoised.col(j);
        for (std::size_t i = 0; i < rows; ++i) dst[i] = mean[i] + src[i];
      }
    } else {
      for (std::size_t j = 0; j < n; ++j) std::copy(mean.begin(), mean.end(), r.col(j).begin());
    }
  }

  const double initial = max_column_norm(r);
  Rng rng(derive_seed(opts.seed, {kVcaDirStream}));
  std::vector<bool> taken(n, false);
  Vector proj(n);
  ExtractionResult out;
  for (std::size_t step = 0; step < opts.r; ++step) {
    Vector c(rows);
    for (double& v : c) v = rng.normal();
    for (std::size_t j = 0; j < n; ++j) proj[j] = taken[j] ? 0.0 : std::abs(dot(c, r.col(j)));
    const std::size_t best = argmax_free(proj, taken);
    const double best_norm = norm2(r.col(best));
    if (!(proj[best] > 0.0) || best_norm <= 1e-12 * initial) {
      throw RankDeficiency("vca: residual vanished after " + std::to_string(step) + " of " +
                               std::to_string(opts.r) + " columns",
                           out);
    }
    double second = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (!taken[j] && j != best) second = std::max(second, proj[j]);
    }
    const auto u = r.col(best);
    const Vector dir(u.begin(), u.end());
    project_out_inplace(r, dir);
    taken[best] = true;
    double remaining = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (!taken[j]) remaining = std::max(remaining, norm2(r.col(j)));
    }
    out.indices.push_back(best);
    out.step_scores.push_back(proj[best]);
    out.step_margins.push_back((proj[best] - second) / proj[best]);
    out.residual_norms.push_back(remaining);
  }
  return out;
}

ExtractionResult sivm(const DenseMatrix& m, const BaselineOptions& opts) {
  check_r(m, opts.r, m.cols(), "sivm");
  constexpr double kEta = 1e-8;
  const std::size_t n = m.cols();
  std::vector<bool> taken(n, false);

  const Vector d0 = distances_from(m, 0);
  const std::size_t far1 = argmax_free(d0, taken);
  const Vector d1 = distances_from(m, far1);
  const std::size_t start = argmax_free(d1, taken);
  const double a = std::log(d1[start] + kEta);

  ExtractionResult out;
  out.indices.push_back(start);
  out.step_scores.push_back(d1[start]);
  out.step_margins.push_back(0.0);
  taken[start] = true;

  Vector dsum(n, 0.0);
  Vector dsq(n, 0.0);
  Vector dcross(n, 0.0);
  Vector score(n, 0.0);
  for (std::size_t l = 1; l < opts.r; ++l) {
    const Vector dist = distances_from(m, out.indices.back());
    for (std::size_t j = 0; j < n; ++j) {
      const double d = std::log(dist[j] + kEta);
      dcross[j] += d * dsum[j];
      dsum[j] += d;
      dsq[j] += d * d;
      score[j] = dcross[j] + a * dsum[j] - 0.5 * static_cast<double>(l) * dsq[j];
    }
    const std::size_t best = argmax_free(score, taken);
    double second = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (!taken[j] && j != best) second = std::max(second, score[j]);
    }
    taken[best] = true;
    out.indices.push_back(best);
    out.step_scores.push_back(score[best]);
    const double gap = std::isfinite(second) ? score[best] - second : 0.0;
    out.step_margins.push_back(score[best] != 0.0 ? gap / std::abs(score[best]) : gap);
  }
  return out;
}

}  // namespace sepnmf
