#include "sepnmf/spa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sepnmf/error.hpp"
#include "sepnmf/linalg.hpp"

namespace sepnmf {

namespace {

constexpr double kTieRelTol = 1e-12;

bool ties(double a, double b) {
  return std::abs(a - b) <= kTieRelTol * std::max(std::abs(a), std::abs(b));
}

struct Pick {
  std::size_t index;
  double score;
  double margin;
};

// Argmax of `scores` over columns not yet taken, with the two-level tie-break.
Pick pick_column(const Vector& scores, const Vector& original, const std::vector<bool>& taken) {
  std::size_t best = scores.size();
  for (std::size_t j = 0; j < scores.size(); ++j) {
    if (taken[j]) continue;
    if (best == scores.size()) {
      best = j;
      continue;
    }
    if (ties(scores[j], scores[best])) {
      if (original[j] > original[best] && !ties(original[j], original[best])) best = j;
    } else if (scores[j] > scores[best]) {
      best = j;
    }
  }
  double second = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < scores.size(); ++j) {
    if (!taken[j] && j != best) second = std::max(second, scores[j]);
  }
  const double top = scores[best];
  const double margin = std::isfinite(second) && top > 0.0 ? (top - second) / top : 1.0;
  return {best, top, margin};
}

void check_options(const DenseMatrix& m, const ExtractionOptions& opts) {
  opts.selector.validate();
  if (!opts.target_r && !opts.residual_tol) {
    throw InvalidOptions("extract: set target_r or residual_tol");
  }
  if (opts.variant == Variant::FastUpdate && opts.selector.kind != SelectorKind::SquaredL2) {
    throw InvalidOptions("extract: the fast variant supports only the l2 selector");
  }
  if (opts.residual_tol && !(*opts.residual_tol >= 0.0)) {
    throw InvalidOptions("extract: residual_tol must be >= 0");
  }
  if (opts.target_r) {
    const std::size_t r = *opts.target_r;
    const std::size_t cap = std::min(m.rows(), m.cols());
    if (r == 0 || r > cap) {
      throw InvalidArgument("extract: r = " + std::to_string(r) + " must be in [1, " +
                            std::to_string(cap) + "] for a " + std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()) + " matrix");
    }
  }
}

std::size_t step_limit(const DenseMatrix& m, const ExtractionOptions& opts) {
  return opts.target_r.value_or(std::min(m.rows(), m.cols()));
}

[[noreturn]] void rank_deficient(const ExtractionResult& partial, std::size_t wanted) {
  throw RankDeficiency("extract: residual vanished after " +
                           std::to_string(partial.indices.size()) + " of " +
                           std::to_string(wanted) + " columns",
                       partial);
}

ExtractionResult naive(const DenseMatrix& m, const ExtractionOptions& opts) {
  const std::size_t n = m.cols();
  const double initial = max_column_norm(m);
  const double tol = opts.residual_tol.value_or(1e-12 * initial);
  SelectorSpec sel = opts.selector;
  if (!sel.radius_k) sel.radius_k = initial > 0.0 ? initial : 1.0;

  Vector original(n);
  for (std::size_t j = 0; j < n; ++j) original[j] = evaluate(sel, m.col(j));

  DenseMatrix r = m;
  std::vector<bool> taken(n, false);
  Vector scores(n, 0.0);
  ExtractionResult out;
  const std::size_t limit = step_limit(m, opts);
  double remaining = initial;
  while (out.indices.size() < limit) {
    if (remaining <= tol) {
      if (opts.target_r) rank_deficient(out, *opts.target_r);
      break;
    }
    for (std::size_t j = 0; j < n; ++j) scores[j] = taken[j] ? 0.0 : evaluate(sel, r.col(j));
    const Pick p = pick_column(scores, original, taken);
    const auto u = r.col(p.index);
    const Vector dir(u.begin(), u.end());
    project_out_inplace(r, dir);
    taken[p.index] = true;
    remaining = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (!taken[j]) remaining = std::max(remaining, norm2(r.col(j)));
    }
    out.indices.push_back(p.index);
    out.step_scores.push_back(p.score);
    out.step_margins.push_back(p.margin);
    out.residual_norms.push_back(remaining);
    if (out.indices.size() == n) break;
  }
  return out;
}

ExtractionResult fast(const DenseMatrix& m, const ExtractionOptions& opts) {
  const std::size_t rows = m.rows();
  const std::size_t n = m.cols();
  const double initial = max_column_norm(m);
  const double tol = opts.residual_tol.value_or(1e-12 * initial);

  const Vector original = column_norms_sq(m);
  Vector norms = original;
  std::vector<bool> taken(n, false);
  std::vector<Vector> basis;
  ExtractionResult out;
  const std::size_t limit = step_limit(m, opts);
  double remaining = initial;
  while (out.indices.size() < limit) {
    if (remaining <= tol) {
      if (opts.target_r) rank_deficient(out, *opts.target_r);
      break;
    }
    const Pick p = pick_column(norms, original, taken);

    // Residual direction of the chosen column, orthogonalized twice.
    const auto src = m.col(p.index);
    Vector q(src.begin(), src.end());
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vector& b : basis) {
        const double d = dot(b, q);
        for (std::size_t i = 0; i < rows; ++i) q[i] -= d * b[i];
      }
    }
    const double qn = norm2(q);
    if (qn <= tol) {
      if (opts.target_r) rank_deficient(out, *opts.target_r);
      break;
    }
    for (double& v : q) v /= qn;

    taken[p.index] = true;
    norms[p.index] = 0.0;
    remaining = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (taken[j]) continue;
      // q is orthogonal to the previous basis, so q^T R_j = q^T M_j.
      norms[j] = norm_sq_after_projection(norms[j], dot(q, m.col(j)), 1.0);
      remaining = std::max(remaining, norms[j]);
    }
    remaining = std::sqrt(remaining);
    basis.push_back(std::move(q));

    out.indices.push_back(p.index);
    out.step_scores.push_back(p.score);
    out.step_margins.push_back(p.margin);
    out.residual_norms.push_back(remaining);
    if (out.indices.size() == n) break;
  }
  return out;
}

}  // namespace

ExtractionResult extract(const DenseMatrix& m, const ExtractionOptions& opts) {
  check_options(m, opts);
  if (opts.l1_normalize) {
    ExtractionOptions inner = opts;
    inner.l1_normalize = false;
    return extract(l1_normalize_columns(m).first, inner);
  }
  return opts.variant == Variant::FastUpdate ? fast(m, opts) : naive(m, opts);
}

ExtractionResult extract_fast(const DenseMatrix& m, std::size_t r) {
  ExtractionOptions opts;
  opts.target_r = r;
  opts.variant = Variant::FastUpdate;
  return extract(m, opts);
}

std::pair<DenseMatrix, Vector> l1_normalize_columns(const DenseMatrix& m) {
  DenseMatrix out = m;
  Vector scales(m.cols(), 1.0);
  for (std::size_t j = 0; j < m.cols(); ++j) {
    auto c = out.col(j);
    double s = 0.0;
    for (double v : c) s += std::abs(v);
    if (s == 0.0) continue;
    scales[j] = s;
    for (double& v : c) v /= s;
  }
  return {std::move(out), std::move(scales)};
}

TheoremBound theorem_bound(const DenseMatrix& w, const SelectorSpec& selector,
                           BoundConvention convention) {
  selector.validate();
  const WGeometry g = w_geometry(w);
  if (!(g.sigma_min > 1e-15 * g.sigma_max)) {
    throw RankDeficiency("theorem_bound: W is rank deficient", ExtractionResult{});
  }
  const double K = g.k_max;
  const auto c = constants(selector, selector.radius_k.value_or(K), w.rows());
  const double r = static_cast<double>(w.cols());
  const double err = 1.0 + 80.0 * K * K * c.L / (g.sigma_min * g.sigma_min * c.mu);
  double first = std::numeric_limits<double>::infinity();
  if (w.cols() > 1) {
    first = convention == BoundConvention::Theorem ? 1.0 / (2.0 * std::sqrt(r - 1.0))
                                                   : 1.0 / (2.0 * (r - 1.0));
  }
  const double second = 0.25 * std::sqrt(c.mu / c.L);
  return {g.sigma_min * std::min(first, second) / err, err};
}

}  // namespace sepnmf
