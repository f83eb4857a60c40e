#include "sepnmf/outliers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sepnmf/error.hpp"
#include "sepnmf/linalg.hpp"
#include "sepnmf/spa.hpp"

namespace sepnmf {

namespace {

struct Quadratic {
  const DenseMatrix& q;  // A^T A
  std::span<const double> b;  // A^T m

  // 0.5 x^T Q x - b^T x, and Q x - b written into grad.
  double value_and_grad(const Vector& x, Vector& grad) const {
    const std::size_t k = x.size();
    double val = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      double qx = 0.0;
      for (std::size_t j = 0; j < k; ++j) qx += q(i, j) * x[j];
      grad[i] = qx - b[i];
      val += x[i] * (0.5 * qx - b[i]);
    }
    return val;
  }
};

Vector gradient_step(const Vector& x, const Vector& grad, double lip) {
  Vector z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] - grad[i] / lip;
  return simplex_project(z);
}

double distance(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

struct ColumnSolve {
  Vector x;
  std::size_t iterations;
  bool converged;
};

ColumnSolve solve_column(const Quadratic& f, double lip, double tol, std::size_t max_iters) {
  const std::size_t k = f.b.size();
  Vector x(k, 1.0 / static_cast<double>(k));
  Vector grad(k);
  double fx = f.value_and_grad(x, grad);
  if (distance(x, gradient_step(x, grad, lip)) <= tol) return {x, 0, true};

  Vector y = x;
  Vector grad_y(k);
  Vector grad_new(k);
  double t = 1.0;
  for (std::size_t it = 1; it <= max_iters; ++it) {
    f.value_and_grad(y, grad_y);
    Vector x_new = gradient_step(y, grad_y, lip);
    double f_new = f.value_and_grad(x_new, grad_new);
    if (f_new > fx) {
      // Momentum made things worse: restart from x with a plain step.
      t = 1.0;
      x_new = gradient_step(x, grad, lip);
      f_new = f.value_and_grad(x_new, grad_new);
    }
    const double t_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double beta = (t - 1.0) / t_new;
    for (std::size_t i = 0; i < k; ++i) y[i] = x_new[i] + beta * (x_new[i] - x[i]);
    t = t_new;
    x = std::move(x_new);
    grad = grad_new;
    fx = f_new;
    if (distance(x, gradient_step(x, grad, lip)) <= tol) return {x, it, true};
  }
  return {x, max_iters, false};
}

}  // namespace

AbundanceSolution simplex_least_squares(const DenseMatrix& a, const DenseMatrix& m, double tol,
                                        std::size_t max_iters) {
  if (a.rows() != m.rows()) throw InvalidArgument("simplex_least_squares: row count mismatch");
  if (!(tol > 0.0)) throw InvalidArgument("simplex_least_squares: tol must be > 0");
  const DenseMatrix q = matmul_tn(a, a);
  const DenseMatrix b = matmul_tn(a, m);
  const double smax = singular_values(a).front();
  const double lip = smax > 0.0 ? smax * smax : 1.0;

  AbundanceSolution sol{DenseMatrix(a.cols(), m.cols()), 0.0, 0, true};
  for (std::size_t j = 0; j < m.cols(); ++j) {
    const ColumnSolve cs = solve_column(Quadratic{q, b.col(j)}, lip, tol, max_iters);
    std::copy(cs.x.begin(), cs.x.end(), sol.G.col(j).begin());
    sol.iterations = std::max(sol.iterations, cs.iterations);
    sol.converged = sol.converged && cs.converged;
  }
  const DenseMatrix resid = m - matmul(a, sol.G);
  const double fro = frobenius_norm(resid);
  sol.objective = fro * fro;
  return sol;
}

std::vector<std::pair<std::size_t, double>> outlier_score_report(
    const DenseMatrix& g, std::span<const std::size_t> j) {
  if (g.rows() != j.size()) throw InvalidArgument("outlier_score_report: |J| != rows of G");
  std::vector<std::pair<std::size_t, double>> out(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    double s = 0.0;
    for (std::size_t c = 0; c < g.cols(); ++c) s += std::abs(g(i, c));
    out[i] = {j[i], s};
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& x, const auto& y) { return x.second > y.second; });
  return out;
}

OutlierResult extract_with_outliers(const DenseMatrix& m, const OutlierOptions& opts) {
  const std::size_t r = opts.r;
  const std::size_t t = opts.t;
  if (r < 2) throw InvalidOptions("outliers: r must be >= 2");
  if (r + t > std::min(m.rows(), m.cols())) {
    throw InvalidOptions("outliers: r + t = " + std::to_string(r + t) + " exceeds min(" +
                         std::to_string(m.rows()) + ", " + std::to_string(m.cols()) + ")");
  }
  if (t > m.rows() - r) throw InvalidOptions("outliers: t must be <= rows - r");
  if (opts.qp_tol && !(*opts.qp_tol > 0.0)) throw InvalidOptions("outliers: qp_tol must be > 0");

  ExtractionOptions eo;
  eo.target_r = r + t;
  eo.selector = opts.selector;
  ExtractionResult step1;
  try {
    step1 = extract(m, eo);
  } catch (const RankDeficiency& e) {
    if (e.extracted() < r) throw;
    step1 = e.partial();
  }

  OutlierResult out{{}, {}, step1.indices, AbundanceSolution{DenseMatrix(1, 1), 0.0, 0, true}};
  const DenseMatrix a = m.select_columns(step1.indices);
  double tol = opts.qp_tol.value_or(1e-8 * frobenius_norm(m));
  if (!(tol > 0.0)) tol = 1e-12;
  out.solution = simplex_least_squares(a, m, tol, opts.qp_max_iters);
  out.scores = outlier_score_report(out.solution.G, step1.indices);
  for (std::size_t i = 0; i < r; ++i) {
    out.kept.indices.push_back(out.scores[i].first);
    out.kept.step_scores.push_back(out.scores[i].second);
    const double next = out.scores[i + 1 < out.scores.size() ? i + 1 : i].second;
    const double top = out.scores[i].second;
    out.kept.step_margins.push_back(top > 0.0 ? (top - next) / top : 0.0);
  }
  return out;
}

}  // namespace sepnmf
