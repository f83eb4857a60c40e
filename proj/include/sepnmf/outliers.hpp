#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sepnmf/dense_matrix.hpp"
#include "sepnmf/extraction_result.hpp"
#include "sepnmf/selectors.hpp"

namespace sepnmf {

struct OutlierOptions {
  std::size_t r = 2;
  std::size_t t = 0;
  SelectorSpec selector;
  /// Defaults to 1e-8 * ||M||_F.
  std::optional<double> qp_tol;
  std::size_t qp_max_iters = 5000;
};

struct AbundanceSolution {
  DenseMatrix G;
  double objective = 0.0;
  /// Largest iteration count over the columns.
  std::size_t iterations = 0;
  /// False when some column hit max_iters; G then holds the best iterate.
  bool converged = true;
};

/// min_G ||M - A G||_F^2 subject to every column of G lying in
/// { x >= 0, sum(x) <= 1 }. Columns are solved independently with accelerated
/// projected gradient (step 1 / sigma_max(A)^2, momentum reset whenever the
/// objective would increase). A column stops when
/// ||g - P(g - grad / L)|| <= tol.
AbundanceSolution simplex_least_squares(const DenseMatrix& a, const DenseMatrix& m, double tol,
                                        std::size_t max_iters);

struct OutlierResult {
  /// The r kept columns, ordered by decreasing score.
  ExtractionResult kept;
  /// (column index, row l1 score of G) for all candidates, descending.
  std::vector<std::pair<std::size_t, double>> scores;
  /// Indices returned by the over-extraction step, in extraction order.
  std::vector<std::size_t> candidates;
  AbundanceSolution solution;
};

/// Extract r + t candidates, fit every column of M as a simplex combination
/// of them and keep the r candidates with the largest row l1 norm in G.
///
/// Requires r >= 2, r + t <= min(rows, cols) and t <= rows - r. If the
/// over-extraction stops early the method continues with the candidates it
/// has, and throws RankDeficiency only when fewer than r were found.
OutlierResult extract_with_outliers(const DenseMatrix& m, const OutlierOptions& opts);

/// Row l1 norms of G paired with the matching entries of J, sorted by
/// decreasing score; equal scores keep the order of J.
std::vector<std::pair<std::size_t, double>> outlier_score_report(
    const DenseMatrix& g, std::span<const std::size_t> j);

}  // namespace sepnmf
