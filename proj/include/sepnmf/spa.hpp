#pragma once

#include <cstddef>
#include <optional>
#include <utility>

#include "sepnmf/dense_matrix.hpp"
#include "sepnmf/extraction_result.hpp"
#include "sepnmf/selectors.hpp"

namespace sepnmf {

enum class Variant { Naive, FastUpdate };

struct ExtractionOptions {
  std::optional<std::size_t> target_r;
  /// Stop once every remaining residual column has norm <= residual_tol.
  /// Defaults to 1e-12 times the largest column norm of the input.
  std::optional<double> residual_tol;
  SelectorSpec selector;
  Variant variant = Variant::Naive;
  bool l1_normalize = false;
};

/// Greedy recursive extraction: pick the residual column maximizing the
/// selector, project every column onto the orthogonal complement of it,
/// repeat.
///
/// Ties (relative difference below 1e-12) are broken by the selector value of
/// the column in the input matrix (after normalization, when enabled), then
/// by the smallest index.
///
/// Throws InvalidOptions when neither target_r nor residual_tol is set, or
/// when FastUpdate is combined with a selector other than SquaredL2; throws
/// RankDeficiency (carrying the partial result) when the residual vanishes
/// before target_r columns are found.
ExtractionResult extract(const DenseMatrix& m, const ExtractionOptions& opts);

/// Squared-l2 extraction that never forms the residual. Column norms are
/// downdated with norm_sq_after_projection against an orthonormal basis of
/// the extracted directions. Costs about 2mnr flops.
ExtractionResult extract_fast(const DenseMatrix& m, std::size_t r);

/// Divides every nonzero column by its l1 norm. Zero columns are kept with
/// scale 1.
std::pair<DenseMatrix, Vector> l1_normalize_columns(const DenseMatrix& m);

/// How the first term of the robustness bound scales with r.
///   Theorem         1 / (2 sqrt(r - 1))
///   PublishedTable  1 / (2 (r - 1)), used for the predicted-delta column
///                   of bench
enum class BoundConvention { Theorem, PublishedTable };

struct TheoremBound {
  double eps_max = 0.0;
  double err_factor = 0.0;
};

/// Largest per-column noise eps for which extraction provably returns columns
/// within eps * err_factor of distinct columns of W:
///   err_factor = 1 + 80 K^2 L / (sigma_r^2 mu)
///   eps_max    = sigma_r * min(1 / (2 sqrt(r - 1)), sqrt(mu / L) / 4) / err_factor
/// with K the largest column norm of W and (mu, L) taken on the K-ball.
/// Throws RankDeficiency when sigma_r(W) is zero.
TheoremBound theorem_bound(const DenseMatrix& w, const SelectorSpec& selector,
                           BoundConvention convention = BoundConvention::Theorem);

}  // namespace sepnmf
