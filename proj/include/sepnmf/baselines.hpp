#pragma once

#include <cstddef>
#include <cstdint>

#include "sepnmf/dense_matrix.hpp"
#include "sepnmf/extraction_result.hpp"

namespace sepnmf {

struct BaselineOptions {
  std::size_t r = 1;
  std::uint64_t seed = 0;
  /// Number of random directions drawn by PPI.
  std::size_t ppi_K = 1000;
  /// Denoise with principal components before the VCA steps.
  bool vca_use_pca = true;
};

/// Pixel purity index. Each of ppi_K directions uniform on the sphere adds one
/// vote to the argmax and one to the argmin column of c^T M (first index on
/// ties, a single vote when both coincide). Returns the r most voted columns,
/// smallest index first among equal votes. step_scores holds the votes.
ExtractionResult ppi(const DenseMatrix& m, const BaselineOptions& opts);

/// Vertex component analysis. With vca_use_pca the data is replaced by its
/// projection onto the mean plus the leading max(r - 1, 1) principal
/// directions of the centered columns. Then r times: draw a Gaussian c, pick
/// the column maximizing |c^T R_j| and project the residual R onto the
/// orthogonal complement of that column. Throws RankDeficiency when the
/// residual vanishes early.
ExtractionResult vca(const DenseMatrix& m, const BaselineOptions& opts);

/// Simplex volume maximization, greedy distance variant. Starts from the
/// column farthest from the column farthest from column 0, then adds the
/// column maximizing
///   sum_{i<k in S} d_i d_k + a sum_i d_i - (|S| / 2) sum_i d_i^2
/// with d_i = log(||m_j - m_i|| + 1e-8) over the selected set S and a the log
/// of the starting pair's distance. Deterministic; the seed is unused.
ExtractionResult sivm(const DenseMatrix& m, const BaselineOptions& opts);

}  // namespace sepnmf
