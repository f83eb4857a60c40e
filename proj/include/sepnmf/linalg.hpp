#pragma once

#include <cstddef>
#include <span>

#include "sepnmf/dense_matrix.hpp"

namespace sepnmf {

class Rng;

/// Squared l2 norm of every column.
Vector column_norms_sq(const DenseMatrix& m);

/// Returns (I - u u^T / ||u||^2) R. Throws ZeroDirection when u == 0.
DenseMatrix project_out(const DenseMatrix& r, std::span<const double> u);
/// In-place variant of project_out.
void project_out_inplace(DenseMatrix& r, std::span<const double> u);

/// ||(I - u u^T/||u||^2) v||^2 from ||v||^2, u^T v and ||u||^2, clamped at 0.
/// The subtraction cancels badly when u and v are nearly parallel; the clamp
/// keeps the result a valid squared norm.
double norm_sq_after_projection(double norm_sq_v, double dot_uv, double norm_sq_u);

/// Compact SVD M = U diag(S) V^T with k = min(rows, cols) components,
/// singular values non-increasing.
struct SvdResult {
  DenseMatrix u;  // rows x k
  Vector s;       // k
  DenseMatrix v;  // cols x k
};

struct SvdOptions {
  int max_sweeps = 60;
  double tolerance = 1e-12;
};

/// One-sided (Hestenes) Jacobi SVD with cyclic sweeps.
/// Throws ConvergenceFailure when the sweep limit is hit.
SvdResult svd(const DenseMatrix& m, const SvdOptions& opts = {});

/// Singular values only, non-increasing.
Vector singular_values(const DenseMatrix& m);

/// Leading `rank` singular triplets by randomized subspace iteration
/// (oversampled range finder, `power_iters` passes), finished with the
/// Jacobi SVD on the projected problem. Deterministic given the Rng state.
SvdResult truncated_svd(const DenseMatrix& m, std::size_t rank, Rng& rng,
                        std::size_t oversample = 10, int power_iters = 4);

/// Orthonormalizes the columns of `m` in place (modified Gram-Schmidt with one
/// re-orthogonalization pass). Columns that collapse below `drop_tol` relative
/// to their original norm are removed. Returns the orthonormal basis.
DenseMatrix orthonormal_basis(const DenseMatrix& m, double drop_tol = 1e-10);

/// Euclidean projection onto { x >= 0, sum(x) <= 1 }.
Vector simplex_project(std::span<const double> x);

/// Column geometry of W used by the robustness bounds.
struct WGeometry {
  double k_max = 0.0;      // max column norm
  double nu = 0.0;         // min column norm
  double gamma = 0.0;      // min pairwise column distance (inf when r = 1)
  double omega = 0.0;      // min(nu, gamma / sqrt(2))
  double sigma_min = 0.0;  // sigma_r
  double sigma_max = 0.0;  // sigma_1
  double kappa = 0.0;      // sigma_max / sigma_min
};

WGeometry w_geometry(const DenseMatrix& w);

}  // namespace sepnmf
