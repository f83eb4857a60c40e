#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "sepnmf/dense_matrix.hpp"

namespace sepnmf {

/// Synthetic noisy separable matrices. Experiments pair a W generator with a
/// mixing/noise generator:
///   1  uniform W,          middle points
///   2  uniform W,          Dirichlet mixtures + Gaussian noise
///   3  ill-conditioned W,  middle points
///   4  ill-conditioned W,  Dirichlet mixtures + Gaussian noise
struct ExperimentConfig {
  int exp_id = 1;
  std::size_t m = 200;
  std::size_t r = 20;
  double delta = 0.0;
  std::uint64_t seed = 0;
  /// Number of Dirichlet columns for experiments 2 and 4; defaults to 10 r.
  std::optional<std::size_t> n_mix;

  /// Desk-sized variant (m = 40, r = 8) with the same structure.
  static ExperimentConfig desk(int exp_id, double delta, std::uint64_t seed);
  /// Throws InvalidArgument on an unknown experiment or inconsistent sizes.
  void validate() const;
  std::size_t mixtures() const { return n_mix.value_or(10 * r); }
};

struct GroundTruth {
  DenseMatrix W;
  DenseMatrix H;
  DenseMatrix N;
  /// For each column of M, the endmember it is a pure copy of, if any.
  std::vector<std::optional<std::size_t>> pure_column_map;
};

struct Instance {
  DenseMatrix M;
  GroundTruth truth;
};

/// m x r matrix with i.i.d. uniform [0, 1) entries, drawn column by column.
DenseMatrix gen_w_uniform(std::size_t m, std::size_t r, std::uint64_t seed);

/// U diag(a^0, ..., a^(r-1)) V^T with a = 10^(-3 / (r - 1)), where U, V come
/// from the compact SVD of a uniform draw. sigma_1 = 1, sigma_r = 1e-3.
DenseMatrix gen_w_illconditioned(std::size_t m, std::size_t r, std::uint64_t seed);

/// M = W [I_r, H'] + N where H' holds every half/half pair (a < b, in
/// lexicographic order). Pure columns are noiseless; each middle point m_i is
/// pushed away from the column mean w of W by n_i = delta (m_i - w).
Instance gen_middle_points(const DenseMatrix& w, double delta);

/// M = W [I_r, I_r, H'] + N where H' has n_mix Dirichlet columns sharing one
/// parameter vector drawn uniformly in (0, 1], and every entry of N is
/// delta times a standard normal.
Instance gen_dirichlet_gaussian(const DenseMatrix& w, std::size_t n_mix, double delta,
                                std::uint64_t seed);

/// Full instance for `config`. W is drawn from derive_seed(seed, {1}) and the
/// mixing/noise part from derive_seed(seed, {2}).
Instance generate(const ExperimentConfig& config);

/// The W that generate(config) would use.
DenseMatrix generate_w(const ExperimentConfig& config);

}  // namespace sepnmf
