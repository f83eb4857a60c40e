#pragma once

#include <cstddef>
#include <cstdint>

#include "sepnmf/dense_matrix.hpp"
#include "sepnmf/random.hpp"

namespace testing_util {

inline sepnmf::DenseMatrix gaussian(sepnmf::Rng& rng, std::size_t m, std::size_t n) {
  sepnmf::DenseMatrix a(m, n);
  for (double& v : a.data()) v = rng.normal();
  return a;
}

inline sepnmf::DenseMatrix uniform(sepnmf::Rng& rng, std::size_t m, std::size_t n) {
  sepnmf::DenseMatrix a(m, n);
  for (double& v : a.data()) v = rng.uniform();
  return a;
}

// W (m x r uniform) times [I_r, H'] with `mix` Dirichlet(1,...,1) columns
// strictly inside the simplex.
inline sepnmf::DenseMatrix separable(sepnmf::Rng& rng, const sepnmf::DenseMatrix& w,
                                     std::size_t mix) {
  const std::size_t r = w.cols();
  sepnmf::DenseMatrix h(r, r + mix);
  for (std::size_t k = 0; k < r; ++k) h(k, k) = 1.0;
  const sepnmf::Vector ones(r, 1.0);
  for (std::size_t j = r; j < r + mix; ++j) {
    const auto d = rng.dirichlet(ones);
    for (std::size_t k = 0; k < r; ++k) h(k, j) = d[k];
  }
  return sepnmf::matmul(w, h);
}

}  // namespace testing_util
