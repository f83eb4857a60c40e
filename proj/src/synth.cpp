#include "sepnmf/synth.hpp"

#include <cmath>
#include <string>

#include "sepnmf/error.hpp"
#include "sepnmf/linalg.hpp"
#include "sepnmf/random.hpp"

namespace sepnmf {

namespace {

enum StreamTag : std::uint64_t { kWStream = 1, kMixStream = 2 };

bool middle_points(int exp_id) { return exp_id == 1 || exp_id == 3; }
bool uniform_w(int exp_id) { return exp_id == 1 || exp_id == 2; }

void check_w_shape(std::size_t m, std::size_t r) {
  if (r == 0 || m < r) {
    throw InvalidArgument("synth: need 1 <= r <= m, got m = " + std::to_string(m) +
                          ", r = " + std::to_string(r));
  }
}

void check_delta(double delta) {
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw InvalidArgument("synth: delta must be >= 0");
}

}  // namespace

ExperimentConfig ExperimentConfig::desk(int exp_id, double delta, std::uint64_t seed) {
  ExperimentConfig c;
  c.exp_id = exp_id;
  c.m = 40;
  c.r = 8;
  c.delta = delta;
  c.seed = seed;
  return c;
}

void ExperimentConfig::validate() const {
  if (exp_id < 1 || exp_id > 4) {
    throw InvalidArgument("synth: experiment must be 1..4, got " + std::to_string(exp_id));
  }
  check_w_shape(m, r);
  check_delta(delta);
  if (middle_points(exp_id) && r < 2) throw InvalidArgument("synth: middle points need r >= 2");
  if (!middle_points(exp_id) && mixtures() == 0) throw InvalidArgument("synth: n_mix must be >= 1");
}

DenseMatrix gen_w_uniform(std::size_t m, std::size_t r, std::uint64_t seed) {
  check_w_shape(m, r);
  Rng rng(seed);
  DenseMatrix w(m, r);
  for (double& v : w.data()) v = rng.uniform();
  return w;
}

DenseMatrix gen_w_illconditioned(std::size_t m, std::size_t r, std::uint64_t seed) {
  const SvdResult f = svd(gen_w_uniform(m, r, seed));
  const double alpha = r > 1 ? std::pow(10.0, -3.0 / static_cast<double>(r - 1)) : 1.0;
  DenseMatrix us = f.u;
  for (std::size_t k = 0; k < r; ++k) {
    const double s = std::pow(alpha, static_cast<double>(k));
    for (double& v : us.col(k)) v *= s;
  }
  return matmul(us, f.v.transpose());
}

Instance gen_middle_points(const DenseMatrix& w, double delta) {
  check_delta(delta);
  const std::size_t m = w.rows();
  const std::size_t r = w.cols();
  if (r < 2) throw InvalidArgument("gen_middle_points: need r >= 2");
  const std::size_t pairs = r * (r - 1) / 2;
  const std::size_t n = r + pairs;

  DenseMatrix h(r, n);
  std::vector<std::optional<std::size_t>> map(n);
  for (std::size_t k = 0; k < r; ++k) {
    h(k, k) = 1.0;
    map[k] = k;
  }
  std::size_t col = r;
  for (std::size_t a = 0; a < r; ++a) {
    for (std::size_t b = a + 1; b < r; ++b, ++col) {
      h(a, col) = 0.5;
      h(b, col) = 0.5;
    }
  }
  const DenseMatrix clean = matmul(w, h);

  Vector wbar(m, 0.0);
  for (std::size_t k = 0; k < r; ++k) {
    for (std::size_t i = 0; i < m; ++i) wbar[i] += w(i, k);
  }
  for (double& v : wbar) v /= static_cast<double>(r);

  DenseMatrix noise(m, n);
  for (std::size_t j = r; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) noise(i, j) = delta * (clean(i, j) - wbar[i]);
  }
  return Instance{clean + noise, GroundTruth{w, std::move(h), std::move(noise), std::move(map)}};
}

Instance gen_dirichlet_gaussian(const DenseMatrix& w, std::size_t n_mix, double delta,
                                std::uint64_t seed) {
  check_delta(delta);
  if (n_mix == 0) throw InvalidArgument("gen_dirichlet_gaussian: n_mix must be >= 1");
  const std::size_t m = w.rows();
  const std::size_t r = w.cols();
  const std::size_t n = 2 * r + n_mix;
  Rng rng(seed);

  Vector alpha(r);
  for (double& a : alpha) a = rng.uniform_open();

  DenseMatrix h(r, n);
  std::vector<std::optional<std::size_t>> map(n);
  for (std::size_t k = 0; k < r; ++k) {
    h(k, k) = 1.0;
    h(k, r + k) = 1.0;
    map[k] = k;
    map[r + k] = k;
  }
  for (std::size_t j = 2 * r; j < n; ++j) {
    const Vector d = rng.dirichlet(alpha);
    std::copy(d.begin(), d.end(), h.col(j).begin());
  }

  DenseMatrix noise(m, n);
  for (double& v : noise.data()) v = delta * rng.normal();
  DenseMatrix clean = matmul(w, h);
  return Instance{clean + noise, GroundTruth{w, std::move(h), std::move(noise), std::move(map)}};
}

DenseMatrix generate_w(const ExperimentConfig& config) {
  config.validate();
  const std::uint64_t s = derive_seed(config.seed, {kWStream});
  return uniform_w(config.exp_id) ? gen_w_uniform(config.m, config.r, s)
                                  : gen_w_illconditioned(config.m, config.r, s);
}

Instance generate(const ExperimentConfig& config) {
  DenseMatrix w = generate_w(config);
  if (middle_points(config.exp_id)) return gen_middle_points(w, config.delta);
  return gen_dirichlet_gaussian(w, config.mixtures(), config.delta,
                                derive_seed(config.seed, {kMixStream}));
}

}  // namespace sepnmf
