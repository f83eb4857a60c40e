#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace sepnmf {

/// SplitMix64 finalizer; used only to derive independent seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed for a sub-stream identified by `path` under `master`. Folding is
/// s <- splitmix64(s ^ splitmix64(tag)) for each tag, starting from
/// s = splitmix64(master).
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) noexcept;

/// Portable random source. Bits come from std::mt19937_64 (fully specified by
/// the C++ standard); every distribution on top of it is implemented here so
/// that draws are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1].
  double uniform_open() { return 1.0 - uniform(); }
  /// Standard normal by Box-Muller; the second variate of each pair is cached.
  double normal();
  /// Gamma(shape, 1). Marsaglia-Tsang squeeze for shape >= 1, boosted by
  /// U^(1/shape) for shape < 1.
  double gamma(double shape);
  /// One Dirichlet(alpha) draw; sums to one.
  std::vector<double> dirichlet(std::span<const double> alpha);
  /// Unit vector uniform on the sphere S^(dim-1).
  std::vector<double> sphere(std::size_t dim);

 private:
  std::mt19937_64 engine_;
  std::optional<double> cached_normal_;
};

}  // namespace sepnmf
