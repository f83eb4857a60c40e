#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "sepnmf/dense_matrix.hpp"

namespace sepnmf {

enum class SelectorKind { SquaredL2, RobustRational, PNormSquared };

/// Strongly convex selector f with f(0) = 0.
///   SquaredL2        f(x) = sum x_i^2
///   RobustRational   f(x) = sum x_i^2 / (alpha + |x_i|)
///   PNormSquared     f(x) = ||x||_p^2
struct SelectorSpec {
  SelectorKind kind = SelectorKind::SquaredL2;
  double alpha = 1.0;
  double p = 2.0;
  /// Radius of the ball on which local constants are computed. Extraction
  /// fills it with the max column norm of its input when unset.
  std::optional<double> radius_k;

  static SelectorSpec squared_l2() { return {}; }
  static SelectorSpec robust(double alpha);
  static SelectorSpec pnorm(double p);

  /// Throws InvalidArgument when alpha <= 0 or p outside (1, inf).
  void validate() const;
  /// Canonical CLI spelling: "l2", "robust:<alpha>", "pnorm:<p>".
  std::string name() const;
};

/// Parses "l2", "robust:<alpha>" or "pnorm:<p>".
SelectorSpec parse_selector(std::string_view text);

double evaluate(const SelectorSpec& spec, std::span<const double> x);
Vector gradient(const SelectorSpec& spec, std::span<const double> x);

struct SelectorConstants {
  double mu = 0.0;
  double L = 0.0;
};

/// mu and L of `spec` on the l2 ball of radius K in R^dim.
///   SquaredL2       (2, 2)
///   RobustRational  (2 a^2 / (a + K)^3, 2 / a)
///   PNormSquared    norm-equivalence constants: for p <= 2
///                   (2 (p - 1), 2 dim^(2/p - 1)), for p >= 2
///                   (2 dim^(2/p - 1), 2 (p - 1)).
/// The p-norm pair always satisfies mu/2 |x|^2 <= f(x) <= L/2 |x|^2. Only
/// mu (p <= 2) or L (p >= 2) is also a strong convexity / gradient Lipschitz
/// constant in the l2 geometry.
SelectorConstants constants(const SelectorSpec& spec, double K, std::size_t dim);

/// mu/2 |x|^2 - tol <= f(x) <= L/2 |x|^2 + tol with tol = 1e-9 (1 + |x|^2).
bool sandwich_check(const SelectorSpec& spec, std::span<const double> x, double K);

}  // namespace sepnmf
