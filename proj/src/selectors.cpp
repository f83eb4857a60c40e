#include "sepnmf/selectors.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "sepnmf/error.hpp"

namespace sepnmf {

SelectorSpec SelectorSpec::robust(double alpha) {
  SelectorSpec s;
  s.kind = SelectorKind::RobustRational;
  s.alpha = alpha;
  s.validate();
  return s;
}

SelectorSpec SelectorSpec::pnorm(double p) {
  SelectorSpec s;
  s.kind = SelectorKind::PNormSquared;
  s.p = p;
  s.validate();
  return s;
}

void SelectorSpec::validate() const {
  switch (kind) {
    case SelectorKind::SquaredL2:
      break;
    case SelectorKind::RobustRational:
      if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw InvalidArgument("selector: robust alpha must be a positive number");
      }
      break;
    case SelectorKind::PNormSquared:
      if (!(p > 1.0) || !std::isfinite(p)) {
        throw InvalidArgument("selector: pnorm p must be a finite number > 1");
      }
      break;
  }
  if (radius_k && !(*radius_k > 0.0)) throw InvalidArgument("selector: radius must be > 0");
}

std::string SelectorSpec::name() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case SelectorKind::SquaredL2:
      return "l2";
    case SelectorKind::RobustRational:
      os << "robust:" << alpha;
      break;
    case SelectorKind::PNormSquared:
      os << "pnorm:" << p;
      break;
  }
  return os.str();
}

namespace {

double parse_number(std::string_view text, std::string_view what) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || text.empty()) {
    throw InvalidArgument("selector: cannot parse " + std::string(what) + " '" +
                          std::string(text) + "'");
  }
  return v;
}

}  // namespace

SelectorSpec parse_selector(std::string_view text) {
  if (text == "l2") return SelectorSpec::squared_l2();
  const auto colon = text.find(':');
  if (colon != std::string_view::npos) {
    const auto head = text.substr(0, colon);
    const auto tail = text.substr(colon + 1);
    if (head == "robust") return SelectorSpec::robust(parse_number(tail, "alpha"));
    if (head == "pnorm") return SelectorSpec::pnorm(parse_number(tail, "p"));
  }
  throw InvalidArgument("selector: unknown selector '" + std::string(text) +
                        "' (expected l2, robust:<alpha> or pnorm:<p>)");
}

namespace {

double pnorm_value(std::span<const double> x, double p) {
  double mx = 0.0;
  for (double v : x) mx = std::max(mx, std::abs(v));
  if (mx == 0.0) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += std::pow(std::abs(v) / mx, p);
  return mx * std::pow(acc, 1.0 / p);
}

}  // namespace

double evaluate(const SelectorSpec& spec, std::span<const double> x) {
  switch (spec.kind) {
    case SelectorKind::SquaredL2:
      return dot(x, x);
    case SelectorKind::RobustRational: {
      double acc = 0.0;
      for (double v : x) acc += v * v / (spec.alpha + std::abs(v));
      return acc;
    }
    case SelectorKind::PNormSquared: {
      const double n = pnorm_value(x, spec.p);
      return n * n;
    }
  }
  return 0.0;
}

Vector gradient(const SelectorSpec& spec, std::span<const double> x) {
  Vector g(x.size(), 0.0);
  switch (spec.kind) {
    case SelectorKind::SquaredL2:
      for (std::size_t i = 0; i < x.size(); ++i) g[i] = 2.0 * x[i];
      break;
    case SelectorKind::RobustRational:
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double a = std::abs(x[i]);
        const double d = spec.alpha + a;
        g[i] = x[i] * (2.0 * spec.alpha + a) / (d * d);
      }
      break;
    case SelectorKind::PNormSquared: {
      const double n = pnorm_value(x, spec.p);
      if (n == 0.0) break;
      // d/dx_i ||x||_p^2 = 2 ||x||_p^(2-p) sign(x_i) |x_i|^(p-1)
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double ratio = std::abs(x[i]) / n;
        g[i] = 2.0 * n * std::copysign(std::pow(ratio, spec.p - 1.0), x[i]);
      }
      break;
    }
  }
  return g;
}

SelectorConstants constants(const SelectorSpec& spec, double K, std::size_t dim) {
  if (!(K > 0.0)) throw InvalidArgument("constants: K must be > 0");
  switch (spec.kind) {
    case SelectorKind::SquaredL2:
      return {2.0, 2.0};
    case SelectorKind::RobustRational: {
      const double a = spec.alpha;
      return {2.0 * a * a / std::pow(a + K, 3.0), 2.0 / a};
    }
    case SelectorKind::PNormSquared: {
      if (dim == 0) throw InvalidArgument("constants: dimension must be >= 1");
      const double p = spec.p;
      const double equiv = 2.0 * std::pow(static_cast<double>(dim), 2.0 / p - 1.0);
      if (p <= 2.0) return {2.0 * (p - 1.0), equiv};
      return {equiv, 2.0 * (p - 1.0)};
    }
  }
  return {};
}

bool sandwich_check(const SelectorSpec& spec, std::span<const double> x, double K) {
  const auto c = constants(spec, K, x.size());
  const double sq = dot(x, x);
  const double f = evaluate(spec, x);
  const double tol = 1e-9 * (1.0 + sq);
  return c.mu / 2.0 * sq - tol <= f && f <= c.L / 2.0 * sq + tol;
}

}  // namespace sepnmf
