#pragma once

#include <cstddef>
#include <vector>

namespace sepnmf {

/// Ordered output of any column-extraction algorithm (0-based indices).
struct ExtractionResult {
  std::vector<std::size_t> indices;
  /// Selector value (or method-specific score) of the chosen column, per step.
  std::vector<double> step_scores;
  /// Largest remaining residual column norm after each step. Empty for
  /// methods without a residual (PPI).
  std::vector<double> residual_norms;
  /// Relative gap between the winning score and the runner-up, per step.
  std::vector<double> step_margins;
};

}  // namespace sepnmf
