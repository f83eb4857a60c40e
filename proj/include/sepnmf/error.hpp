#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include "sepnmf/extraction_result.hpp"

namespace sepnmf {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape or value precondition violated by the caller.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class InvalidOptions : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Projection direction with zero norm.
class ZeroDirection : public Error {
 public:
  using Error::Error;
};

class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

/// The residual vanished before the requested number of columns was found.
/// Carries whatever was extracted up to that point.
class RankDeficiency : public Error {
 public:
  RankDeficiency(const std::string& what, ExtractionResult partial)
      : Error(what), partial_(std::move(partial)) {}

  const ExtractionResult& partial() const noexcept { return partial_; }
  std::size_t extracted() const noexcept { return partial_.indices.size(); }

 private:
  ExtractionResult partial_;
};

}  // namespace sepnmf
