#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace signet {

// Numeric failures surfaced by the linear-algebra kernel.
struct SingularMatrix : std::runtime_error {
  explicit SingularMatrix(const std::string& what) : std::runtime_error(what) {}
};

struct ConvergenceFailure : std::runtime_error {
  explicit ConvergenceFailure(const std::string& what) : std::runtime_error(what) {}
};

struct NotPositiveDefinite : std::runtime_error {
  explicit NotPositiveDefinite(const std::string& what) : std::runtime_error(what) {}
};

// A chosen (alpha, beta) cancels a union arc; carries the offending entry.
struct CancellationError : std::runtime_error {
  CancellationError(std::size_t i_, std::size_t j_, const std::string& what)
      : std::runtime_error(what), i(i_), j(j_) {}
  std::size_t i;
  std::size_t j;
};

struct DeltaOutOfRange : std::invalid_argument {
  explicit DeltaOutOfRange(const std::string& what) : std::invalid_argument(what) {}
};

struct NotStronglyConnected : std::runtime_error {
  explicit NotStronglyConnected(const std::string& what) : std::runtime_error(what) {}
};

struct DivergenceDetected : std::runtime_error {
  explicit DivergenceDetected(const std::string& what) : std::runtime_error(what) {}
};

// Malformed network input file; message carries field/line diagnostics.
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace signet
