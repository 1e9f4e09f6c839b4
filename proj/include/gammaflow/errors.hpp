#pragma once

#include <stdexcept>
#include <string>

namespace gammaflow {

/// Argument outside the (closure of the) admissible cone or slab.
struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Grid too coarse for the finite-difference stencils.
struct DegenerateGrid : std::runtime_error {
  explicit DegenerateGrid(const std::string& msg) : std::runtime_error(msg) {}
};

/// Principal curvatures left the closure of the cone during a computation.
struct ConeExit : std::runtime_error {
  explicit ConeExit(const std::string& msg) : std::runtime_error(msg) {}
};

struct RootBracketFailure : std::runtime_error {
  explicit RootBracketFailure(const std::string& msg) : std::runtime_error(msg) {}
};

struct StepTooLarge : std::runtime_error {
  explicit StepTooLarge(const std::string& msg) : std::runtime_error(msg) {}
};

struct Instability : std::runtime_error {
  explicit Instability(const std::string& msg) : std::runtime_error(msg) {}
};

struct InterpolationRange : std::runtime_error {
  explicit InterpolationRange(const std::string& msg) : std::runtime_error(msg) {}
};

struct NotATranslator : std::runtime_error {
  explicit NotATranslator(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace gammaflow
