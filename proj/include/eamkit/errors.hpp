#pragma once

#include <stdexcept>
#include <string>

namespace eamkit {

/// Numerical failure inside an algorithm (eigensolver, quadrature, degeneracy).
struct ComputationError : std::runtime_error {
  explicit ComputationError(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem or serialization failure.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace eamkit
