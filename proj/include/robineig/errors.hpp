#pragma once

#include <stdexcept>
#include <string>

namespace robineig {

/// Mesh generation failure (infeasible h, degenerate geometry).
class MeshError : public std::runtime_error {
public:
  explicit MeshError(const std::string& what) : std::runtime_error(what) {}
};

/// Eigensolver failure. Carries the residual of the last iterate.
class SolveError : public std::runtime_error {
public:
  SolveError(const std::string& what, double last_residual)
      : std::runtime_error(what), last_residual(last_residual) {}
  double last_residual;
};

}  // namespace robineig
