#pragma once

#include <optional>

#include <Eigen/Sparse>

#include "robineig/assembly.hpp"

namespace robineig {

struct EigenOptions {
  double tol = 1e-10;  // residual tolerance ||A*phi - lambda*M*phi|| / ||M*phi||
  int max_iter = 500;
  std::optional<double> shift;  // default: 0 (Robin/Dirichlet), -1 (Neumann)
  Eigen::VectorXd initial;      // warm start; empty = all ones
  int refine_steps = 1;         // extra inverse-iteration steps after convergence
};

/// Principal eigenpair. phi is entrywise nonnegative with max exactly 1.
struct EigenResult {
  double lambda = 0;
  Eigen::VectorXd phi;
  double residual = 0;
  int iterations = 0;
  double tol_used = 0;  // requested tolerance, raised to the rounding
                        // floor eps*|||A| |phi|||/||M phi|| when that is larger
  std::optional<double> gap_estimate;
};

/// Shift-invert power iteration on (A - sigma*M)^{-1} M. Converges to the
/// eigenvalue nearest sigma, which for sigma below the spectrum is the
/// principal one. Throws SolveError on non-convergence (carrying the last
/// residual) and when the shifted matrix cannot be factorized after one
/// retry with the shift pushed further left.
EigenResult principal_eigenpair(const OperatorPair& pair, const EigenOptions& opts = {});

/// One deflated shift-invert run, M-orthogonal to the principal
/// eigenvector. Returns Re(lambda_2) - lambda_1, or nullopt when the
/// deflated iteration does not settle.
std::optional<double> spectral_gap_probe(const OperatorPair& pair,
                                         const EigenResult& principal,
                                         const EigenOptions& opts = {});

/// Expand a dof vector to a full nodal vector (zeros on the Dirichlet
/// boundary; identity otherwise).
Eigen::VectorXd to_nodal(const Mesh& mesh, const OperatorPair& pair,
                         const Eigen::VectorXd& phi);

}  // namespace robineig
