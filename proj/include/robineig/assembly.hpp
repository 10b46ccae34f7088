#pragma once

#include <vector>

#include <Eigen/Sparse>

#include "robineig/geometry.hpp"

namespace robineig {

using SpMat = Eigen::SparseMatrix<double>;

enum class BCKind { robin, dirichlet, neumann };

struct BoundaryCondition {
  BCKind kind = BCKind::robin;
  double beta = 1.0;  // only meaningful for robin

  static BoundaryCondition robin(double beta);
  static BoundaryCondition dirichlet() { return {BCKind::dirichlet, 0.0}; }
  static BoundaryCondition neumann() { return {BCKind::neumann, 0.0}; }
};

/// Discrete generalized eigenproblem A phi = lambda M phi for the weak
/// form of -Delta + v.grad with the given boundary condition.
///
/// A = stiffness + convection (+ beta * boundary mass under Robin);
/// M is the consistent mass matrix. Under Dirichlet, boundary rows and
/// columns are eliminated and dof_to_node maps rows to interior nodes;
/// otherwise dof_to_node is the identity.
struct OperatorPair {
  SpMat A;
  SpMat M;
  BoundaryCondition bc;
  std::vector<int> dof_to_node;

  int n() const { return static_cast<int>(A.rows()); }
};

/// beta-independent pieces on the full node set, for beta sweeps that
/// rescale only the boundary term.
struct AssemblyParts {
  SpMat volume;         // stiffness + convection
  SpMat boundary_mass;  // trapezoidal boundary mass, unscaled
  SpMat mass;
};

AssemblyParts assemble_parts(const Mesh& mesh, const DriftField& drift);
OperatorPair operator_from_parts(const Mesh& mesh, const AssemblyParts& parts,
                                 BoundaryCondition bc);
OperatorPair assemble(const Mesh& mesh, const DriftField& drift, BoundaryCondition bc);

/// Convection part alone: C_ab = (area/3) v . grad(basis_b) on each
/// element (exact for piecewise-constant drift).
SpMat convection_matrix(const Mesh& mesh, const DriftField& drift);

/// A * x, for residual checks.
Eigen::VectorXd apply_operator(const OperatorPair& pair, const Eigen::VectorXd& x);

}  // namespace robineig
