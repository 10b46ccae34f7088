#pragma once

#include <Eigen/Dense>

#include "robineig/assembly.hpp"

namespace robineig {

/// Principal eigenproblem for the ball of radius R in dimension d with
/// drift sign * tau * e_r, reduced to the radial ODE
///   -phi'' - ((d-1)/r) phi' + sign*tau*phi' = lambda phi   on (0, R),
/// phi'(0) = 0, and phi'(R) + beta*phi(R) = 0 (Robin) or phi(R) = 0
/// (Dirichlet).
struct RadialProblem {
  int d = 2;
  double R = 1.0;
  double tau = 0.0;
  int sign = +1;
  BoundaryCondition bc = BoundaryCondition::robin(1.0);
  int n = 4096;  // grid resolution; the result is extrapolated from n and 2n
};

struct RadialResult {
  double lambda = 0;        // Richardson-extrapolated
  double err_estimate = 0;  // |lambda_n - lambda_2n| / 3
  Eigen::VectorXd phi;      // on the fine grid (2n+1 points incl. r=0..R), max 1
  double monotone_violation = 0;  // max over the grid of max(0, phi_{i+1} - phi_i)
  int iterations = 0;
};

/// Second-order finite differences on a uniform radial grid; the r = 0
/// singularity uses the symmetry limit ((d-1)/r) phi' -> (d-1) phi''(0).
RadialResult radial_principal(const RadialProblem& p);

/// Smallest positive root of sqrt(lambda) * tan(sqrt(lambda) * R) = beta,
/// by bisection on (0, (pi/(2R))^2). This is the exact d = 1, tau = 0
/// Robin eigenvalue on (-R, R).
double transcendental_reference(double R, double beta);

}  // namespace robineig
