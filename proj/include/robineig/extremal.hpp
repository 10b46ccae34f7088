#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "robineig/eigensolver.hpp"

namespace robineig {

enum class Sense { minimize, maximize };

struct ExtremalOptions {
  double lambda_tol = 1e-9;  // relative change of lambda between outer steps
  double opt_tol = 1e-6;     // optimality residual at the accepted state
  int max_outer = 100;
  EigenOptions eigen;               // inner eigensolver settings
  std::optional<DriftField> start;  // default: v = 0
};

/// Converged extremal drift, its eigenpair, and the iteration trace.
struct ExtremalResult {
  Sense sense = Sense::minimize;
  DriftField drift;
  EigenResult eigen;
  double optimality_residual = 0;
  std::vector<double> trace;  // lambda after each eigensolve
  bool converged = false;
  int iterations = 0;  // eigensolves performed
  double small_gradient_fraction = 0;
};

/// Fixed-point iteration on the optimality condition: solve the
/// eigenproblem for v_k, then point v_{k+1} along -s * grad(phi) with
/// magnitude tau wherever the elementwise gradient is above the cutoff
/// eta = 1e-8 * max|grad|, and zero elsewhere (s = +1 minimize,
/// -1 maximize). Plain updates by default; damping (averaging successive
/// drifts, renormalized to magnitude tau) engages only after the lambda
/// trace is seen moving the wrong way.
ExtremalResult extremal_drift(const Mesh& mesh, double tau, double beta, Sense sense,
                              const ExtremalOptions& opts = {});

/// Area-weighted defect of the optimality identity
/// v.grad(phi) = -s * tau * |grad(phi)|:
///   sum_K area_K |v_K.g_K + s*tau*|g_K||  /  sum_K area_K * tau * |g_K|.
/// Zero by convention when tau = 0.
double optimality_residual(const Mesh& mesh, const DriftField& drift,
                           const EigenResult& eigen, double tau, Sense sense);

/// Admissible drift with per-element direction uniform on the circle
/// (a sign in 1d) and magnitude tau, deterministic in the seed.
DriftField random_drift(const Mesh& mesh, double tau, std::uint64_t seed);

struct SandwichReport {
  double lambda_min = 0;  // from extremal minimize
  double lambda_max = 0;  // from extremal maximize
  std::vector<double> lambdas;
  std::vector<int> violating_indices;
  bool passed = false;
};

/// Draw n_random admissible drifts and assert
/// lambda_min - 1e-9 <= lambda(v) <= lambda_max + 1e-9 for each.
SandwichReport sandwich_check(const Mesh& mesh, double tau, double beta, int n_random,
                              std::uint64_t seed);

}  // namespace robineig
