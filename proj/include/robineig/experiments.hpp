#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "robineig/extremal.hpp"
#include "robineig/radial.hpp"

namespace robineig {

/// Mesh-independent description of a drift, so experiments can
/// materialize the same field on many meshes.
struct DriftSpec {
  enum class Kind { zero, radial, random } kind = Kind::zero;
  double tau = 0;
  int sign = +1;            // radial only
  std::uint64_t seed = 0;   // random only

  static DriftSpec zero() { return {}; }
  static DriftSpec radial(double tau, int sign = +1) {
    return {Kind::radial, tau, sign, 0};
  }
  static DriftSpec random(double tau, std::uint64_t seed) {
    return {Kind::random, tau, +1, seed};
  }

  DriftField materialize(const Mesh& mesh) const;
  std::string describe() const;
};

struct SweepRow {
  double beta = 0;
  double lambda = 0;
  double residual = 0;
  int iterations = 0;
  double runtime_sec = 0;  // diagnostic only; not serialized
};

struct SweepTable {
  std::string domain;
  std::string drift;
  double h = 0;        // requested
  double h_actual = 0; // max element diameter of the mesh used
  std::vector<SweepRow> rows;
  bool passed = false;
  std::string failure;
};

/// One eigensolve per beta on a shared mesh; stiffness, convection and
/// mass are assembled once and only the boundary term is rescaled.
/// Strict monotonicity of lambda in beta is asserted (Lemma-level fact;
/// a violation beyond 1e-10 marks the table failed).
SweepTable beta_sweep(const DomainSpec& domain, const DriftSpec& drift,
                      std::vector<double> beta_grid, double h);

struct LimitReport {
  std::string domain;
  std::string drift;
  double h = 0;
  double lambda_dirichlet = 0;
  double lambda_small = 0;   // beta = 1e-3
  double lambda_mid = 0;     // beta = 1
  double lambda_large = 0;   // beta = 1e3
  bool small_beta_ok = false;     // lambda_small <= 1e-2
  bool below_dirichlet_ok = false;  // lambda^beta < lambda^D for all three
  bool large_beta_ok = false;     // |lambda_large - lambda^D| / lambda^D <= 2e-2
  bool passed = false;
};

LimitReport limit_check(const DomainSpec& domain, const DriftSpec& drift, double h);

struct FKRow {
  double beta = 0;
  double lambda_min = 0;    // extremal minimize on the domain
  double lambda_ref = 0;    // radial reference on the equimeasurable ball
  double margin = 0;        // lambda_min - lambda_ref
  double error_bound = 0;   // 3 h^2 lambda_min + radial error estimate
  bool margin_positive = false;  // margin > error_bound
  int extremal_iterations = 0;
  int sanity_violations = 0;
};

struct FKReport {
  std::string domain;
  std::string ball;
  double tau = 0;
  double h = 0;
  int n_random = 0;
  std::uint64_t seed = 0;
  std::vector<FKRow> rows;
  std::optional<double> beta0;    // first grid beta with margin positive from there on
  std::optional<double> epsilon;  // min margin over beta >= beta0
  bool passed = false;
  std::string failure;
};

/// Compare the worst-case drift on a non-ball domain against the
/// equimeasurable ball with outward radial drift, over a beta grid.
/// The extremal minimizer covers all admissible drifts at once;
/// n_random random drifts per beta serve as solver sanity points.
FKReport faber_krahn(const DomainSpec& domain, double tau, std::vector<double> beta_grid,
                     double h, int n_random, std::uint64_t seed);

struct ConvergenceRow {
  double h = 0;         // requested
  double h_actual = 0;
  double lambda = 0;
};

struct ConvergenceTable {
  std::string domain;
  std::string drift;
  std::string bc;
  std::vector<ConvergenceRow> rows;
  double fitted_order = 0;
  double lambda_extrapolated = 0;
  bool passed = false;  // fitted order >= 1.8
};

ConvergenceTable mesh_convergence(const DomainSpec& domain, const DriftSpec& drift,
                                  BoundaryCondition bc, std::vector<double> h_list);

}  // namespace robineig
