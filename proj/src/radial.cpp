#include "robineig/radial.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "robineig/eigensolver.hpp"

namespace robineig {

namespace {

struct GridSolve {
  double lambda;
  Eigen::VectorXd phi;
  int iterations;
};

GridSolve solve_on_grid(const RadialProblem& p, int n) {
  const double dr = p.R / n;
  const bool robin = p.bc.kind == BCKind::robin;
  const int N = robin ? n + 1 : n;  // Dirichlet drops the node at r = R
  const double st = p.sign * p.tau;

  std::vector<Eigen::Triplet<double>> t;
  t.reserve(3 * N);
  // r = 0: -d * phi''(0) = lambda phi(0), phi''(0) ~ 2(phi_1 - phi_0)/dr^2
  t.emplace_back(0, 0, 2.0 * p.d / (dr * dr));
  t.emplace_back(0, 1, -2.0 * p.d / (dr * dr));
  for (int i = 1; i < N; ++i) {
    const double r = i * dr;
    const double conv = (-(p.d - 1) / r + st) / (2 * dr);
    const double diag = 2.0 / (dr * dr);
    const double up = -1.0 / (dr * dr) + conv;
    const double lo = -1.0 / (dr * dr) - conv;
    if (i < n) {
      t.emplace_back(i, i, diag);
      t.emplace_back(i, i - 1, lo);
      if (i + 1 < N) t.emplace_back(i, i + 1, up);
    } else {
      // Robin row at r = R via the ghost node phi_{n+1} = phi_{n-1} - 2 dr beta phi_n.
      t.emplace_back(i, i, diag - 2 * dr * p.bc.beta * up);
      t.emplace_back(i, i - 1, lo + up);
    }
  }
  SpMat A(N, N);
  A.setFromTriplets(t.begin(), t.end());
  SpMat M(N, N);
  M.setIdentity();

  OperatorPair pair;
  pair.A = std::move(A);
  pair.M = std::move(M);
  pair.bc = p.bc;
  pair.dof_to_node.resize(N);
  for (int i = 0; i < N; ++i) pair.dof_to_node[i] = i;

  EigenOptions opts;
  opts.refine_steps = 3;
  EigenResult res = principal_eigenpair(pair, opts);

  // Eigenvalue from the weighted Rayleigh quotient with the self-adjoint
  // weight w(r) = r^{d-1} exp(-sign*tau*r) of the radial operator; the
  // weight vanishes at the large near-origin rows, which suppresses the
  // factorization noise there.
  Eigen::VectorXd u(N);
  for (int i = 0; i < N; ++i) {
    const double r = i * dr;
    u[i] = std::pow(r, p.d - 1) * std::exp(-st * r) * res.phi[i];
  }
  const double denom = u.dot(res.phi);
  const double lambda = denom > 0 ? u.dot(pair.A * res.phi) / denom : res.lambda;

  GridSolve out;
  out.lambda = lambda;
  out.phi = std::move(res.phi);
  out.iterations = res.iterations;
  return out;
}

}  // namespace

RadialResult radial_principal(const RadialProblem& p) {
  if (p.d < 1) throw std::invalid_argument("radial problem requires d >= 1");
  if (p.R <= 0) throw std::invalid_argument("radial problem requires R > 0");
  if (p.tau < 0) throw std::invalid_argument("radial problem requires tau >= 0");
  if (p.sign != 1 && p.sign != -1) throw std::invalid_argument("sign must be +1 or -1");
  if (p.n < 16) throw std::invalid_argument("radial grid resolution too small");
  if (p.bc.kind == BCKind::neumann)
    throw std::invalid_argument("radial solver supports Robin and Dirichlet only");
  if (p.bc.kind == BCKind::robin && p.bc.beta <= 0)
    throw std::invalid_argument("Robin condition requires beta > 0");

  const GridSolve coarse = solve_on_grid(p, p.n);
  const GridSolve fine = solve_on_grid(p, 2 * p.n);

  RadialResult res;
  res.lambda = fine.lambda + (fine.lambda - coarse.lambda) / 3;
  res.err_estimate = std::abs(coarse.lambda - fine.lambda) / 3;
  res.phi = fine.phi;
  res.iterations = coarse.iterations + fine.iterations;
  double viol = 0;
  for (int i = 0; i + 1 < res.phi.size(); ++i)
    viol = std::max(viol, res.phi[i + 1] - res.phi[i]);
  res.monotone_violation = std::max(0.0, viol);
  return res;
}

double transcendental_reference(double R, double beta) {
  if (R <= 0 || beta <= 0)
    throw std::invalid_argument("transcendental_reference requires R > 0 and beta > 0");
  const double half_pi = std::numbers::pi / 2;
  auto g = [&](double lam) {
    const double s = std::sqrt(lam);
    return s * std::tan(s * R) - beta;
  };
  // g < 0 near 0 and g -> +inf as sqrt(lambda)*R -> pi/2, so the root is
  // bracketed inside (0, (pi/2R)^2).
  double lo = std::numeric_limits<double>::min();
  double hi = (half_pi / R) * (half_pi / R) * (1 - 1e-14);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace robineig
