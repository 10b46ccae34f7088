#include "robineig/eigensolver.hpp"

#include <cmath>

#include <Eigen/SparseLU>

#include "robineig/errors.hpp"

namespace robineig {

namespace {

double default_shift(const OperatorPair& pair) {
  // lambda_1 > 0 under Robin/Dirichlet, so 0 sits below the spectrum;
  // under Neumann the principal eigenvalue is 0 itself.
  return pair.bc.kind == BCKind::neumann ? -1.0 : 0.0;
}

void factorize_with_retry(Eigen::SparseLU<SpMat>& lu, const SpMat& A, const SpMat& M,
                          double& sigma) {
  SpMat S = A - sigma * M;
  S.makeCompressed();
  lu.compute(S);
  if (lu.info() == Eigen::Success) return;
  // Shift hits the spectrum; push it once toward -infinity.
  sigma = sigma == 0.0 ? -1.0 : 2.0 * sigma;
  S = A - sigma * M;
  S.makeCompressed();
  lu.compute(S);
  if (lu.info() != Eigen::Success)
    throw SolveError("shift hits spectrum: factorization of A - sigma*M failed twice",
                     std::numeric_limits<double>::quiet_NaN());
}

void fix_sign(Eigen::VectorXd& y) {
  int imax = 0;
  y.cwiseAbs().maxCoeff(&imax);
  if (y[imax] < 0) y = -y;
}

}  // namespace

EigenResult principal_eigenpair(const OperatorPair& pair, const EigenOptions& opts) {
  const int n = pair.n();
  double sigma = opts.shift.value_or(default_shift(pair));

  Eigen::SparseLU<SpMat> lu;
  factorize_with_retry(lu, pair.A, pair.M, sigma);

  Eigen::VectorXd x =
      opts.initial.size() == n ? opts.initial : Eigen::VectorXd::Ones(n).eval();
  x /= x.norm();

  // Evaluating A*y - lambda*M*y itself rounds at the level of |A| |y|,
  // so no residual below that floor can be certified.
  const SpMat absA = pair.A.cwiseAbs();
  constexpr double eps = std::numeric_limits<double>::epsilon();

  double lambda = 0, residual = std::numeric_limits<double>::infinity();
  double tol_used = opts.tol;
  int iter = 0;
  bool converged = false;
  for (iter = 1; iter <= opts.max_iter; ++iter) {
    Eigen::VectorXd y = lu.solve(pair.M * x);
    fix_sign(y);
    y /= y.norm();
    const Eigen::VectorXd Ay = pair.A * y;
    const Eigen::VectorXd My = pair.M * y;
    lambda = y.dot(Ay) / y.dot(My);
    residual = (Ay - lambda * My).norm() / My.norm();
    tol_used = std::max(opts.tol, 20 * eps * (absA * y.cwiseAbs()).norm() / My.norm());
    x = y;
    if (residual < tol_used) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw SolveError("eigensolver did not converge in " + std::to_string(opts.max_iter) +
                         " iterations (residual " + std::to_string(residual) + ")",
                     residual);

  // Residual-based correction: additional inverse-iteration steps keep
  // contracting the eigenvector error even once the residual sits at the
  // factorization noise floor. Fall back to the best iterate seen if the
  // last step drifts back above tolerance.
  Eigen::VectorXd best_x = x;
  double best_lambda = lambda, best_residual = residual;
  for (int step = 0; step < opts.refine_steps; ++step) {
    Eigen::VectorXd y = lu.solve(pair.M * x);
    fix_sign(y);
    y /= y.norm();
    const Eigen::VectorXd Ay = pair.A * y;
    const Eigen::VectorXd My = pair.M * y;
    lambda = y.dot(Ay) / y.dot(My);
    residual = (Ay - lambda * My).norm() / My.norm();
    x = y;
    if (residual <= best_residual) {
      best_x = x;
      best_lambda = lambda;
      best_residual = residual;
    }
  }
  if (residual > tol_used) {
    x = best_x;
    lambda = best_lambda;
    residual = best_residual;
  }

  if (pair.bc.kind != BCKind::neumann && lambda <= 0)
    throw SolveError("principal eigenvalue must be positive under Robin/Dirichlet", residual);

  // Discrete Perron property is an acceptance test, not an assumption.
  const double floor = -1e-12 * x.cwiseAbs().maxCoeff();
  if (x.minCoeff() < floor)
    throw SolveError("converged eigenvector is not entrywise nonnegative", residual);
  x = x.cwiseMax(0.0);
  x /= x.maxCoeff();  // normalization max(phi) = 1, exact for the max entry

  EigenResult res;
  res.lambda = lambda;
  res.phi = std::move(x);
  res.residual = residual;
  res.iterations = iter;
  res.tol_used = tol_used;
  return res;
}

std::optional<double> spectral_gap_probe(const OperatorPair& pair,
                                         const EigenResult& principal,
                                         const EigenOptions& opts) {
  const int n = pair.n();
  double sigma = opts.shift.value_or(default_shift(pair));
  Eigen::SparseLU<SpMat> lu;
  factorize_with_retry(lu, pair.A, pair.M, sigma);

  const Eigen::VectorXd& phi = principal.phi;
  const Eigen::VectorXd Mphi = pair.M * phi;
  const double phiMphi = phi.dot(Mphi);
  auto deflate = [&](Eigen::VectorXd& y) { y -= phi * (Mphi.dot(y) / phiMphi); };

  // Deterministic start with a sign change, well away from the principal
  // direction.
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = (i % 2 == 0) ? 1.0 : -1.0;
  deflate(x);
  if (x.norm() == 0) return std::nullopt;
  x /= x.norm();

  double rho_prev = std::numeric_limits<double>::infinity();
  int settled = 0;
  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    Eigen::VectorXd y = lu.solve(pair.M * x);
    deflate(y);
    const double ny = y.norm();
    if (!(ny > 0) || !std::isfinite(ny)) return std::nullopt;
    y /= ny;
    const double rho = y.dot(pair.A * y) / y.dot(pair.M * y);
    x = y;
    if (std::abs(rho - rho_prev) <= 1e-8 * std::max(1.0, std::abs(rho))) {
      if (++settled >= 3) return rho - principal.lambda;
    } else {
      settled = 0;
    }
    rho_prev = rho;
  }
  return std::nullopt;
}

Eigen::VectorXd to_nodal(const Mesh& mesh, const OperatorPair& pair,
                         const Eigen::VectorXd& phi) {
  if (phi.size() != pair.n())
    throw std::invalid_argument("to_nodal: vector length does not match dof count");
  Eigen::VectorXd full = Eigen::VectorXd::Zero(mesh.num_nodes());
  for (int i = 0; i < pair.n(); ++i) full[pair.dof_to_node[i]] = phi[i];
  return full;
}

}  // namespace robineig
