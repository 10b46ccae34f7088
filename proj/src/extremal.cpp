#include "robineig/extremal.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace robineig {

namespace {

constexpr double kGradCutoffRel = 1e-8;

std::vector<Vec2> element_gradients(const Mesh& mesh, const Eigen::VectorXd& phi) {
  std::vector<Vec2> g(mesh.num_elements());
  for (int e = 0; e < mesh.num_elements(); ++e) g[e] = p1_gradient(mesh, phi, e);
  return g;
}

double max_norm(const std::vector<Vec2>& g) {
  double m = 0;
  for (const Vec2& v : g) m = std::max(m, v.norm());
  return m;
}

// Uniform double in [0, 1) from the top 53 bits; the raw generator output
// is pinned by the standard, unlike the distribution adapters.
double next_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

double optimality_residual(const Mesh& mesh, const DriftField& drift,
                           const EigenResult& eigen, double tau, Sense sense) {
  if (tau == 0) return 0;
  check_drift(mesh, drift);
  const double s = sense == Sense::minimize ? 1.0 : -1.0;
  double num = 0, den = 0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const double area = element_area(mesh, e);
    const Vec2 g = p1_gradient(mesh, eigen.phi, e);
    const double gn = g.norm();
    num += area * std::abs(drift.values[e].dot(g) + s * tau * gn);
    den += area * tau * gn;
  }
  return den > 0 ? num / den : 0;
}

ExtremalResult extremal_drift(const Mesh& mesh, double tau, double beta, Sense sense,
                              const ExtremalOptions& opts) {
  if (tau < 0) throw std::invalid_argument("extremal_drift requires tau >= 0");
  const auto bc = BoundaryCondition::robin(beta);
  const double s = sense == Sense::minimize ? 1.0 : -1.0;

  ExtremalResult res;
  res.sense = sense;

  DriftField v = opts.start.value_or(zero_drift(mesh));
  v.tau = std::max(v.tau, tau);
  check_drift(mesh, v);

  // Stiffness, mass and boundary terms do not depend on the drift;
  // only the convection part is rebuilt per outer iteration.
  const AssemblyParts base = assemble_parts(mesh, zero_drift(mesh));
  auto solve = [&](const DriftField& drift, const Eigen::VectorXd& warm) {
    AssemblyParts parts = base;
    parts.volume = base.volume + convection_matrix(mesh, drift);
    EigenOptions eopts = opts.eigen;
    eopts.initial = warm;
    return principal_eigenpair(operator_from_parts(mesh, parts, bc), eopts);
  };

  EigenResult eig = solve(v, Eigen::VectorXd());
  res.trace.push_back(eig.lambda);
  res.iterations = 1;

  if (tau == 0) {
    res.drift = std::move(v);
    res.eigen = std::move(eig);
    res.optimality_residual = 0;
    res.converged = true;
    res.small_gradient_fraction = 0;
    return res;
  }

  bool damping = false;
  bool converged = false;
  double opt_res = 1;
  for (int outer = 0; outer < opts.max_outer; ++outer) {
    const auto g = element_gradients(mesh, eig.phi);
    const double eta = kGradCutoffRel * max_norm(g);

    DriftField v_next;
    v_next.tau = tau;
    v_next.values.resize(mesh.num_elements());
    for (int e = 0; e < mesh.num_elements(); ++e) {
      const double gn = g[e].norm();
      v_next.values[e] = gn >= eta ? Vec2(-s * tau * g[e] / gn) : Vec2(0, 0);
    }
    if (damping) {
      for (int e = 0; e < mesh.num_elements(); ++e) {
        const Vec2 w = 0.5 * (v_next.values[e] + v.values[e]);
        const double wn = w.norm();
        v_next.values[e] = wn >= 1e-12 * tau ? Vec2(tau * w / wn) : Vec2(0, 0);
      }
    }
    v = std::move(v_next);

    const double lambda_prev = eig.lambda;
    eig = solve(v, eig.phi);
    res.trace.push_back(eig.lambda);
    res.iterations += 1;

    // The update should not move lambda the wrong way; if it does
    // (oscillation), engage damped updates from here on.
    const double wrong_way = s * (eig.lambda - lambda_prev);
    if (wrong_way > 1e-10 * std::max(1.0, std::abs(lambda_prev))) damping = true;

    opt_res = optimality_residual(mesh, v, eig, tau, sense);
    if (std::abs(eig.lambda - lambda_prev) < opts.lambda_tol * std::abs(eig.lambda) &&
        opt_res < opts.opt_tol) {
      converged = true;
      break;
    }
  }

  const auto g = element_gradients(mesh, eig.phi);
  const double eta = kGradCutoffRel * max_norm(g);
  int small = 0;
  for (const Vec2& ge : g)
    if (ge.norm() < eta) ++small;

  res.drift = std::move(v);
  res.eigen = std::move(eig);
  res.optimality_residual = opt_res;
  res.converged = converged;
  res.small_gradient_fraction = static_cast<double>(small) / mesh.num_elements();
  return res;
}

DriftField random_drift(const Mesh& mesh, double tau, std::uint64_t seed) {
  if (tau < 0) throw std::invalid_argument("random_drift requires tau >= 0");
  std::mt19937_64 rng(seed);
  DriftField f;
  f.tau = tau;
  f.values.resize(mesh.num_elements());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    if (mesh.dim == 1) {
      f.values[e] = Vec2(next_unit(rng) < 0.5 ? -tau : tau, 0.0);
    } else {
      const double theta = 2 * std::numbers::pi * next_unit(rng);
      f.values[e] = tau * Vec2(std::cos(theta), std::sin(theta));
    }
  }
  return f;
}

SandwichReport sandwich_check(const Mesh& mesh, double tau, double beta, int n_random,
                              std::uint64_t seed) {
  if (n_random < 1) throw std::invalid_argument("sandwich_check requires n_random >= 1");
  const auto lo = extremal_drift(mesh, tau, beta, Sense::minimize);
  const auto hi = extremal_drift(mesh, tau, beta, Sense::maximize);

  SandwichReport report;
  report.lambda_min = lo.eigen.lambda;
  report.lambda_max = hi.eigen.lambda;
  const auto bc = BoundaryCondition::robin(beta);
  for (int k = 0; k < n_random; ++k) {
    const DriftField v = random_drift(mesh, tau, seed + static_cast<std::uint64_t>(k));
    const EigenResult eig = principal_eigenpair(assemble(mesh, v, bc));
    report.lambdas.push_back(eig.lambda);
    if (eig.lambda < report.lambda_min - 1e-9 || eig.lambda > report.lambda_max + 1e-9)
      report.violating_indices.push_back(k);
  }
  report.passed = report.violating_indices.empty() && lo.converged && hi.converged;
  return report;
}

}  // namespace robineig
