#include "robineig/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <sstream>
#include <stdexcept>

namespace robineig {

namespace {

// Index-ordered fan-out of independent solves; results are collected in
// input order so outputs stay deterministic.
template <typename F>
auto parallel_map(int count, F&& task) {
  using R = decltype(task(0));
  std::vector<std::future<R>> futures;
  futures.reserve(count);
  for (int i = 0; i < count; ++i)
    futures.push_back(std::async(std::launch::async, task, i));
  std::vector<R> out;
  out.reserve(count);
  for (auto& f : futures) out.push_back(f.get());
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Order p solving (h1^p - h2^p)/(h2^p - h3^p) = (l1-l2)/(l2-l3) by
// bisection; handles non-geometric h lists.
double fit_order(double h1, double h2, double h3, double l1, double l2, double l3) {
  const double d12 = l1 - l2, d23 = l2 - l3;
  if (d12 == 0 || d23 == 0 || d12 * d23 < 0) return std::nan("");
  const double target = d12 / d23;
  auto f = [&](double p) {
    return (std::pow(h1, p) - std::pow(h2, p)) / (std::pow(h2, p) - std::pow(h3, p)) - target;
  };
  double lo = 0.1, hi = 8.0;
  if (f(lo) * f(hi) > 0) return std::nan("");
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(lo) * f(mid) <= 0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

DriftField DriftSpec::materialize(const Mesh& mesh) const {
  switch (kind) {
    case Kind::zero: return zero_drift(mesh);
    case Kind::radial: return radial_drift(mesh, tau, sign);
    case Kind::random: return random_drift(mesh, tau, seed);
  }
  throw std::logic_error("unreachable");
}

std::string DriftSpec::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::zero: os << "zero"; break;
    case Kind::radial: os << (sign > 0 ? "radial:" : "radial-in:") << tau; break;
    case Kind::random: os << "random:" << tau << ",seed=" << seed; break;
  }
  return os.str();
}

SweepTable beta_sweep(const DomainSpec& domain, const DriftSpec& drift,
                      std::vector<double> beta_grid, double h) {
  if (beta_grid.empty()) throw std::invalid_argument("beta grid must be nonempty");
  if (!std::is_sorted(beta_grid.begin(), beta_grid.end()))
    throw std::invalid_argument("beta grid must be sorted");
  if (beta_grid.front() <= 0) throw std::invalid_argument("beta grid must be positive");

  const Mesh mesh = triangulate(domain, h);
  const DriftField v = drift.materialize(mesh);
  const AssemblyParts parts = assemble_parts(mesh, v);

  SweepTable table;
  table.domain = domain.name();
  table.drift = drift.describe();
  table.h = h;
  table.h_actual = mesh.h;

  table.rows = parallel_map(static_cast<int>(beta_grid.size()), [&](int i) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto pair =
        operator_from_parts(mesh, parts, BoundaryCondition::robin(beta_grid[i]));
    const EigenResult res = principal_eigenpair(pair);
    SweepRow row;
    row.beta = beta_grid[i];
    row.lambda = res.lambda;
    row.residual = res.residual;
    row.iterations = res.iterations;
    row.runtime_sec = seconds_since(t0);
    return row;
  });

  table.passed = true;
  for (size_t i = 0; i + 1 < table.rows.size(); ++i) {
    if (table.rows[i + 1].lambda <= table.rows[i].lambda + 1e-10) {
      table.passed = false;
      std::ostringstream os;
      os << "monotonicity violation between beta=" << table.rows[i].beta << " and beta="
         << table.rows[i + 1].beta;
      table.failure = os.str();
      break;
    }
  }
  return table;
}

LimitReport limit_check(const DomainSpec& domain, const DriftSpec& drift, double h) {
  const Mesh mesh = triangulate(domain, h);
  const DriftField v = drift.materialize(mesh);
  const AssemblyParts parts = assemble_parts(mesh, v);

  LimitReport rep;
  rep.domain = domain.name();
  rep.drift = drift.describe();
  rep.h = h;

  rep.lambda_dirichlet =
      principal_eigenpair(operator_from_parts(mesh, parts, BoundaryCondition::dirichlet()))
          .lambda;
  auto robin_lambda = [&](double beta) {
    return principal_eigenpair(
               operator_from_parts(mesh, parts, BoundaryCondition::robin(beta)))
        .lambda;
  };
  rep.lambda_small = robin_lambda(1e-3);
  rep.lambda_mid = robin_lambda(1.0);
  rep.lambda_large = robin_lambda(1e3);

  rep.small_beta_ok = rep.lambda_small <= 1e-2;
  rep.below_dirichlet_ok = rep.lambda_small < rep.lambda_dirichlet &&
                           rep.lambda_mid < rep.lambda_dirichlet &&
                           rep.lambda_large < rep.lambda_dirichlet;
  rep.large_beta_ok =
      std::abs(rep.lambda_large - rep.lambda_dirichlet) / rep.lambda_dirichlet <= 0.02;
  rep.passed = rep.small_beta_ok && rep.below_dirichlet_ok && rep.large_beta_ok;
  return rep;
}

FKReport faber_krahn(const DomainSpec& domain, double tau, std::vector<double> beta_grid,
                     double h, int n_random, std::uint64_t seed) {
  if (domain.is_ball())
    throw std::invalid_argument("faber_krahn requires a non-ball domain");
  if (tau < 0) throw std::invalid_argument("faber_krahn requires tau >= 0");
  if (beta_grid.empty() || !std::is_sorted(beta_grid.begin(), beta_grid.end()) ||
      beta_grid.front() <= 0)
    throw std::invalid_argument("beta grid must be positive and sorted");

  const DomainSpec ball = equimeasurable_ball(domain);
  const Mesh mesh = triangulate(domain, h);

  FKReport rep;
  rep.domain = domain.name();
  rep.ball = ball.name();
  rep.tau = tau;
  rep.h = h;
  rep.n_random = n_random;
  rep.seed = seed;

  bool all_converged = true;
  rep.rows = parallel_map(static_cast<int>(beta_grid.size()), [&](int i) {
    const double beta = beta_grid[i];
    const ExtremalResult ext = extremal_drift(mesh, tau, beta, Sense::minimize);

    RadialProblem rp;
    rp.d = 2;
    rp.R = ball.p1;
    rp.tau = tau;
    rp.sign = +1;
    rp.bc = BoundaryCondition::robin(beta);
    const RadialResult ref = radial_principal(rp);

    FKRow row;
    row.beta = beta;
    row.lambda_min = ext.eigen.lambda;
    row.lambda_ref = ref.lambda;
    row.margin = ext.eigen.lambda - ref.lambda;
    row.error_bound = 3 * mesh.h * mesh.h * ext.eigen.lambda + ref.err_estimate;
    row.margin_positive = row.margin > row.error_bound;
    row.extremal_iterations = ext.iterations;
    if (!ext.converged) row.extremal_iterations = -ext.iterations;

    const auto bc = BoundaryCondition::robin(beta);
    for (int k = 0; k < n_random; ++k) {
      const DriftField v = random_drift(
          mesh, tau, seed + 1000 * static_cast<std::uint64_t>(i) + static_cast<std::uint64_t>(k));
      const double lam = principal_eigenpair(assemble(mesh, v, bc)).lambda;
      if (lam < ext.eigen.lambda - 1e-9) row.sanity_violations += 1;
    }
    return row;
  });
  for (const auto& row : rep.rows)
    if (row.extremal_iterations < 0) all_converged = false;

  // beta0: first grid beta from which the margin stays above the error
  // bound for all larger grid betas.
  for (size_t i = 0; i < rep.rows.size(); ++i) {
    bool persists = true;
    for (size_t j = i; j < rep.rows.size(); ++j) persists &= rep.rows[j].margin_positive;
    if (persists) {
      rep.beta0 = rep.rows[i].beta;
      double eps = rep.rows[i].margin;
      for (size_t j = i; j < rep.rows.size(); ++j) eps = std::min(eps, rep.rows[j].margin);
      rep.epsilon = eps;
      break;
    }
  }

  int violations = 0;
  for (const auto& row : rep.rows) violations += row.sanity_violations;
  const bool contradiction =
      !rep.rows.empty() && rep.rows.back().margin < -rep.rows.back().error_bound;
  rep.passed = all_converged && violations == 0 && !contradiction;
  if (!all_converged) rep.failure = "extremal iteration did not converge";
  else if (violations > 0) rep.failure = "random drift fell below the extremal minimum";
  else if (contradiction) rep.failure = "negative margin beyond error bound at the largest beta";
  return rep;
}

ConvergenceTable mesh_convergence(const DomainSpec& domain, const DriftSpec& drift,
                                  BoundaryCondition bc, std::vector<double> h_list) {
  if (h_list.size() < 3) throw std::invalid_argument("need at least 3 mesh sizes");
  for (size_t i = 0; i + 1 < h_list.size(); ++i)
    if (h_list[i + 1] >= h_list[i])
      throw std::invalid_argument("h list must be strictly decreasing");

  ConvergenceTable table;
  table.domain = domain.name();
  table.drift = drift.describe();
  table.bc = bc.kind == BCKind::robin
                 ? "robin"
                 : (bc.kind == BCKind::dirichlet ? "dirichlet" : "neumann");

  table.rows = parallel_map(static_cast<int>(h_list.size()), [&](int i) {
    const Mesh mesh = triangulate(domain, h_list[i]);
    const DriftField v = drift.materialize(mesh);
    const EigenResult res = principal_eigenpair(assemble(mesh, v, bc));
    return ConvergenceRow{h_list[i], mesh.h, res.lambda};
  });

  const size_t k = table.rows.size();
  const auto& r1 = table.rows[k - 3];
  const auto& r2 = table.rows[k - 2];
  const auto& r3 = table.rows[k - 1];
  table.fitted_order = fit_order(r1.h, r2.h, r3.h, r1.lambda, r2.lambda, r3.lambda);
  const double p = std::isnan(table.fitted_order) ? 2.0 : table.fitted_order;
  const double factor = std::pow(r2.h / r3.h, p) - 1;
  table.lambda_extrapolated = r3.lambda + (r3.lambda - r2.lambda) / factor;
  table.passed = !std::isnan(table.fitted_order) && table.fitted_order >= 1.8;
  return table;
}

}  // namespace robineig
