#include <doctest.h>

#include <random>
#include <sstream>

#include <Eigen/SparseCholesky>

#include "robineig/assembly.hpp"
#include "robineig/eigensolver.hpp"
#include "robineig/extremal.hpp"
#include "robineig/io.hpp"
#include "oracles.hpp"

using namespace robineig;

namespace {

Eigen::VectorXd deterministic_vector(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i)
    x[i] = 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
  return x;
}

// Energy of the bilinear form reconstructed from element loops,
// independently of the assembled matrix.
double energy_by_element_loops(const Mesh& mesh, const DriftField& v, double beta,
                               const Eigen::VectorXd& x) {
  double grad2 = 0, convect = 0, boundary = 0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const double area = element_area(mesh, e);
    const Vec2 g = p1_gradient(mesh, x, e);
    grad2 += area * g.squaredNorm();
    double xbar = 0;
    const int k = mesh.nodes_per_element();
    for (int a = 0; a < k; ++a) xbar += x[mesh.elements[e][a]];
    xbar /= k;
    convect += area * v.values[e].dot(g) * xbar;
  }
  for (const auto& be : mesh.boundary_edges) {
    if (mesh.dim == 1)
      boundary += x[be.nodes[0]] * x[be.nodes[0]];
    else
      boundary += be.length / 2 *
                  (x[be.nodes[0]] * x[be.nodes[0]] + x[be.nodes[1]] * x[be.nodes[1]]);
  }
  return grad2 + convect + beta * boundary;
}

}  // namespace

TEST_CASE("1d Robin operator is tridiagonal with beta on the corners") {
  const Mesh m = triangulate(DomainSpec::interval(1), 0.5);  // 4 cells of length 0.5
  const auto pair = assemble(m, zero_drift(m), BoundaryCondition::robin(1.0));
  const Eigen::MatrixXd A = Eigen::MatrixXd(pair.A);
  const double k = 1.0 / 0.5;
  CHECK(A(0, 0) == doctest::Approx(k + 1.0));
  CHECK(A(4, 4) == doctest::Approx(k + 1.0));
  CHECK(A(1, 1) == doctest::Approx(2 * k));
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      if (std::abs(i - j) > 1) CHECK(A(i, j) == 0.0);
}

TEST_CASE("Neumann operator annihilates constants, drift included") {
  const Mesh m = triangulate(DomainSpec::ellipse(2, 0.5), 0.15);
  const auto drift = random_drift(m, 1.5, 99);
  const auto pair = assemble(m, drift, BoundaryCondition::neumann());
  const Eigen::VectorXd r = pair.A * Eigen::VectorXd::Ones(pair.n());
  CHECK(r.lpNorm<Eigen::Infinity>() < 1e-10);
}

TEST_CASE("operator is symmetric without drift") {
  const Mesh m = triangulate(DomainSpec::disk(1), 0.15);
  for (auto bc : {BoundaryCondition::robin(2.0), BoundaryCondition::neumann()}) {
    const auto pair = assemble(m, zero_drift(m), bc);
    const SpMat diff = SpMat(pair.A.transpose()) - pair.A;
    CHECK(diff.coeffs().cwiseAbs().maxCoeff() < 1e-12 * pair.A.coeffs().cwiseAbs().maxCoeff());
  }
}

TEST_CASE("mass matrix is SPD: Gershgorin plus probe factorization") {
  const Mesh m = triangulate(DomainSpec::stadium(2, 0.5), 0.12);
  const auto pair = assemble(m, zero_drift(m), BoundaryCondition::robin(1.0));
  const SpMat diff = SpMat(pair.M.transpose()) - pair.M;
  CHECK(diff.coeffs().cwiseAbs().maxCoeff() == 0.0);
  for (int col = 0; col < pair.M.outerSize(); ++col) {
    double diag = 0, off = 0;
    for (SpMat::InnerIterator it(pair.M, col); it; ++it) {
      if (it.row() == it.col())
        diag = it.value();
      else
        off += std::abs(it.value());
    }
    CHECK(diag - off >= -1e-15);  // weak diagonal dominance
  }
  Eigen::SimplicialLLT<SpMat> llt(pair.M);
  CHECK(llt.info() == Eigen::Success);
}

TEST_CASE("energy identity against element-loop reconstruction") {
  const Mesh m = triangulate(DomainSpec::disk(1), 0.12);
  const double beta = 2.5;
  const auto v = radial_drift(m, 1.0, +1);
  const auto pair = assemble(m, v, BoundaryCondition::robin(beta));
  for (unsigned seed : {1u, 2u, 3u}) {
    const Eigen::VectorXd x = deterministic_vector(pair.n(), seed);
    const double quadratic = x.dot(pair.A * x);
    const double loops = energy_by_element_loops(m, v, beta, x);
    CHECK(quadratic == doctest::Approx(loops).epsilon(1e-10));
  }
}

TEST_CASE("convection part obeys the Cauchy-Schwarz bound") {
  const Mesh m = triangulate(DomainSpec::disk(1), 0.12);
  const auto v = random_drift(m, 2.0, 7);
  const SpMat C = convection_matrix(m, v);
  const auto pair = assemble(m, zero_drift(m), BoundaryCondition::neumann());
  for (unsigned seed : {4u, 5u}) {
    const Eigen::VectorXd x = deterministic_vector(m.num_nodes(), seed);
    double grad_l2 = 0;
    for (int e = 0; e < m.num_elements(); ++e)
      grad_l2 += element_area(m, e) * p1_gradient(m, x, e).squaredNorm();
    const double lhs = x.dot(C * x);
    const double rhs = 2.0 * std::sqrt(x.dot(pair.M * x)) * std::sqrt(grad_l2);
    CHECK(lhs <= rhs + 1e-12);
  }
}

TEST_CASE("assembled form is monotone in beta") {
  const Mesh m = triangulate(DomainSpec::annulus(0.5, 1), 0.12);
  const auto parts = assemble_parts(m, zero_drift(m));
  const auto p1 = operator_from_parts(m, parts, BoundaryCondition::robin(1.0));
  const auto p2 = operator_from_parts(m, parts, BoundaryCondition::robin(3.0));
  for (unsigned seed : {8u, 9u}) {
    const Eigen::VectorXd x = deterministic_vector(p1.n(), seed);
    const double diff = x.dot(p2.A * x) - x.dot(p1.A * x);
    double boundary = 0;
    for (const auto& be : m.boundary_edges)
      boundary += be.length / 2 *
                  (x[be.nodes[0]] * x[be.nodes[0]] + x[be.nodes[1]] * x[be.nodes[1]]);
    CHECK(diff >= 0);
    CHECK(diff == doctest::Approx((3.0 - 1.0) * boundary).epsilon(1e-10));
  }
}

TEST_CASE("smallest Dirichlet eigenvalue on the disk matches the Bessel oracle") {
  const double oracle = std::pow(oracles::bessel_j0_first_zero(), 2);
  CHECK(oracle == doctest::Approx(5.783185962946785).epsilon(1e-12));
  const Mesh m = triangulate(DomainSpec::disk(1), 0.05);
  const auto pair = assemble(m, zero_drift(m), BoundaryCondition::dirichlet());
  CHECK(static_cast<int>(pair.dof_to_node.size()) < m.num_nodes());
  const auto res = principal_eigenpair(pair);
  CHECK(std::abs(res.lambda - oracle) / oracle < 0.005);
}

TEST_CASE("apply_operator consistency and errors") {
  const Mesh m = triangulate(DomainSpec::interval(1), 0.1);
  const auto pair = assemble(m, zero_drift(m), BoundaryCondition::robin(1.0));
  const Eigen::VectorXd x = deterministic_vector(pair.n(), 11);
  CHECK((apply_operator(pair, x) - pair.A * x).norm() == 0.0);
  CHECK_THROWS_AS(apply_operator(pair, Eigen::VectorXd::Ones(3)), std::invalid_argument);

  // converged eigenpair: A phi ~ lambda M phi
  const auto res = principal_eigenpair(pair);
  const Eigen::VectorXd defect =
      apply_operator(pair, res.phi) - res.lambda * (pair.M * res.phi);
  CHECK(defect.norm() / (pair.M * res.phi).norm() <= res.tol_used);
}

TEST_CASE("assembly input validation") {
  const Mesh m = triangulate(DomainSpec::disk(1), 0.2);
  DriftField bad;
  bad.tau = 1;
  bad.values.assign(3, Vec2(0, 0));
  CHECK_THROWS_AS(assemble(m, bad, BoundaryCondition::robin(1.0)), std::invalid_argument);
  CHECK_THROWS_AS(BoundaryCondition::robin(0.0), std::invalid_argument);
  CHECK_THROWS_AS(BoundaryCondition::robin(-1.0), std::invalid_argument);

  DriftField over;
  over.tau = 1;
  over.values.assign(m.num_elements(), Vec2(2.0, 0));
  CHECK_THROWS_AS(assemble(m, over, BoundaryCondition::robin(1.0)), std::invalid_argument);
}

TEST_CASE("coordinate matrix dump") {
  const Mesh m = triangulate(DomainSpec::interval(1), 0.25);
  const auto pair = assemble(m, zero_drift(m), BoundaryCondition::robin(1.0));
  const std::string dump = matrix_to_coord(pair.A);
  std::istringstream is(dump);
  int count = 0, r, c;
  double val;
  while (is >> r >> c >> val) {
    CHECK(r >= 0);
    CHECK(c >= 0);
    ++count;
  }
  CHECK(count == pair.A.nonZeros());
}
