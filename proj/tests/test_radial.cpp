#include <doctest.h>

#include <cmath>
#include <numbers>

#include "robineig/eigensolver.hpp"
#include "robineig/radial.hpp"
#include "oracles.hpp"

using namespace robineig;

namespace {
constexpr double kPi = std::numbers::pi;

RadialProblem make(int d, double R, double tau, int sign, BoundaryCondition bc, int n = 4096) {
  RadialProblem p;
  p.d = d;
  p.R = R;
  p.tau = tau;
  p.sign = sign;
  p.bc = bc;
  p.n = n;
  return p;
}
}  // namespace

TEST_CASE("radial solver against independent oracles") {
  SUBCASE("d=1 Robin, tau=0: transcendental root") {
    const auto r = radial_principal(make(1, 1, 0, +1, BoundaryCondition::robin(1.0)));
    CHECK(std::abs(r.lambda - 0.740173884394967) < 1e-5);
    CHECK(r.err_estimate < 1e-5);
  }
  SUBCASE("d=2 Dirichlet: first Bessel zero squared") {
    const auto r = radial_principal(make(2, 1, 0, +1, BoundaryCondition::dirichlet()));
    const double oracle = std::pow(oracles::bessel_j0_first_zero(), 2);
    CHECK(std::abs(r.lambda - oracle) < 1e-4);
  }
  SUBCASE("d=1, tau=2, outward, Dirichlet: principal eigenvalue is exactly 1") {
    // The eigenfunction is e^x (1 - x); cross-checked by RK4 shooting.
    const double shot = oracles::shooting_eigenvalue_1d(2.0, 1.0, true, 0.0, 0.5, 1.5);
    CHECK(shot == doctest::Approx(1.0).epsilon(1e-9));
    const auto r = radial_principal(make(1, 1, 2, +1, BoundaryCondition::dirichlet()));
    CHECK(std::abs(r.lambda - 1.0) < 1e-4);
  }
  SUBCASE("d=1 Robin with drift against shooting") {
    const double shot = oracles::shooting_eigenvalue_1d(1.0, 1.0, false, 2.0, 1e-6, 4.0);
    const auto r = radial_principal(make(1, 1, 1, +1, BoundaryCondition::robin(2.0)));
    CHECK(std::abs(r.lambda - shot) < 1e-5);
  }
}

TEST_CASE("transcendental_reference") {
  CHECK(transcendental_reference(1.0, 1.0) == doctest::Approx(0.740173884394967).epsilon(1e-12));
  CHECK(std::abs(transcendental_reference(1.0, 1e6) - kPi * kPi / 4) < 1e-4);
  CHECK(transcendental_reference(1.0, 1e-6) <= 2e-6);
  // agrees with the test-side bisection for another radius
  CHECK(transcendental_reference(2.0, 0.7) ==
        doctest::Approx(oracles::robin_interval_root(2.0, 0.7)).epsilon(1e-12));
  CHECK_THROWS_AS(transcendental_reference(-1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(transcendental_reference(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("outward-drift Robin eigenfunctions are radially nonincreasing") {
  for (double tau : {0.0, 1.0, 3.0}) {
    for (double beta : {0.5, 5.0}) {
      const auto r = radial_principal(make(2, 1, tau, +1, BoundaryCondition::robin(beta), 1024));
      CHECK(r.monotone_violation <= 1e-8);
      CHECK(r.phi.maxCoeff() == 1.0);
    }
  }
}

TEST_CASE("radial beta-monotonicity and limits") {
  double prev = -1;
  for (double beta : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0}) {
    const auto r = radial_principal(make(2, 1, 1, +1, BoundaryCondition::robin(beta), 1024));
    CHECK(r.lambda > prev);
    prev = r.lambda;
  }
  const double lamD = radial_principal(make(2, 1, 1, +1, BoundaryCondition::dirichlet(), 1024)).lambda;
  const double lam_small =
      radial_principal(make(2, 1, 1, +1, BoundaryCondition::robin(1e-3), 1024)).lambda;
  const double lam_large =
      radial_principal(make(2, 1, 1, +1, BoundaryCondition::robin(1e3), 1024)).lambda;
  CHECK(lam_small <= 1e-2);
  CHECK(lam_large < lamD);
  CHECK(std::abs(lam_large - lamD) / lamD <= 0.02);
}

TEST_CASE("outward drift never raises the ball eigenvalue as tau grows") {
  double prev = std::numeric_limits<double>::infinity();
  for (double tau : {0.0, 0.5, 1.0, 2.0, 4.0}) {
    const auto r = radial_principal(make(2, 1, tau, +1, BoundaryCondition::robin(1.0), 1024));
    CHECK(r.lambda <= prev + 1e-12);
    prev = r.lambda;
  }
}

TEST_CASE("cross-solver agreement: 2d FEM vs radial reference on the disk") {
  const double h = 0.05;
  const Mesh m = triangulate(DomainSpec::disk(1), h);
  for (double tau : {0.0, 1.0}) {
    for (double beta : {1.0, 10.0}) {
      const auto fem = principal_eigenpair(
          assemble(m, radial_drift(m, tau, +1), BoundaryCondition::robin(beta)));
      const auto ref = radial_principal(make(2, 1, tau, +1, BoundaryCondition::robin(beta)));
      CHECK(std::abs(fem.lambda - ref.lambda) <= 3 * m.h * m.h * ref.lambda);
    }
  }
}

TEST_CASE("radial input validation") {
  CHECK_THROWS_AS(radial_principal(make(0, 1, 0, +1, BoundaryCondition::robin(1.0))),
                  std::invalid_argument);
  CHECK_THROWS_AS(radial_principal(make(2, -1, 0, +1, BoundaryCondition::robin(1.0))),
                  std::invalid_argument);
  CHECK_THROWS_AS(radial_principal(make(2, 1, -1, +1, BoundaryCondition::robin(1.0))),
                  std::invalid_argument);
  CHECK_THROWS_AS(radial_principal(make(2, 1, 0, 2, BoundaryCondition::robin(1.0))),
                  std::invalid_argument);
  CHECK_THROWS_AS(radial_principal(make(2, 1, 0, +1, BoundaryCondition::neumann())),
                  std::invalid_argument);
  CHECK_THROWS_AS(radial_principal(make(2, 1, 0, +1, BoundaryCondition::robin(1.0), 4)),
                  std::invalid_argument);
}
