#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "shapelab/bessel.hpp"
#include "shapelab/disk_spectrum.hpp"

using namespace shapelab;

// Frozen from the test-side series/bisection oracle (cross-checked against
// std::cyl_bessel_j below).
constexpr double kJ01 = 2.404825557695773;
constexpr double kJ11 = 3.831705970207512;
constexpr double kJp11 = 1.841183781340660;
constexpr double kLambda1Dirichlet = 5.783185962946785;   // j01^2
constexpr double kLambdaWitness = 14.681970642123895;     // j11^2
constexpr double kLambda2Neumann = 3.389957716671890;     // jp11^2
constexpr double kWitnessTrace = -0.402759395702553;      // J0(j11)

TEST_CASE("bessel evaluation") {
  CHECK(bessel_j(0, 0.0) == 1.0);
  CHECK(bessel_j(1, 0.0) == 0.0);
  CHECK(std::abs(bessel_j(0, kJ01)) < 1e-10);

  SUBCASE("oracle root locations") {
    CHECK(oracles::root_j01() == doctest::Approx(kJ01).epsilon(1e-12));
    CHECK(oracles::root_j11() == doctest::Approx(kJ11).epsilon(1e-12));
    CHECK(oracles::root_jp11() == doctest::Approx(kJp11).epsilon(1e-9));
  }

  SUBCASE("agrees with the standard library to 1e-12 up to x = 50") {
    for (int n = 0; n <= 10; ++n)
      for (double x = 0.0; x <= 50.0; x += 0.37)
        CHECK(std::abs(bessel_j(n, x) - std::cyl_bessel_j(n, x)) < 1e-12);
  }

  SUBCASE("derivative identities") {
    for (double x : {0.5, 3.0, 11.0, 19.5, 37.0}) {
      CHECK(bessel_j_prime(0, x) == doctest::Approx(-bessel_j(1, x)).epsilon(1e-13));
      const double fd = (bessel_j(3, x + 5e-6) - bessel_j(3, x - 5e-6)) / 1e-5;
      CHECK(bessel_j_prime(3, x) == doctest::Approx(fd).epsilon(1e-7));
    }
  }
}

TEST_CASE("bessel roots") {
  CHECK(bessel_root(0, 1, RootKind::function) == doctest::Approx(kJ01).epsilon(1e-13));
  CHECK(bessel_root(1, 1, RootKind::function) == doctest::Approx(kJ11).epsilon(1e-13));
  CHECK(bessel_root(1, 1, RootKind::derivative) == doctest::Approx(kJp11).epsilon(1e-13));

  SUBCASE("tables are strictly increasing with small residuals") {
    for (int n = 0; n <= 9; ++n) {
      const BesselRootTable table = bessel_root_table(n, RootKind::function, 9);
      for (int m = 0; m + 1 < 9; ++m) CHECK(table.roots[m] < table.roots[m + 1]);
      for (int m = 0; m < 9; ++m) CHECK(std::abs(bessel_j(n, table.roots[m])) < 1e-12);
    }
  }
  SUBCASE("interlacing j_{n,m} < j_{n+1,m} < j_{n,m+1}") {
    for (int n = 0; n <= 8; ++n) {
      const auto a = bessel_root_table(n, RootKind::function, 9);
      const auto b = bessel_root_table(n + 1, RootKind::function, 9);
      for (int m = 0; m < 8; ++m) {
        CHECK(a.roots[m] < b.roots[m]);
        CHECK(b.roots[m] < a.roots[m + 1]);
      }
    }
  }
  SUBCASE("derivative roots of order zero are the order-one function roots") {
    const auto d0 = bessel_root_table(0, RootKind::derivative, 5);
    const auto f1 = bessel_root_table(1, RootKind::function, 5);
    CHECK((d0.roots - f1.roots).abs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("disk spectra") {
  SUBCASE("unit disk Dirichlet ground state") {
    const auto modes = disk_spectrum(1.0, BoundaryCondition::dirichlet, 1);
    CHECK(modes[0].lambda == doctest::Approx(kLambda1Dirichlet).epsilon(1e-14));
    CHECK(modes[0].boundary_value == 0.0);
  }
  SUBCASE("unit disk Neumann starts with the constant mode") {
    const auto modes = disk_spectrum(1.0, BoundaryCondition::neumann, 2);
    CHECK(modes[0].lambda == 0.0);
    CHECK(modes[0].boundary_flux == 0.0);
    CHECK(modes[1].lambda == doctest::Approx(kLambda2Neumann).epsilon(1e-13));
  }
  SUBCASE("eigenvalues scale as 1/R^2") {
    const auto unit_d = disk_spectrum(1.0, BoundaryCondition::dirichlet, 8);
    const auto big_d = disk_spectrum(2.0, BoundaryCondition::dirichlet, 8);
    const auto unit_n = disk_spectrum(1.0, BoundaryCondition::neumann, 8);
    const auto big_n = disk_spectrum(0.7, BoundaryCondition::neumann, 8);
    for (int i = 0; i < 8; ++i) {
      CHECK(big_d[i].lambda == doctest::Approx(unit_d[i].lambda / 4.0).epsilon(1e-12));
      if (unit_n[i].lambda > 0)
        CHECK(big_n[i].lambda == doctest::Approx(unit_n[i].lambda / 0.49).epsilon(1e-12));
    }
  }
  SUBCASE("double eigenvalues are listed twice") {
    const auto modes = disk_spectrum(1.0, BoundaryCondition::dirichlet, 3);
    CHECK(modes[1].lambda == doctest::Approx(kLambdaWitness).epsilon(1e-13));
    CHECK(modes[2].lambda == modes[1].lambda);
    CHECK(modes[1].angular_order == 1);
  }
  SUBCASE("trace conventions") {
    for (const auto& mode : disk_spectrum(1.5, BoundaryCondition::dirichlet, 6))
      CHECK(mode.boundary_value == 0.0);
    for (const auto& mode : disk_spectrum(1.5, BoundaryCondition::neumann, 6))
      CHECK(std::abs(mode.boundary_flux) < 1e-10);
  }
  SUBCASE("the Schiffer witness mode") {
    // radial Neumann mode at lambda = j11^2 with nonzero constant trace
    const auto modes = disk_spectrum(1.0, BoundaryCondition::neumann, 8);
    const DiskEigen* witness = nullptr;
    for (const auto& mode : modes)
      if (mode.angular_order == 0 && mode.radial_index == 1) witness = &mode;
    REQUIRE(witness != nullptr);
    CHECK(witness->lambda == doctest::Approx(kLambdaWitness).epsilon(1e-13));
    CHECK(bessel_j(0, witness->root) == doctest::Approx(kWitnessTrace).epsilon(1e-12));
    // L2-normalized trace of a radial Neumann mode is 1/sqrt(pi) in magnitude
    CHECK(std::abs(witness->boundary_value) ==
          doctest::Approx(1.0 / std::sqrt(M_PI)).epsilon(1e-12));
    CHECK(witness->boundary_flux == 0.0);
  }
}

TEST_CASE("maximum principle criterion") {
  CHECK(max_principle_holds(2.0, 1.0));
  CHECK_FALSE(max_principle_holds(3.0, 1.0));
  CHECK(max_principle_holds(0.0, 17.0));
  // threshold is exactly j01/R
  CHECK(max_principle_holds(kJ01 / 2.0 - 1e-9, 2.0));
  CHECK_FALSE(max_principle_holds(kJ01 / 2.0 + 1e-9, 2.0));
}

TEST_CASE("constant flux magnitude of the disk ground state") {
  // closed form j01 / (sqrt(pi) R^2), frozen from the root oracle
  CHECK(lambda_disk(1.0) == doctest::Approx(kJ01 / std::sqrt(M_PI)).epsilon(1e-12));
  CHECK(lambda_disk(1.0) == doctest::Approx(1.356777529901379).epsilon(1e-12));
  CHECK(lambda_disk(2.0) == doctest::Approx(lambda_disk(1.0) / 4.0).epsilon(1e-12));

  SUBCASE("decreasing in the radius") {
    CHECK(lambda_disk(0.5) > lambda_disk(0.75));
    CHECK(lambda_disk(0.75) > lambda_disk(1.0));
    CHECK(lambda_disk(1.0) > lambda_disk(1.25));
  }
}
