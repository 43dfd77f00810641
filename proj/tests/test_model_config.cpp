#include <catch_amalgamated.hpp>

#include "bresse/model_config.hpp"

using namespace bresse;
using Catch::Approx;

namespace {

PhysicalParams ones() { return PhysicalParams{}; }

PhysicalParams thermal(double rho2) {
  PhysicalParams p;
  p.thermal = true;
  p.rho3 = 1.0;
  p.tau = 2.0;
  p.delta = 1.0;
  p.rho2 = rho2;
  p.k2 = 1.0;
  p.beta = 1.0;
  return p;
}

} // namespace

TEST_CASE("wave speeds") {
  auto s = wave_speeds(ones());
  CHECK(s == std::array<double, 3>{1, 1, 1});
  PhysicalParams p;
  p.k2 = 2;
  CHECK(wave_speeds(p) == std::array<double, 3>{1, 2, 1});
  p.rho1 = 2; p.k1 = 4; p.rho2 = 3; p.k2 = 6; p.k3 = 8;
  CHECK(wave_speeds(p) == std::array<double, 3>{2, 2, 4});
}

TEST_CASE("equal speed condition") {
  CHECK(equal_speed_condition(ones()));
  PhysicalParams p;
  p.k2 = 2;
  CHECK_FALSE(equal_speed_condition(p));
  p = ones();
  p.rho1 = 1; p.k1 = 2; p.rho2 = 3; p.k2 = 6; p.k3 = 2;
  CHECK(equal_speed_condition(p));
}

TEST_CASE("stability number") {
  CHECK(stability_number(thermal(3.0)) == Approx(0.0).margin(1e-15));
  PhysicalParams p = thermal(3.0);
  p.delta = 0.0;
  p.tau = 0.0;
  CHECK(stability_number(p) == Approx(-(p.rho1 / (p.rho3 * p.k1)) * (p.rho2 - p.k2 * p.rho1 / p.k1)));
  p = thermal(1.0);
  p.tau = 1.0;
  CHECK(stability_number(p) == Approx(-1.0));
  CHECK_THROWS(stability_number(ones()));
}

TEST_CASE("elastic decision table") {
  KernelSpec k(0.5, 1.0);
  CHECK(classify_regime(ones(), k).regime == Regime::Exponential);
  PhysicalParams p;
  p.k2 = 2;
  CHECK(classify_regime(p, k).regime == Regime::PolyOne);
  p.k3 = 2;
  CHECK(classify_regime(p, k).regime == Regime::PolyHalf);
  p = ones();
  p.k3 = 2;
  CHECK(classify_regime(p, k).regime == Regime::Uncovered);
  CHECK(classify_regime(ones(), k).theorem.find("3.5") != std::string::npos);
}

TEST_CASE("thermal decision table") {
  KernelSpec k(0.5, 1.0);
  auto r = classify_regime(thermal(3.0), k);
  CHECK(r.chi0_zero);
  CHECK(r.regime == Regime::Exponential);
  CHECK(classify_regime(thermal(3.5), k).regime == Regime::PolyOne);
  PhysicalParams p = thermal(3.5);
  p.k3 = 2.0;
  CHECK(classify_regime(p, k).regime == Regime::PolyHalf);
  p = thermal(3.0);
  p.k3 = 2.0;
  CHECK(classify_regime(p, k).regime == Regime::Uncovered);
}

TEST_CASE("classification is scale invariant") {
  KernelSpec k(0.1, 1.0);
  for (double s : {0.5, 2.0, 7.0}) {
    for (double k2 : {1.0, 2.0}) {
      for (double k3 : {1.0, 3.0}) {
        PhysicalParams p;
        p.k2 = k2;
        p.k3 = k3;
        PhysicalParams q = p;
        q.rho1 *= s; q.rho2 *= s; q.k1 *= s; q.k2 *= s; q.k3 *= s;
        CHECK(classify_regime(p, k).regime == classify_regime(q, k).regime);
      }
    }
  }
}

TEST_CASE("hypothesis failure propagates") {
  PhysicalParams p;
  CHECK_THROWS(classify_regime(p, KernelSpec(2.0, 1.0)));
}

TEST_CASE("near-degenerate flag") {
  PhysicalParams p;
  p.k2 = 1.0 + 1e-9;
  auto r = classify_regime(p, KernelSpec(0.5, 1.0));
  CHECK(r.regime == Regime::PolyOne);
  CHECK(r.near_degenerate);
  p.k2 = 1.0 + 1e-14;
  CHECK(classify_regime(p, KernelSpec(0.5, 1.0)).regime == Regime::Exponential);
}

TEST_CASE("decoupled thermal case uses the thermal table") {
  PhysicalParams p = thermal(3.0);
  p.delta = 0.0;
  auto r = classify_regime(p, KernelSpec(0.5, 1.0));
  CHECK(r.decoupled);
  CHECK(r.chi0 == Approx(2.0));
  CHECK(r.regime == Regime::PolyOne);
}

TEST_CASE("boundary condition variants") {
  CHECK_NOTHROW(check_bc(ones(), BoundaryCondition::DDD));
  CHECK_THROWS(check_bc(ones(), BoundaryCondition::DDDD));
  CHECK_THROWS(check_bc(thermal(3.0), BoundaryCondition::DDD));
  CHECK(parse_bc("dnnd") == BoundaryCondition::DNND);
  CHECK_THROWS(parse_bc("nnn"));
}

TEST_CASE("undamped limits are not covered") {
  PhysicalParams p;
  p.ell = 1.0;
  CHECK(classify_regime(p, {0.0, 1.0}).regime == Regime::Uncovered);
  p.thermal = true;
  p.rho3 = p.tau = 1.0;
  p.delta = 0.0;
  p.beta = 0.0;
  CHECK_NOTHROW(p.validate());
  CHECK(classify_regime(p, {0.5, 1.0}).regime == Regime::Uncovered);
  p.beta = -1.0;
  CHECK_THROWS(p.validate());
}
