#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "bresse/characteristic.hpp"
#include "oracles.hpp"

using namespace bresse;
using Catch::Approx;

namespace {

PhysicalParams timo() {
  PhysicalParams p;
  p.timoshenko = true;
  p.ell = 0.0;
  p.k2 = 2.0;
  return p;
}

const KernelSpec kHalf(0.5, 1.0);

bool close(cplx a, cplx b, double rel) { return std::abs(a - b) <= rel * std::abs(b); }

std::vector<cplx> random_lambdas(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> re(-1.0, 0.0), im(1.0, 100.0);
  std::vector<cplx> v;
  for (int i = 0; i < n; ++i)
    v.emplace_back(re(rng), im(rng));
  return v;
}

} // namespace

// high-precision reference values (50 digits, rounded)
TEST_CASE("frozen values at i pi") {
  auto c = char_point(timo(), kHalf, cplx(0.0, M_PI));
  CHECK(close(c.k2_low, {1.9540001658248123838, 0.14451274111111812121}, 1e-13));
  CHECK(close(c.r1, {0.016104349136263007807, 3.2776918959406647466}, 1e-12));
  CHECK(close(c.r3, {0.0652417606628282576, 2.0382230657978956694}, 1e-12));
  CHECK(close(c.f1, {0.77960803666808382825, -18.751066807441879825}, 1e-11));
  CHECK(close(c.f3, {0.27215777565007785209, 1.7732972835810128426}, 1e-11));
  CHECK(close(c.detM, {24.178152884793579969, 0.46570470869605230438}, 1e-10));
  CHECK(close(c.F, {-6.0445382211983949922, -0.1164261771740130761}, 1e-10));
  CHECK_FALSE(c.near_branch_cut);
  CHECK(c.speed_sign == -1);
}

TEST_CASE("k2 low against quadrature") {
  for (cplx lam : {cplx(0.0, M_PI), cplx(-0.5, 7.0), cplx(0.3, 40.0)}) {
    auto c = char_point(timo(), kHalf, lam);
    double S = std::log(1e16) / (kHalf.c + lam.real());
    cplx q = oracle::integrate_complex([&](double s) { return evaluate(kHalf, s) * std::exp(-lam * s); }, 0.0, S);
    CHECK(close(c.k2_low, 2.0 - q, 1e-10));
  }
}

TEST_CASE("determinant identity") {
  PhysicalParams p = timo();
  for (cplx lam : random_lambdas(100, 11)) {
    auto c = char_point(p, kHalf, lam);
    CHECK(std::abs(c.detM + 4.0 * p.rho1 * c.F) <= 1e-8 * (1.0 + std::abs(c.detM)));
    Eigen::Matrix4cd M;
    cplx e1 = std::exp(c.r1), e1m = std::exp(-c.r1), e3 = std::exp(c.r3), e3m = std::exp(-c.r3);
    M << 1.0, 1.0, 1.0, 1.0, e1, e1m, e3, e3m, c.f1, -c.f1, c.f3, -c.f3, c.f1 * e1, -c.f1 * e1m,
        c.f3 * e3, -c.f3 * e3m;
    cplx d = oracle::det4(M);
    CHECK(std::abs(d + 4.0 * p.rho1 * c.F) <= 1e-8 * (1.0 + std::abs(d)));
    CHECK(std::abs(c.F_scaled * std::pow(lam, 4) * std::exp(std::abs(c.r1.real()) + std::abs(c.r3.real())) - c.F) <=
          1e-10 * std::abs(c.F));
  }
  // a second parameter set with the other speed ordering
  PhysicalParams q = timo();
  q.k2 = 0.25;
  q.rho1 = 2.0;
  for (cplx lam : random_lambdas(20, 12)) {
    auto c = char_point(q, kHalf, lam);
    CHECK(c.speed_sign == 1);
    CHECK(std::abs(c.detM + 4.0 * q.rho1 * c.F) <= 1e-8 * (1.0 + std::abs(c.detM)));
  }
}

TEST_CASE("closed forms for f") {
  PhysicalParams p = timo();
  for (cplx lam : random_lambdas(50, 13)) {
    auto c = char_point(p, kHalf, lam);
    CHECK(close(c.f1, f_direct(p, c.k2_low, lam, c.r1), 1e-10));
    CHECK(close(c.f3, f_direct(p, c.k2_low, lam, c.r3), 1e-10));
  }
}

TEST_CASE("square identities for f1 and f3") {
  PhysicalParams p = timo();
  for (cplx lam : random_lambdas(50, 14)) {
    auto c = char_point(p, kHalf, lam);
    cplx A = p.rho2 / c.k2_low;
    double B = p.rho1 / p.k1;
    cplx l2 = lam * lam, l4 = l2 * l2, l6 = l4 * l2;
    cplx root = std::sqrt(p.rho1 * p.rho2 / (p.k1 * c.k2_low) * (1.0 + p.k1 / (p.rho2 * l2)));
    // sign of the principal root fixed by the product r1 r3 / lambda^2
    if (std::abs(root - c.sqrt_term) > std::abs(root + c.sqrt_term))
      root = -root;
    cplx base = l6 * B * (B - A) * (B - A) - l4 * (p.rho1 / c.k2_low) * (3.0 * B - A);
    cplx plus = base + 2.0 * l4 * (p.rho1 / c.k2_low) * root;
    cplx minus = base - 2.0 * l4 * (p.rho1 / c.k2_low) * root;
    CHECK(close((c.f1 + c.f3) * (c.f1 + c.f3), plus, 1e-9));
    CHECK(close((c.f1 - c.f3) * (c.f1 - c.f3), minus, 1e-9));
  }
}

TEST_CASE("elementary symmetric relations") {
  PhysicalParams p = timo();
  for (cplx lam : random_lambdas(50, 15)) {
    auto c = char_point(p, kHalf, lam);
    cplx l2 = lam * lam;
    cplx r1s = c.r1 * c.r1, r3s = c.r3 * c.r3;
    CHECK(close(r1s + r3s, (p.rho2 / c.k2_low + p.rho1 / p.k1) * l2, 1e-10));
    CHECK(close(r1s * r3s, p.rho1 * p.rho2 / (p.k1 * c.k2_low) * l2 * (l2 + p.k1 / p.rho2), 1e-10));
  }
}

TEST_CASE("conjugate symmetry") {
  for (cplx lam : random_lambdas(20, 16)) {
    auto a = char_point(timo(), kHalf, lam);
    auto b = char_point(timo(), kHalf, std::conj(lam));
    CHECK(close(b.F, std::conj(a.F), 1e-10));
  }
}

TEST_CASE("large frequency expansion of 1/k2 low") {
  PhysicalParams p = timo();
  auto C = [&](double t) {
    cplx lam(0.0, t);
    auto c = char_point(p, kHalf, lam);
    cplx e = 1.0 / c.k2_low - 1.0 / p.k2 - evaluate(kHalf, 0.0) / (p.k2 * p.k2 * lam);
    return std::abs(e) * t * t;
  };
  for (double t : {50.0, 100.0, 250.0}) {
    double r = C(2.0 * t) / C(t);
    CHECK(r == Approx(1.0).margin(0.05));
  }
  CHECK(C(500.0) <= 1.0);
}

TEST_CASE("Newton on a polynomial") {
  auto r = refine_root([](cplx z) { return z * z - 1.0; }, 1.1);
  CHECK(r.converged);
  CHECK(std::abs(r.root - 1.0) <= 1e-12);
  CHECK_FALSE(r.basin_escape);
  auto bad = refine_root([](cplx z) { return z * z + 1.0; }, 0.5, 50);
  CHECK_FALSE(bad.converged);
}

TEST_CASE("branch seeds") {
  auto s0 = branch_seeds(timo(), kHalf, 0, 10, 10);
  CHECK(s0[0].real() == Approx(-0.125));
  CHECK(s0[0].imag() == Approx(10.0 * M_PI * std::sqrt(2.0)));
  CHECK(branch_seeds(timo(), kHalf, 1, 1, 1)[0] == cplx(0.0, M_PI));
  CHECK_THROWS(branch_seeds(timo(), kHalf, 0, 0, 3));
  PhysicalParams eq = timo();
  eq.k2 = 1.0;
  CHECK_THROWS(branch_seeds(eq, kHalf, 0, 1, 3));
  PhysicalParams bresse = timo();
  bresse.ell = 1.0;
  CHECK_THROWS(char_point(bresse, kHalf, {0.0, 1.0}));
  CHECK_THROWS(char_point(timo(), kHalf, 0.0));
}

TEST_CASE("refined branch roots") {
  PhysicalParams p = timo();
  auto r1 = refine_root(p, kHalf, branch_seeds(p, kHalf, 1, 20, 20)[0]);
  CHECK(r1.converged);
  CHECK(std::abs(r1.root.real()) <= 0.02);
  CHECK(close(r1.root, {-9.84974028407391e-5, 62.82374255929132}, 1e-9));
  auto r0 = refine_root(p, kHalf, branch_seeds(p, kHalf, 0, 20, 20)[0]);
  CHECK(r0.converged);
  CHECK(std::abs(r0.root.real() + 0.125) <= 0.05);
  CHECK(close(r0.root, {-0.1248919065438272, 88.86752020211159}, 1e-9));
  auto r10 = refine_root(p, kHalf, branch_seeds(p, kHalf, 0, 10, 10)[0]);
  CHECK(close(r10.root, {-0.1245916801104611, 44.44853417120523}, 1e-9));
  auto r11 = refine_root(p, kHalf, branch_seeds(p, kHalf, 1, 10, 10)[0]);
  CHECK(close(r11.root, {-0.008900450947102724, 31.42388146446947}, 1e-9));
}

TEST_CASE("branch convergence over n = 10..30") {
  PhysicalParams p = timo();
  auto roots = branch_roots(p, kHalf, 10, 30, 2);
  CHECK(roots.size() == 42);
  auto s = branch_convergence_report(roots, -0.125);
  CHECK(s.all_converged);
  CHECK(s.decreasing0);
  CHECK(s.decreasing1);
  CHECK(s.within0);
  CHECK(s.within1);
  CHECK(s.passes());
  for (const auto &r : roots)
    if (r.branch == 1 && r.n == 30)
      CHECK(close(r.root, {-0.0001511545089874169, 94.24338892213149}, 1e-9));
}

TEST_CASE("trend test") {
  CHECK_FALSE(decreasing_with_jitter(std::vector<double>(10, 0.3)));
  CHECK(decreasing_with_jitter({1.0, 0.8, 0.85, 0.5, 0.4, 0.3}));
  CHECK_FALSE(decreasing_with_jitter({1.0, 0.8}));
}
