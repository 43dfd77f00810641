#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "bresse/memory_kernel.hpp"
#include "oracles.hpp"

using namespace bresse;
using Catch::Approx;

TEST_CASE("evaluate returns a e^{-cs}") {
  CHECK(evaluate({1.0, 1.0}, 0.0) == 1.0);
  CHECK(evaluate({0.5, 1.0}, 0.0) == 0.5);
  CHECK(evaluate({2.0, 0.5}, 2.0) == Approx(0.7357588823428847).epsilon(1e-15));
  CHECK_THROWS_AS(evaluate({1.0, 1.0}, -0.1), std::invalid_argument);
}

TEST_CASE("kernel constructor rejects bad parameters") {
  CHECK_THROWS(KernelSpec(-1.0, 1.0));
  CHECK_THROWS(KernelSpec(1.0, 0.0));
  CHECK_NOTHROW(KernelSpec(0.0, 1.0));
}

TEST_CASE("total mass against quadrature") {
  CHECK(total_mass({1.0, 1.0}) == 1.0);
  CHECK(total_mass({0.5, 1.0}) == 0.5);
  KernelSpec k(2.0, 0.5);
  double q = oracle::integrate([&](double s) { return evaluate(k, s); }, 0.0, 40.0 / k.c);
  CHECK(q == Approx(4.0).epsilon(1e-10));
  CHECK(total_mass(k) == Approx(q).epsilon(1e-10));
}

TEST_CASE("laplace transform") {
  KernelSpec k(1.0, 1.0);
  CHECK(laplace(k, 0.0) == std::complex<double>(1.0, 0.0));
  CHECK(laplace(k, 1.0).real() == Approx(0.5));
  auto li = laplace(k, {0.0, 1.0});
  CHECK(li.real() == Approx(0.5).epsilon(1e-14));
  CHECK(li.imag() == Approx(-0.5).epsilon(1e-14));
  double S = std::log(1e12) / k.c;
  auto q = oracle::integrate_complex(
      [&](double s) { return evaluate(k, s) * std::exp(std::complex<double>(0.0, -s)); }, 0.0, S);
  CHECK(std::abs(q - li) <= 1e-10 * std::abs(li));
  CHECK_THROWS_AS(laplace(k, -1.0), std::domain_error);
  CHECK_THROWS_AS(laplace(k, {-2.0, 5.0}), std::domain_error);
}

TEST_CASE("validate_hypotheses") {
  auto r = validate_hypotheses({0.5, 1.0}, 1.0);
  CHECK(r.k2_tilde == Approx(0.5));
  CHECK(r.passes());
  r = validate_hypotheses({2.0, 1.0}, 1.0);
  CHECK(r.k2_tilde == Approx(-1.0));
  CHECK_FALSE(r.k2_tilde_positive);
  CHECK_FALSE(r.passes());
  r = validate_hypotheses({0.5, 2.0}, 2.0);
  CHECK(r.k2_tilde == Approx(1.75));
  CHECK(r.hp_constant == Approx(4.0));
  CHECK(r.passes());
}

TEST_CASE("g' + c g = 0 at random points") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> us(0.0, 30.0), ua(0.1, 3.0), uc(0.2, 3.0);
  for (int i = 0; i < 1000; ++i) {
    KernelSpec k(ua(rng), uc(rng));
    double s = us(rng);
    CHECK(std::abs(derivative(k, s) + k.c * evaluate(k, s)) <= 1e-12);
    double h = 1e-5 * (1.0 + s);
    double fd = (evaluate(k, s + h) - evaluate(k, std::max(0.0, s - h))) / (s + h - std::max(0.0, s - h));
    CHECK(std::abs(fd - derivative(k, s)) <= 1e-6 * k.a * k.c);
    CHECK(std::abs(second_derivative(k, s)) <= k.c * k.c * evaluate(k, s) * (1 + 1e-15));
  }
}

TEST_CASE("truncated quadrature matches closed forms") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ua(0.1, 3.0), uc(0.2, 3.0), ul(0.01, 10.0);
  for (int i = 0; i < 20; ++i) {
    KernelSpec k(ua(rng), uc(rng));
    double smax = std::log(1e8) / k.c;
    double q = oracle::integrate([&](double s) { return evaluate(k, s); }, 0.0, smax);
    CHECK(std::abs(q - k.a / k.c * (1 - std::exp(-k.c * smax))) <= 1e-10 * q);
    CHECK(mass_between(k, 0.0, smax) == Approx(q).epsilon(1e-12));
    double lam = ul(rng);
    auto L = laplace(k, lam);
    CHECK(L.imag() == 0.0);
    CHECK(L.real() > 0.0);
    CHECK(L.real() < total_mass(k));
    double S = std::log(1e12) / k.c;
    double ql = oracle::integrate([&](double s) { return evaluate(k, s) * std::exp(-lam * s); }, 0.0, S);
    CHECK(std::abs(ql - L.real()) <= 1e-10 * L.real());
  }
}
