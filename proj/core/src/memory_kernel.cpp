#include "bresse/memory_kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace bresse {

KernelSpec::KernelSpec(double a_, double c_) : a(a_), c(c_) {
  if (!(a >= 0.0) || !std::isfinite(a))
    throw std::invalid_argument("kernel: amplitude a must be >= 0");
  if (!(c > 0.0) || !std::isfinite(c))
    throw std::invalid_argument("kernel: decay rate c must be > 0");
}

double evaluate(const KernelSpec &k, double s) {
  if (s < 0.0)
    throw std::invalid_argument("kernel: negative memory coordinate");
  return k.a * std::exp(-k.c * s);
}

double derivative(const KernelSpec &k, double s) { return -k.c * evaluate(k, s); }

double second_derivative(const KernelSpec &k, double s) {
  return k.c * k.c * evaluate(k, s);
}

double total_mass(const KernelSpec &k) { return k.a / k.c; }

double mass_between(const KernelSpec &k, double s0, double s1) {
  if (s0 < 0.0 || s1 < s0)
    throw std::invalid_argument("kernel: bad integration range");
  double head = k.a / k.c * std::exp(-k.c * s0);
  if (std::isinf(s1))
    return head;
  return head * -std::expm1(-k.c * (s1 - s0));
}

std::complex<double> laplace(const KernelSpec &k, std::complex<double> lambda) {
  if (!(lambda.real() > -k.c))
    throw std::domain_error("kernel: laplace transform diverges for Re(lambda) <= -c");
  return k.a / (k.c + lambda);
}

HypothesisReport validate_hypotheses(const KernelSpec &k, double k2) {
  HypothesisReport r;
  if (!(k2 > 0.0)) {
    r.k2_tilde = k2 - total_mass(k);
    return r;
  }
  r.k2_tilde = k2 - total_mass(k);
  r.k2_tilde_positive = r.k2_tilde > 0.0;
  r.non_increasing = true;
  r.h_constant = k.c;
  r.hp_constant = k.c * k.c;
  return r;
}

} // namespace bresse
