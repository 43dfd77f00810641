#pragma once

#include <complex>

namespace bresse {

// Exponential relaxation kernel g(s) = a e^{-cs}.
// a = 0 is accepted as the memoryless limit (g identically zero).
struct KernelSpec {
  double a = 0.5;
  double c = 1.0;

  KernelSpec() = default;
  KernelSpec(double a_, double c_);

  bool memoryless() const { return a == 0.0; }
};

struct HypothesisReport {
  double k2_tilde = 0.0;
  bool k2_tilde_positive = false;
  bool non_increasing = true;
  double h_constant = 0.0;  // g' <= -c g
  double hp_constant = 0.0; // |g''| <= c2 g
  bool passes() const { return k2_tilde_positive && non_increasing; }
};

double evaluate(const KernelSpec &k, double s);
double derivative(const KernelSpec &k, double s);
double second_derivative(const KernelSpec &k, double s);
double total_mass(const KernelSpec &k);

// Integral of g over [s0, s1]; s1 may be +infinity.
double mass_between(const KernelSpec &k, double s0, double s1);

// int_0^inf g(s) e^{-lambda s} ds
std::complex<double> laplace(const KernelSpec &k, std::complex<double> lambda);

HypothesisReport validate_hypotheses(const KernelSpec &k, double k2);

} // namespace bresse
