#pragma once

#include <array>
#include <string>

#include "bresse/memory_kernel.hpp"

namespace bresse {

enum class BoundaryCondition { DDD, DDDD, DNDD, DNND };

enum class Regime { Exponential, PolyOne, PolyHalf, Uncovered };

struct PhysicalParams {
  double rho1 = 1.0, rho2 = 1.0, rho3 = 1.0;
  double k1 = 1.0, k2 = 1.0, k3 = 1.0;
  double ell = 0.0;
  double delta = 0.0;
  double tau = 0.0;
  double beta = 1.0;
  double length = 1.0;
  bool thermal = false;
  // Drop the longitudinal displacement w entirely (Timoshenko beam).
  bool timoshenko = false;

  void validate() const;
};

struct RegimeReport {
  bool equal_speeds = false;
  bool k1_eq_k3 = false;
  bool speed_ratio_equal = false;
  double chi0 = 0.0;
  bool chi0_zero = false;
  bool near_degenerate = false;
  bool decoupled = false; // thermal with delta = 0
  Regime regime = Regime::Uncovered;
  std::string theorem;
};

constexpr double kEqualityTol = 1e-12;
constexpr double kDegenerateTol = 1e-6;

bool rel_equal(double x, double y, double tol = kEqualityTol);

std::array<double, 3> wave_speeds(const PhysicalParams &p);
bool equal_speed_condition(const PhysicalParams &p);
double stability_number(const PhysicalParams &p);
RegimeReport classify_regime(const PhysicalParams &p, const KernelSpec &k);

void check_bc(const PhysicalParams &p, BoundaryCondition bc);

std::string to_string(BoundaryCondition bc);
std::string to_string(Regime r);
BoundaryCondition parse_bc(const std::string &s);

} // namespace bresse
