#include "bresse/model_config.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bresse {

namespace {

void require(bool ok, const char *msg) {
  if (!ok)
    throw std::invalid_argument(msg);
}

} // namespace

void PhysicalParams::validate() const {
  auto pos = [](double v) { return v > 0.0 && std::isfinite(v); };
  auto nonneg = [](double v) { return v >= 0.0 && std::isfinite(v); };
  require(pos(rho1) && pos(rho2) && pos(k1) && pos(k2) && pos(k3),
          "params: densities and stiffnesses must be > 0");
  require(pos(length), "params: L must be > 0");
  require(nonneg(ell), "params: ell must be >= 0");
  require(!timoshenko || ell == 0.0, "params: timoshenko reduction needs ell = 0");
  if (thermal) {
    require(pos(rho3), "params: rho3 must be > 0");
    require(nonneg(delta), "params: delta must be >= 0");
    require(nonneg(tau), "params: tau must be >= 0");
    require(nonneg(beta), "params: beta must be >= 0");
    require(!timoshenko, "params: timoshenko reduction is elastic only");
  }
}

bool rel_equal(double x, double y, double tol) {
  return std::abs(x - y) <= tol * std::max({std::abs(x), std::abs(y), 1e-300});
}

std::array<double, 3> wave_speeds(const PhysicalParams &p) {
  return {p.k1 / p.rho1, p.k2 / p.rho2, p.k3 / p.rho1};
}

bool equal_speed_condition(const PhysicalParams &p) {
  auto s = wave_speeds(p);
  return rel_equal(s[0], s[1]) && rel_equal(p.k1, p.k3);
}

double stability_number(const PhysicalParams &p) {
  if (!p.thermal)
    throw std::invalid_argument("stability number is defined for the thermal system only");
  double r = p.rho1 / (p.rho3 * p.k1);
  return (p.tau - r) * (p.rho2 - p.k2 * p.rho1 / p.k1) - p.tau * p.delta * p.delta * r;
}

RegimeReport classify_regime(const PhysicalParams &p, const KernelSpec &k) {
  p.validate();
  auto hyp = validate_hypotheses(k, p.k2);
  if (!hyp.passes())
    throw std::invalid_argument("classification: kernel violates hypothesis (H), k2 - g0 = " +
                                std::to_string(hyp.k2_tilde));
  RegimeReport r;
  auto s = wave_speeds(p);
  r.speed_ratio_equal = rel_equal(s[0], s[1]);
  r.k1_eq_k3 = rel_equal(p.k1, p.k3);
  r.equal_speeds = r.speed_ratio_equal && r.k1_eq_k3;
  bool near = (!r.speed_ratio_equal && rel_equal(s[0], s[1], kDegenerateTol)) ||
              (!r.k1_eq_k3 && rel_equal(p.k1, p.k3, kDegenerateTol));

  if (!p.thermal) {
    if (k.memoryless()) {
      r.regime = Regime::Uncovered;
      r.theorem = "none (g = 0: no memory damping)";
    } else if (r.speed_ratio_equal && r.k1_eq_k3) {
      r.regime = Regime::Exponential;
      r.theorem = "Th. 3.5 (equal speeds, exponential stability)";
    } else if (!r.speed_ratio_equal && r.k1_eq_k3) {
      r.regime = Regime::PolyOne;
      r.theorem = "Th. TH4.3 (rho1/k1 != rho2/k2, k1 = k3: E(t) <= c/t)";
    } else if (!r.speed_ratio_equal) {
      r.regime = Regime::PolyHalf;
      r.theorem = "Th. TH4.2 (rho1/k1 != rho2/k2, k1 != k3: E(t) <= c/sqrt(t))";
    } else {
      r.regime = Regime::Uncovered;
      r.theorem = "none (rho1/k1 = rho2/k2 with k1 != k3 is not covered)";
    }
    r.near_degenerate = near;
    return r;
  }

  r.chi0 = stability_number(p);
  // chi0 is a difference of products; compare against the size of its terms
  double rr = p.rho1 / (p.rho3 * p.k1);
  double scale = std::abs((p.tau - rr) * (p.rho2 - p.k2 * p.rho1 / p.k1)) +
                 std::abs(p.tau * p.delta * p.delta * rr) +
                 std::abs(p.tau * p.rho2) + std::abs(rr * p.rho2);
  r.chi0_zero = std::abs(r.chi0) <= kEqualityTol * scale;
  near = near || (!r.chi0_zero && std::abs(r.chi0) <= kDegenerateTol * scale);
  r.near_degenerate = near;
  r.decoupled = p.delta == 0.0;
  if (k.memoryless() || p.beta == 0.0) {
    r.regime = Regime::Uncovered;
    r.theorem = k.memoryless() ? "none (g = 0: no memory damping)" : "none (beta = 0: no heat-flux damping)";
  } else if (r.chi0_zero && r.k1_eq_k3) {
    r.regime = Regime::Exponential;
    r.theorem = "Theorem expcatan (chi0 = 0, k1 = k3: exponential stability)";
  } else if (!r.chi0_zero && r.k1_eq_k3) {
    r.regime = Regime::PolyOne;
    r.theorem = "Theorem polycatan2 (chi0 != 0, k1 = k3: E(t) <= c/t)";
  } else if (!r.chi0_zero) {
    r.regime = Regime::PolyHalf;
    r.theorem = "Theorem polycatan1 (chi0 != 0, k1 != k3: E(t) <= c/sqrt(t))";
  } else {
    r.regime = Regime::Uncovered;
    r.theorem = "none (chi0 = 0 with k1 != k3 is not covered)";
  }
  return r;
}

void check_bc(const PhysicalParams &p, BoundaryCondition bc) {
  if (bc == BoundaryCondition::DDD && p.thermal)
    throw std::invalid_argument("bc: ddd is the elastic variant, thermal systems use dddd/dndd/dnnd");
  if (bc != BoundaryCondition::DDD && !p.thermal)
    throw std::invalid_argument("bc: " + to_string(bc) + " requires the thermal system");
}

std::string to_string(BoundaryCondition bc) {
  switch (bc) {
  case BoundaryCondition::DDD: return "ddd";
  case BoundaryCondition::DDDD: return "dddd";
  case BoundaryCondition::DNDD: return "dndd";
  case BoundaryCondition::DNND: return "dnnd";
  }
  return "?";
}

std::string to_string(Regime r) {
  switch (r) {
  case Regime::Exponential: return "Exponential";
  case Regime::PolyOne: return "PolyOne";
  case Regime::PolyHalf: return "PolyHalf";
  case Regime::Uncovered: return "Uncovered";
  }
  return "?";
}

BoundaryCondition parse_bc(const std::string &s) {
  if (s == "ddd") return BoundaryCondition::DDD;
  if (s == "dddd") return BoundaryCondition::DDDD;
  if (s == "dndd") return BoundaryCondition::DNDD;
  if (s == "dnnd") return BoundaryCondition::DNND;
  throw std::invalid_argument("bc: unknown variant '" + s + "'");
}

} // namespace bresse
