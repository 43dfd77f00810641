#pragma once

#include <string>
#include <vector>

#include "bresse/model_config.hpp"
#include "bresse/simulator.hpp"

namespace bresse {

struct DecayFit {
  enum class Model { Exponential, Polynomial };
  Model model = Model::Exponential;
  double param1 = 0.0; // M or C
  double param2 = 0.0; // epsilon or alpha
  double t0 = 0.0, t1 = 0.0;
  double residual = 0.0;
  double r2 = 0.0;
  int points = 0;
  bool non_decaying = false;
};

struct DecayClass {
  enum class Kind { Exponential, Polynomial, Undecided };
  Kind kind = Kind::Undecided;
  double alpha = 0.0;
  DecayFit exp_fit, poly_fit;
};

struct PolyDrift {
  double alpha_early = 0.0, alpha_late = 0.0;
  bool better_than_polynomial = false;
};

struct LadderVerdict {
  std::vector<int> nx;
  std::vector<double> abscissa; // |max Re|
  std::vector<double> ratios;   // abscissa[i] / abscissa[i+1]
  bool uniform = false;     // every ratio <= 1.5
  bool nonuniform = false;  // every ratio >= 2
};

DecayFit fit_exponential(const std::vector<double> &t, const std::vector<double> &E, double t0,
                         double t1);
DecayFit fit_polynomial(const std::vector<double> &t, const std::vector<double> &E, double t0,
                        double t1);
DecayFit fit_exponential(const EnergyTrace &tr, double t0, double t1);
DecayFit fit_polynomial(const EnergyTrace &tr, double t0, double t1);

// Default windows: last 60% for the exponential law, [T/5, T] for the power law.
DecayFit fit_exponential(const EnergyTrace &tr);
DecayFit fit_polynomial(const EnergyTrace &tr);

DecayClass classify_decay(const std::vector<double> &t, const std::vector<double> &E);
DecayClass classify_decay(const EnergyTrace &tr);

PolyDrift polynomial_drift(const std::vector<double> &t, const std::vector<double> &E);

LadderVerdict ladder_verdict(const std::vector<int> &nx, const std::vector<double> &abscissa,
                             double uniform_max = 1.5, double nonuniform_min = 2.0);

// Exponential > PolyOne > PolyHalf
bool at_least_as_fast(Regime measured, Regime predicted);

std::string to_string(DecayFit::Model m);
std::string to_string(const DecayClass &c);

} // namespace bresse
