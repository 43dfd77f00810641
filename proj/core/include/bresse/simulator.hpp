#pragma once

#include <memory>
#include <string>
#include <vector>

#include "bresse/discretization.hpp"

namespace bresse {

struct EnergySample {
  double t = 0.0;
  double E = 0.0;
  double mem_rate = 0.0;
  double heat_rate = 0.0;
};

struct EnergyTrace {
  std::vector<EnergySample> samples;
  double dt = 0.0;
  int steps = 0;
  double max_step_growth = 0.0;  // max over steps of (E+ - E)/E
};

struct InitialCondition {
  enum class Kind { SmoothBump, Eigenmode, Random };
  Kind kind = Kind::SmoothBump;
  int index = 1;
  unsigned long long seed = 0;

  static InitialCondition parse(const std::string &s, unsigned long long seed);
  std::string describe() const;
};

// Zero history in every variant.
Vec build_initial_state(const GeneratorMatrix &G, const InitialCondition &ic);

// Copy displacements, velocities and heat blocks between layouts; memory is
// mapped to its moment m = sum_j W_j eta_j when the target carries m.
Vec transfer_state(const Vec &u, const GeneratorMatrix &from, const GeneratorMatrix &to);

double default_dt(const GeneratorMatrix &G);

// Implicit midpoint with a single sparse LU of (I - dt/2 A).
class MidpointStepper {
public:
  MidpointStepper(const SpMat &A, double dt);
  ~MidpointStepper();
  MidpointStepper(const MidpointStepper &) = delete;
  MidpointStepper &operator=(const MidpointStepper &) = delete;

  Vec step(const Vec &u) const;
  double dt() const { return dt_; }

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  SpMat A_;
  double dt_;
};

struct SimulationResult {
  EnergyTrace trace;
  Vec final_state;
};

SimulationResult simulate(const GeneratorMatrix &G, const Vec &u0, double T, double dt,
                          int stride = 1);

// Propagate without energy bookkeeping (used for the reduced memory model).
Vec propagate(const SpMat &A, const Vec &u0, double T, double dt);

} // namespace bresse
