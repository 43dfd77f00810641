#include "bresse/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/SparseLU>

namespace bresse {

InitialCondition InitialCondition::parse(const std::string &s, unsigned long long seed) {
  InitialCondition ic;
  ic.seed = seed;
  if (s == "smooth_bump") {
    ic.kind = Kind::SmoothBump;
  } else if (s == "random") {
    ic.kind = Kind::Random;
  } else if (s.rfind("eigenmode", 0) == 0) {
    ic.kind = Kind::Eigenmode;
    auto colon = s.find(':');
    if (colon != std::string::npos) {
      try {
        ic.index = std::stoi(s.substr(colon + 1));
      } catch (const std::exception &) {
        throw std::invalid_argument("sim.ic: bad eigenmode index in '" + s + "'");
      }
    }
    if (ic.index < 1)
      throw std::invalid_argument("sim.ic: eigenmode index starts at 1");
  } else {
    throw std::invalid_argument("sim.ic: expected smooth_bump, random or eigenmode:<k>, got '" + s + "'");
  }
  return ic;
}

std::string InitialCondition::describe() const {
  switch (kind) {
  case Kind::SmoothBump: return "smooth_bump";
  case Kind::Random: return "random(seed=" + std::to_string(seed) + ")";
  case Kind::Eigenmode: return "eigenmode:" + std::to_string(index);
  }
  return "?";
}

Vec build_initial_state(const GeneratorMatrix &G, const InitialCondition &ic) {
  const StateLayout &L = G.layout;
  const SpatialGrid &g = G.grid;
  Vec u = Vec::Zero(L.dim);
  switch (ic.kind) {
  case InitialCondition::Kind::SmoothBump: {
    auto bump = [&](double x) {
      double s = std::sin(M_PI * x / g.length);
      return s * s;
    };
    for (int j = 0; j < L.nx; ++j)
      u[L.vphi + j] = bump(g.node(j + 1));
    for (int i = 0; i < L.nc; ++i) {
      u[L.vpsi + i] = bump(g.cell(i));
      if (L.has_w)
        u[L.vw + i] = bump(g.cell(i));
    }
    break;
  }
  case InitialCondition::Kind::Random: {
    std::mt19937_64 rng(ic.seed);
    std::uniform_real_distribution<double> ud(-1.0, 1.0);
    int nu = L.nu();
    for (int i = 0; i < 2 * nu; ++i)
      u[i] = ud(rng);
    if (L.thermal) {
      for (int i = 0; i < L.nx; ++i)
        u[L.theta + i] = ud(rng);
      for (int i = 0; i < L.nc; ++i)
        u[L.q + i] = ud(rng);
    }
    break;
  }
  case InitialCondition::Kind::Eigenmode: {
    int nu = L.nu();
    if (ic.index > nu)
      throw std::invalid_argument("sim.ic: eigenmode index exceeds the number of modes");
    Eigen::MatrixXd K(G.K);
    Vec m(nu);
    m.head(L.nx).setConstant(G.params.rho1 * g.h);
    m.segment(L.nx, L.nc).setConstant(G.params.rho2 * g.h);
    if (L.has_w)
      m.tail(L.nc).setConstant(G.params.rho1 * g.h);
    Vec is = m.cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd Ks = is.asDiagonal() * K * is.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Ks);
    Vec v = is.asDiagonal() * es.eigenvectors().col(ic.index - 1);
    u.head(nu) = v / v.cwiseAbs().maxCoeff();
    break;
  }
  }
  return u;
}

Vec transfer_state(const Vec &u, const GeneratorMatrix &from, const GeneratorMatrix &to) {
  const StateLayout &a = from.layout, &b = to.layout;
  if (a.nx != b.nx || a.has_w != b.has_w || a.thermal != b.thermal)
    throw std::invalid_argument("transfer_state: incompatible layouts");
  Vec v = Vec::Zero(b.dim);
  int nu = a.nu();
  v.head(2 * nu) = u.head(2 * nu);
  if (a.thermal) {
    v.segment(b.theta, b.nx) = u.segment(a.theta, a.nx);
    v.segment(b.q, b.nc) = u.segment(a.q, a.nc);
  }
  if (b.m >= 0) {
    for (int j = 1; j <= a.ns; ++j)
      v.segment(b.m, b.nc) += from.mgrid.mass[j - 1] * u.segment(a.eta_block(j), a.nc);
  } else if (b.eta >= 0 && a.eta >= 0) {
    if (a.ns != b.ns)
      throw std::invalid_argument("transfer_state: memory grids differ");
    v.segment(b.eta, b.ns * b.nc) = u.segment(a.eta, a.ns * a.nc);
  }
  return v;
}

double default_dt(const GeneratorMatrix &G) {
  const PhysicalParams &p = G.params;
  auto s = wave_speeds(p);
  double m = std::max({s[0], s[1], p.timoshenko ? s[1] : s[2]});
  if (p.thermal)
    m = std::max(m, 1.0 / (p.rho3 * p.tau));
  return 0.05 * G.grid.h / std::sqrt(m);
}

struct MidpointStepper::Impl {
  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
};

MidpointStepper::MidpointStepper(const SpMat &A, double dt)
    : impl_(std::make_unique<Impl>()), A_(A), dt_(dt) {
  if (!(dt > 0.0))
    throw std::invalid_argument("simulator: dt must be > 0");
  SpMat I(A.rows(), A.cols());
  I.setIdentity();
  SpMat M = I - 0.5 * dt * A;
  M.makeCompressed();
  impl_->lu.compute(M);
  if (impl_->lu.info() != Eigen::Success)
    throw std::runtime_error("simulator: step matrix factorization failed");
}

MidpointStepper::~MidpointStepper() = default;

Vec MidpointStepper::step(const Vec &u) const {
  Vec rhs = u + 0.5 * dt_ * (A_ * u);
  return impl_->lu.solve(rhs);
}

namespace {

EnergySample sample(const GeneratorMatrix &G, const Vec &u, double t) {
  return {t, energy(u, G), memory_rate(u, G), heat_rate(u, G)};
}

int step_count(double T, double dt) {
  if (T < 0.0)
    throw std::invalid_argument("simulator: T must be >= 0");
  if (T == 0.0)
    return 0;
  if (!(dt > 0.0) || dt > T)
    throw std::invalid_argument("simulator: need 0 < dt <= T");
  return (int)std::ceil(T / dt * (1.0 - 1e-12));
}

} // namespace

SimulationResult simulate(const GeneratorMatrix &G, const Vec &u0, double T, double dt,
                          int stride) {
  if (u0.size() != G.dim())
    throw std::invalid_argument("simulator: state dimension mismatch");
  if (stride < 1)
    throw std::invalid_argument("simulator: stride must be >= 1");
  int n = step_count(T, dt);
  if (n > 0)
    dt = T / n;
  SimulationResult r;
  r.trace.dt = dt;
  r.trace.steps = n;
  Vec u = u0;
  r.trace.samples.push_back(sample(G, u, 0.0));
  if (n == 0) {
    r.final_state = u;
    return r;
  }
  MidpointStepper stepper(G.A, dt);
  double E = r.trace.samples.back().E;
  r.trace.max_step_growth = -INFINITY;
  for (int k = 1; k <= n; ++k) {
    u = stepper.step(u);
    if (!u.allFinite())
      throw std::runtime_error("simulator: non-finite state at step " + std::to_string(k));
    double En = energy(u, G);
    if (E > 0.0)
      r.trace.max_step_growth = std::max(r.trace.max_step_growth, (En - E) / E);
    E = En;
    if (k % stride == 0 || k == n)
      r.trace.samples.push_back(sample(G, u, k * dt));
  }
  r.final_state = u;
  return r;
}

Vec propagate(const SpMat &A, const Vec &u0, double T, double dt) {
  int n = step_count(T, dt);
  Vec u = u0;
  if (n == 0)
    return u;
  dt = T / n;
  MidpointStepper stepper(A, dt);
  for (int k = 1; k <= n; ++k) {
    u = stepper.step(u);
    if (!u.allFinite())
      throw std::runtime_error("simulator: non-finite state at step " + std::to_string(k));
  }
  return u;
}

} // namespace bresse
