#include "bresse/discretization.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <string>

namespace bresse {

using Trip = Eigen::Triplet<double>;

namespace {

SpMat from_trips(int rows, int cols, const std::vector<Trip> &t) {
  SpMat m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

SpMat identity(int n, double v = 1.0) {
  std::vector<Trip> t;
  for (int i = 0; i < n; ++i)
    t.emplace_back(i, i, v);
  return from_trips(n, n, t);
}

SpMat diag(const std::vector<double> &d) {
  std::vector<Trip> t;
  for (int i = 0; i < (int)d.size(); ++i)
    if (d[i] != 0.0)
      t.emplace_back(i, i, d[i]);
  return from_trips((int)d.size(), (int)d.size(), t);
}

// node -> cell difference, phi vanishes at x = 0 and x = L
SpMat node_to_cell(int nx, double h) {
  std::vector<Trip> t;
  for (int i = 0; i <= nx; ++i) {
    if (i >= 1) t.emplace_back(i, i - 1, -1.0 / h);
    if (i < nx) t.emplace_back(i, i, 1.0 / h);
  }
  return from_trips(nx + 1, nx, t);
}

// cell -> node difference on nodes 0..nx+1; boundary rows see a zero
// boundary value half a cell away
SpMat cell_to_node(int nx, double h) {
  std::vector<Trip> t;
  for (int i = 1; i <= nx; ++i) {
    t.emplace_back(i, i, 1.0 / h);
    t.emplace_back(i, i - 1, -1.0 / h);
  }
  t.emplace_back(0, 0, 2.0 / h);
  t.emplace_back(nx + 1, nx, -2.0 / h);
  return from_trips(nx + 2, nx + 1, t);
}

std::vector<double> node_weights(int nx, double h, bool neumann) {
  std::vector<double> w(nx + 2, h);
  w[0] = w[nx + 1] = neumann ? 0.0 : 0.5 * h;
  return w;
}

SpMat interior_rows(const SpMat &dc, int nx) { return dc.middleRows(1, nx); }

SpMat embed_nodes(int nx) {
  std::vector<Trip> t;
  for (int i = 0; i < nx; ++i)
    t.emplace_back(i + 1, i, 1.0);
  return from_trips(nx + 2, nx, t);
}

// horizontal concatenation of column blocks
SpMat hcat(const std::vector<SpMat> &blocks) {
  int rows = blocks.front().rows(), cols = 0;
  std::vector<Trip> t;
  for (const auto &b : blocks) {
    for (int k = 0; k < b.outerSize(); ++k)
      for (SpMat::InnerIterator it(b, k); it; ++it)
        t.emplace_back(it.row(), it.col() + cols, it.value());
    cols += b.cols();
  }
  return from_trips(rows, cols, t);
}

void put(std::vector<Trip> &t, int r0, int c0, const SpMat &b, double scale = 1.0) {
  for (int k = 0; k < b.outerSize(); ++k)
    for (SpMat::InnerIterator it(b, k); it; ++it)
      t.emplace_back(r0 + it.row(), c0 + it.col(), scale * it.value());
}

struct Operators {
  SpMat Dn, Dc, Dci, P;
  SpMat Wd, Wpsi, Ww; // node weights: dirichlet, psi variant, w variant
};

Operators make_operators(const SpatialGrid &g, BoundaryCondition bc) {
  Operators o;
  o.Dn = node_to_cell(g.nx, g.h);
  o.Dc = cell_to_node(g.nx, g.h);
  o.Dci = interior_rows(o.Dc, g.nx);
  o.P = embed_nodes(g.nx);
  bool psi_neu = bc == BoundaryCondition::DNDD || bc == BoundaryCondition::DNND;
  bool w_neu = bc == BoundaryCondition::DNND;
  o.Wd = diag(node_weights(g.nx, g.h, false));
  o.Wpsi = diag(node_weights(g.nx, g.h, psi_neu));
  o.Ww = diag(node_weights(g.nx, g.h, w_neu));
  return o;
}

SpMat stiffness(const Operators &o, const PhysicalParams &p, double k2t, const SpatialGrid &g) {
  int nx = g.nx, nc = g.ncell();
  SpMat Inc = identity(nc);
  SpMat Znx(nx + 2, nx), Znc(nx + 2, nc);
  SpMat K;
  if (p.timoshenko) {
    SpMat E1 = hcat({o.Dn, Inc});
    SpMat E2 = hcat({Znx, o.Dc});
    K = g.h * p.k1 * SpMat(E1.transpose() * E1) + k2t * SpMat(E2.transpose() * o.Wpsi * E2);
  } else {
    SpMat E1 = hcat({o.Dn, Inc, identity(nc, p.ell)});
    SpMat E2 = hcat({Znx, o.Dc, Znc});
    SpMat E3 = hcat({SpMat(-p.ell * o.P), Znc, o.Dc});
    K = g.h * p.k1 * SpMat(E1.transpose() * E1) + k2t * SpMat(E2.transpose() * o.Wpsi * E2) +
        p.k3 * SpMat(E3.transpose() * o.Ww * E3);
  }
  K.prune(0.0);
  return K;
}

StateLayout make_layout(const SpatialGrid &g, const PhysicalParams &p, int ns, bool reduced) {
  StateLayout L;
  L.nx = g.nx;
  L.nc = g.ncell();
  L.ns = ns;
  L.has_w = !p.timoshenko;
  L.thermal = p.thermal;
  int o = 0;
  L.phi = o; o += L.nx;
  L.psi = o; o += L.nc;
  if (L.has_w) { L.w = o; o += L.nc; }
  L.vphi = o; o += L.nx;
  L.vpsi = o; o += L.nc;
  if (L.has_w) { L.vw = o; o += L.nc; }
  if (reduced) {
    L.m = o; o += L.nc;
  } else if (ns > 0) {
    L.eta = o; o += ns * L.nc;
  }
  if (L.thermal) {
    L.theta = o; o += L.nx;
    L.q = o; o += L.nc;
  }
  L.dim = o;
  return L;
}

std::vector<double> mass_diagonal(const StateLayout &L, const PhysicalParams &p, double h) {
  std::vector<double> m;
  m.insert(m.end(), L.nx, p.rho1 * h);
  m.insert(m.end(), L.nc, p.rho2 * h);
  if (L.has_w) m.insert(m.end(), L.nc, p.rho1 * h);
  return m;
}

void check_inputs(const PhysicalParams &p, const KernelSpec &k, BoundaryCondition bc,
                  const SpatialGrid &grid) {
  p.validate();
  check_bc(p, bc);
  if (grid.nx < 4)
    throw std::invalid_argument("assemble: nx must be >= 4");
  if (std::abs(grid.length - p.length) > 1e-12 * p.length)
    throw std::invalid_argument("assemble: grid length does not match params.L");
  if (p.thermal && !(p.tau > 0.0))
    throw std::invalid_argument("assemble: the Cattaneo law needs tau > 0");
  if (!(p.k2 - total_mass(k) > 0.0))
    throw std::invalid_argument("assemble: k2 - g0 must be > 0");
}

// elastic rows shared by the full and reduced models
void elastic_blocks(std::vector<Trip> &t, const StateLayout &L, const SpMat &K,
                    const std::vector<double> &mdiag) {
  int nu = L.nu();
  for (int i = 0; i < nu; ++i)
    t.emplace_back(i, nu + i, 1.0);
  for (int k = 0; k < K.outerSize(); ++k)
    for (SpMat::InnerIterator it(K, k); it; ++it)
      t.emplace_back(nu + it.row(), it.col(), -it.value() / mdiag[it.row()]);
}

void thermal_blocks(std::vector<Trip> &t, const StateLayout &L, const Operators &o,
                    const PhysicalParams &p) {
  put(t, L.vpsi, L.theta, o.Dn, -p.delta / p.rho2);
  put(t, L.theta, L.vpsi, o.Dci, -p.delta / p.rho3);
  put(t, L.theta, L.q, o.Dci, -1.0 / p.rho3);
  put(t, L.q, L.theta, o.Dn, -1.0 / p.tau);
  for (int i = 0; i < L.nc; ++i)
    t.emplace_back(L.q + i, L.q + i, -p.beta / p.tau);
}

} // namespace

SpatialGrid make_grid(double length, int nx) {
  if (nx < 4)
    throw std::invalid_argument("grid: nx must be >= 4");
  if (!(length > 0.0))
    throw std::invalid_argument("grid: length must be > 0");
  SpatialGrid g;
  g.nx = nx;
  g.length = length;
  g.h = length / (nx + 1);
  return g;
}

MemoryGrid build_memory_grid(const KernelSpec &k, int ns, double tol) {
  if (ns < 8)
    throw std::invalid_argument("memory grid: ns must be >= 8");
  if (!(tol > 0.0 && tol < 1.0))
    throw std::invalid_argument("memory grid: tol must lie in (0,1)");
  MemoryGrid m;
  m.ns = ns;
  m.s_max = std::log(1.0 / tol) / k.c;
  m.ds = m.s_max / ns;
  m.s.resize(ns + 1);
  for (int j = 0; j <= ns; ++j)
    m.s[j] = j * m.ds;
  m.w.assign(ns + 1, 0.0);
  m.mass.assign(ns, 0.0);
  m.step.assign(ns, 0.0);
  if (k.memoryless())
    return m;
  for (int j = 1; j <= ns; ++j) {
    double hi = j == ns ? INFINITY : m.s[j];
    m.mass[j - 1] = mass_between(k, m.s[j - 1], hi);
    m.w[j] = m.mass[j - 1] / evaluate(k, m.s[j]);
  }
  double tail = 0.0;
  for (int j = ns; j >= 1; --j) {
    tail += m.mass[j - 1];
    m.step[j - 1] = m.mass[j - 1] / (k.c * tail);
  }
  double sum = 0.0;
  for (int j = 1; j <= ns; ++j)
    sum += m.w[j] * evaluate(k, m.s[j]);
  double g0 = total_mass(k);
  m.mass_error = std::abs(sum - g0) / g0;
  if (m.mass_error > 1e-6)
    throw std::runtime_error("memory grid: mass check failed, relative error " +
                             std::to_string(m.mass_error));
  return m;
}

GeneratorMatrix assemble_generator(const PhysicalParams &p, const KernelSpec &k,
                                   BoundaryCondition bc, const SpatialGrid &grid,
                                   const MemoryGrid &mgrid) {
  check_inputs(p, k, bc, grid);
  int ns = k.memoryless() ? 0 : mgrid.ns;
  if (!k.memoryless() && (int)mgrid.mass.size() != mgrid.ns)
    throw std::invalid_argument("assemble: memory grid is not built");

  GeneratorMatrix G;
  G.params = p;
  G.kernel = k;
  G.bc = bc;
  G.grid = grid;
  G.mgrid = mgrid;
  G.k2_tilde = p.k2 - total_mass(k);
  G.layout = make_layout(grid, p, ns, false);
  const StateLayout &L = G.layout;

  Operators o = make_operators(grid, bc);
  G.K = stiffness(o, p, G.k2_tilde, grid);
  // eta vanishes at both ends in every variant
  G.S = SpMat(o.Dc.transpose() * o.Wd * o.Dc);
  std::vector<double> mdiag = mass_diagonal(L, p, grid.h);

  std::vector<Trip> t;
  elastic_blocks(t, L, G.K, mdiag);
  for (int j = 1; j <= ns; ++j) {
    double Wj = mgrid.mass[j - 1], dj = mgrid.step[j - 1];
    int bj = L.eta_block(j);
    put(t, L.vpsi, bj, G.S, -Wj / (p.rho2 * grid.h));
    for (int i = 0; i < L.nc; ++i) {
      t.emplace_back(bj + i, L.vpsi + i, 1.0);
      t.emplace_back(bj + i, bj + i, -1.0 / dj);
      if (j > 1)
        t.emplace_back(bj + i, L.eta_block(j - 1) + i, 1.0 / dj);
    }
  }
  if (p.thermal)
    thermal_blocks(t, L, o, p);
  G.A = from_trips(L.dim, L.dim, t);

  std::vector<Trip> b;
  put(b, 0, 0, G.K);
  for (int i = 0; i < L.nu(); ++i)
    b.emplace_back(L.nu() + i, L.nu() + i, mdiag[i]);
  for (int j = 1; j <= ns; ++j)
    put(b, L.eta_block(j), L.eta_block(j), G.S, mgrid.mass[j - 1]);
  if (p.thermal) {
    for (int i = 0; i < L.nx; ++i)
      b.emplace_back(L.theta + i, L.theta + i, p.rho3 * grid.h);
    for (int i = 0; i < L.nc; ++i)
      b.emplace_back(L.q + i, L.q + i, p.tau * grid.h);
  }
  G.B = from_trips(L.dim, L.dim, b);
  return G;
}

GeneratorMatrix assemble_memory_reduced(const PhysicalParams &p, const KernelSpec &k,
                                        BoundaryCondition bc, const SpatialGrid &grid) {
  check_inputs(p, k, bc, grid);
  GeneratorMatrix G;
  G.params = p;
  G.kernel = k;
  G.bc = bc;
  G.grid = grid;
  G.k2_tilde = p.k2 - total_mass(k);
  G.layout = make_layout(grid, p, 0, true);
  const StateLayout &L = G.layout;

  Operators o = make_operators(grid, bc);
  G.K = stiffness(o, p, G.k2_tilde, grid);
  G.S = SpMat(o.Dc.transpose() * o.Wd * o.Dc);
  std::vector<double> mdiag = mass_diagonal(L, p, grid.h);

  std::vector<Trip> t;
  elastic_blocks(t, L, G.K, mdiag);
  put(t, L.vpsi, L.m, G.S, -1.0 / (p.rho2 * grid.h));
  double g0 = total_mass(k);
  for (int i = 0; i < L.nc; ++i) {
    t.emplace_back(L.m + i, L.vpsi + i, g0);
    t.emplace_back(L.m + i, L.m + i, -k.c);
  }
  if (p.thermal)
    thermal_blocks(t, L, o, p);
  G.A = from_trips(L.dim, L.dim, t);
  return G;
}

double energy(const Vec &u, const GeneratorMatrix &g) { return 0.5 * inner(u, u, g); }

double inner(const Vec &u, const Vec &v, const GeneratorMatrix &g) {
  if (u.size() != g.dim() || v.size() != g.dim())
    throw std::invalid_argument("energy: state dimension mismatch");
  return u.dot(g.B * v);
}

double memory_rate(const Vec &u, const GeneratorMatrix &g) {
  const StateLayout &L = g.layout;
  double r = 0.0;
  for (int j = 1; j <= L.ns; ++j) {
    auto eta = u.segment(L.eta_block(j), L.nc);
    r += g.mgrid.mass[j - 1] * eta.dot(g.S * eta);
  }
  return -0.5 * g.kernel.c * r;
}

double heat_rate(const Vec &u, const GeneratorMatrix &g) {
  const StateLayout &L = g.layout;
  if (!L.thermal)
    return 0.0;
  return -g.params.beta * g.grid.h * u.segment(L.q, L.nc).squaredNorm();
}

NormBounds energy_norm_bounds(const SpatialGrid &grid, const PhysicalParams &p,
                              const KernelSpec &k) {
  if (p.thermal)
    throw std::invalid_argument("energy_norm_bounds: elastic blocks only");
  check_inputs(p, k, BoundaryCondition::DDD, grid);
  Operators o = make_operators(grid, BoundaryCondition::DDD);
  SpMat K = stiffness(o, p, p.k2 - total_mass(k), grid);
  int nx = grid.nx, nc = grid.ncell();
  SpMat H1 = grid.h * SpMat(o.Dn.transpose() * o.Dn);
  SpMat H2 = SpMat(o.Dc.transpose() * o.Wd * o.Dc);
  std::vector<Trip> t;
  put(t, 0, 0, H1);
  put(t, nx, nx, H2);
  if (!p.timoshenko)
    put(t, nx + nc, nx + nc, H2);
  SpMat H = from_trips(K.rows(), K.cols(), t);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(K),
                                                               Eigen::MatrixXd(H),
                                                               Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("energy_norm_bounds: seminorm form is not positive definite");
  NormBounds nb;
  nb.k0 = es.eigenvalues().minCoeff();
  nb.k0p = es.eigenvalues().maxCoeff();
  if (!(nb.k0 > 0.0))
    throw std::runtime_error("energy_norm_bounds: mechanical form is not positive definite");
  return nb;
}

void write_triplets(std::ostream &os, const SpMat &m) {
  os << std::setprecision(17);
  for (int k = 0; k < m.outerSize(); ++k)
    for (SpMat::InnerIterator it(m, k); it; ++it)
      os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
}

} // namespace bresse
