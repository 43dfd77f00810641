#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "bresse/memory_kernel.hpp"
#include "bresse/model_config.hpp"

namespace bresse {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

// phi and theta live on the interior nodes x_j = j h (j = 1..nx);
// psi, w, eta and q live on the nx+1 cell midpoints.
struct SpatialGrid {
  int nx = 0;
  double h = 0.0;
  double length = 1.0;

  int ncell() const { return nx + 1; }
  double node(int j) const { return j * h; }
  double cell(int i) const { return (i + 0.5) * h; }
};

SpatialGrid make_grid(double length, int nx);

struct MemoryGrid {
  int ns = 0;
  double s_max = 0.0;
  double ds = 0.0;
  std::vector<double> s;      // s_0 .. s_ns
  std::vector<double> w;      // quadrature weights, w[0] = 0
  std::vector<double> mass;   // W_j = integral of g over the cell ending at s_j (tail folded into the last)
  std::vector<double> step;   // upwind spacing d_j
  double mass_error = 0.0;    // |sum w_j g(s_j) - g0| / g0
};

MemoryGrid build_memory_grid(const KernelSpec &k, int ns, double tol);

struct StateLayout {
  int nx = 0, nc = 0, ns = 0;
  bool has_w = true;
  bool thermal = false;
  int phi = 0, psi = 0, w = -1;
  int vphi = 0, vpsi = 0, vw = -1;
  int eta = -1;   // first memory block, block j at eta + (j-1) nc
  int m = -1;     // reduced memory moment (m-ODE model only)
  int theta = -1, q = -1;
  int dim = 0;

  int nu() const { return nx + nc + (has_w ? nc : 0); }
  int eta_block(int j) const { return eta + (j - 1) * nc; }
};

struct GeneratorMatrix {
  SpMat A;      // U_t = A U
  SpMat B;      // energy weight, E = 1/2 U^T B U
  SpMat K;      // elastic stiffness on displacements
  SpMat S;      // memory strain form, eta_j^T S eta_j = sum h |eta_x|^2
  StateLayout layout;
  SpatialGrid grid;
  MemoryGrid mgrid;
  PhysicalParams params;
  KernelSpec kernel;
  BoundaryCondition bc = BoundaryCondition::DDD;
  double k2_tilde = 0.0;

  int dim() const { return layout.dim; }
};

GeneratorMatrix assemble_generator(const PhysicalParams &p, const KernelSpec &k,
                                   BoundaryCondition bc, const SpatialGrid &grid,
                                   const MemoryGrid &mgrid);

// Memory replaced by the moment m = sum_j W_j eta_j with m_t = g0 psi_t - c m.
// Only A and layout are filled; there is no energy for this model.
GeneratorMatrix assemble_memory_reduced(const PhysicalParams &p, const KernelSpec &k,
                                        BoundaryCondition bc, const SpatialGrid &grid);

double energy(const Vec &u, const GeneratorMatrix &g);
double inner(const Vec &u, const Vec &v, const GeneratorMatrix &g);
double memory_rate(const Vec &u, const GeneratorMatrix &g);
double heat_rate(const Vec &u, const GeneratorMatrix &g);

struct NormBounds {
  double k0 = 0.0;
  double k0p = 0.0;
};

NormBounds energy_norm_bounds(const SpatialGrid &grid, const PhysicalParams &p,
                              const KernelSpec &k);

void write_triplets(std::ostream &os, const SpMat &m);

} // namespace bresse
