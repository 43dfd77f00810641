#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "bresse/memory_kernel.hpp"
#include "bresse/model_config.hpp"

namespace bresse {

using cplx = std::complex<double>;

struct CharPoint {
  cplx lambda;
  cplx k2_low;     // k2 - laplace(g, lambda)
  cplx disc;       // inner square root of the root formulas
  cplx r1, r3;
  cplx f1, f3;
  cplx sqrt_term;  // r1 r3 / lambda^2
  cplx detM;
  cplx F;
  cplx F_scaled;   // F e^{-|Re r1| - |Re r3|} / lambda^4
  int speed_sign = 0;            // sign(rho2/k2 - rho1/k1)
  bool near_branch_cut = false;
};

struct BranchRoot {
  int n = 0;
  int branch = 0;
  cplx seed;
  cplx root;
  double residual = 0.0;
  int iters = 0;
  bool converged = false;
  bool basin_escape = false;
};

struct BranchSummary {
  std::vector<int> n0, n1;
  std::vector<double> dev0; // |Re lambda^(0) + g(0)/(2 k2)|
  std::vector<double> dev1; // |Re lambda^(1)|
  bool decreasing0 = false, decreasing1 = false;
  double max_dev0 = 0.0;
  double final_dev1 = 0.0;
  bool within0 = false, within1 = false;
  bool all_converged = false;
  bool passes() const { return decreasing0 && decreasing1 && within0 && within1 && all_converged; }
};

void check_timoshenko(const PhysicalParams &p);

CharPoint char_point(const PhysicalParams &p, const KernelSpec &k, cplx lambda);

// f(r) = r^3 - (rho2/k2_low) r lambda^2, evaluated directly
cplx f_direct(const PhysicalParams &p, cplx k2_low, cplx lambda, cplx r);

// det M from its 4x4 entries
cplx det_boundary_matrix(cplx r1, cplx r3, cplx f1, cplx f3);

std::vector<cplx> branch_seeds(const PhysicalParams &p, const KernelSpec &k, int branch,
                               int n_lo, int n_hi);

BranchRoot refine_root(const std::function<cplx(cplx)> &F, cplx seed, int max_iter = 50);
BranchRoot refine_root(const PhysicalParams &p, const KernelSpec &k, cplx seed);

std::vector<BranchRoot> branch_roots(const PhysicalParams &p, const KernelSpec &k, int n_lo,
                                     int n_hi, int threads = 1);

// Trend test: the largest value in the second half must sit at least 10% below
// the largest value in the first half.
bool decreasing_with_jitter(const std::vector<double> &seq, double jitter = 0.1);

BranchSummary branch_convergence_report(const std::vector<BranchRoot> &roots, double re0,
                                        double thr0 = 0.05, double thr1 = 0.02);

} // namespace bresse
