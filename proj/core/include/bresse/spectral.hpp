#pragma once

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "bresse/discretization.hpp"

namespace bresse {

using cplx = std::complex<double>;

enum class BranchTag { None, Zero, One, Ambiguous };

struct SpectrumReport {
  std::vector<cplx> eigenvalues; // sorted by |Im|, then Re
  std::vector<BranchTag> tags;   // empty until match_branches
  double max_real_part = 0.0;
  bool energy_transformed = false;
  std::string method;
};

// B = C^T C with C = L^T P from a sparse Cholesky of the energy weight.
class EnergyFactor {
public:
  explicit EnergyFactor(const SpMat &B);
  ~EnergyFactor();
  EnergyFactor(const EnergyFactor &) = delete;
  EnergyFactor &operator=(const EnergyFactor &) = delete;

  bool ok() const { return ok_; }
  Eigen::VectorXcd apply(const Eigen::VectorXcd &x) const;      // C x
  Eigen::VectorXcd apply_t(const Eigen::VectorXcd &x) const;    // C^T x
  Eigen::VectorXcd apply_inv(const Eigen::VectorXcd &x) const;  // C^{-1} x
  Eigen::VectorXcd solve_b(const Eigen::VectorXcd &x) const;    // B^{-1} x
  Eigen::MatrixXd transform(const SpMat &A) const;              // C A C^{-1}, dense

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  bool ok_ = false;
};

std::vector<cplx> dense_eigenvalues(const Eigen::MatrixXd &M);

constexpr int kDenseSpectrumLimit = 6000;

// Full dense spectrum of C A C^{-1}; falls back to A when B is only semidefinite.
SpectrumReport compute_spectrum(const GeneratorMatrix &G);

// Spectrum through the exact moment reduction of the memory blocks:
// eigenvalues of the (displacement, velocity, m) model plus the transport
// values -1/d_j. Needs the memory grid used for G.
SpectrumReport compute_spectrum_reduced(const GeneratorMatrix &G);

// Dense full spectrum up to dense_limit, reduced path above it.
SpectrumReport spectrum_auto(const GeneratorMatrix &G, int dense_limit = 3000);

double spectral_abscissa(const GeneratorMatrix &G, int dense_limit = 3000);

// Relative residual of an approximate eigenvalue mu of the full A, by two
// steps of inverse iteration.
double eigen_residual(const GeneratorMatrix &G, cplx mu);

struct ResolventSample {
  double lambda = 0.0;
  double inv_sigma_min = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct ResolventScan {
  std::vector<ResolventSample> samples;
  double l_est = 0.0;
  double l_residual = 0.0;
  double window_lo = 0.0, window_hi = 0.0;
};

double resolution_limit(const GeneratorMatrix &G);

// ||(i lambda - A)^{-1}|| in the energy norm
ResolventSample resolvent_norm(const GeneratorMatrix &G, const EnergyFactor &C, double lambda);

ResolventScan resolvent_scan(const GeneratorMatrix &G, const std::vector<double> &lambdas,
                             int threads = 1);

std::vector<double> log_spaced(double lo, double hi, int n);

// One frequency per log band: Im of the eigenvalue closest to the axis.
std::vector<double> peak_frequencies(const std::vector<cplx> &eigs, double lo, double hi,
                                     int bands);

struct GrowthFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
  int points = 0;
};

GrowthFit fit_growth_exponent(const std::vector<double> &lambda, const std::vector<double> &value,
                              double lo, double hi, int group = 3);
GrowthFit fit_growth_exponent(const ResolventScan &scan, double lo, double hi, int group = 3);

// Leading-order branch asymptotics: branch 0 at i n pi sqrt(k2/rho2) - g(0)/(2 k2),
// branch 1 at i n pi sqrt(k1/rho1).
cplx branch_prediction(const PhysicalParams &p, const KernelSpec &k, int branch, int n);

SpectrumReport match_branches(const SpectrumReport &report, const PhysicalParams &p,
                              const KernelSpec &k, double im_max);

std::string to_string(BranchTag t);

} // namespace bresse
