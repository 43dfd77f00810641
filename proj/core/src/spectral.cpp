#include "bresse/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <lapacke.h>

namespace bresse {

using SpMatC = Eigen::SparseMatrix<cplx>;
using VecC = Eigen::VectorXcd;

struct EnergyFactor::Impl {
  Eigen::SimplicialLLT<SpMat> llt;
  SpMat L;
  SpMatC Lc, Uc;
};

EnergyFactor::EnergyFactor(const SpMat &B) : impl_(std::make_unique<Impl>()) {
  impl_->llt.compute(B);
  ok_ = impl_->llt.info() == Eigen::Success;
  if (!ok_)
    return;
  impl_->L = impl_->llt.matrixL();
  // semidefinite weights can slip through with tiny pivots
  Vec d = impl_->L.diagonal();
  ok_ = d.minCoeff() > 1e-7 * d.cwiseAbs().maxCoeff();
  impl_->Lc = impl_->L.cast<cplx>();
  impl_->Uc = SpMatC(impl_->Lc.transpose());
}

EnergyFactor::~EnergyFactor() = default;

VecC EnergyFactor::apply(const VecC &x) const {
  VecC y = impl_->llt.permutationP() * x;
  return impl_->Uc * y;
}

VecC EnergyFactor::apply_t(const VecC &x) const {
  VecC y = impl_->Lc * x;
  return impl_->llt.permutationPinv() * y;
}

VecC EnergyFactor::apply_inv(const VecC &x) const {
  VecC y = impl_->Uc.triangularView<Eigen::Upper>().solve(x);
  return impl_->llt.permutationPinv() * y;
}

VecC EnergyFactor::solve_b(const VecC &x) const {
  VecC y(x.size());
  y.real() = impl_->llt.solve(Vec(x.real()));
  y.imag() = impl_->llt.solve(Vec(x.imag()));
  return y;
}

Eigen::MatrixXd EnergyFactor::transform(const SpMat &A) const {
  const auto &P = impl_->llt.permutationP();
  SpMat PA = P * A * P.transpose();
  const SpMat &L = impl_->L;
  // L^T (P A P^T) L^{-T}
  Eigen::MatrixXd D = SpMat(L.transpose()) * Eigen::MatrixXd(PA);
  Eigen::MatrixXd Dt = D.transpose();
  L.triangularView<Eigen::Lower>().solveInPlace(Dt);
  return Dt.transpose();
}

std::vector<cplx> dense_eigenvalues(const Eigen::MatrixXd &M) {
  int n = (int)M.rows();
  if (M.cols() != n)
    throw std::invalid_argument("eigenvalues: matrix is not square");
  Eigen::MatrixXd a = M;
  std::vector<double> wr(n), wi(n);
  lapack_int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'N', n, a.data(), n, wr.data(),
                                  wi.data(), nullptr, 1, nullptr, 1);
  if (info > 0)
    throw std::runtime_error("spectral: QR iteration failed, " + std::to_string(info) +
                             " eigenvalues did not converge");
  if (info < 0)
    throw std::runtime_error("spectral: dgeev argument error");
  std::vector<cplx> ev(n);
  for (int i = 0; i < n; ++i)
    ev[i] = {wr[i], wi[i]};
  return ev;
}

namespace {

void finish(SpectrumReport &r) {
  std::sort(r.eigenvalues.begin(), r.eigenvalues.end(), [](cplx a, cplx b) {
    if (std::abs(a.imag()) != std::abs(b.imag()))
      return std::abs(a.imag()) < std::abs(b.imag());
    if (a.real() != b.real())
      return a.real() > b.real();
    return a.imag() < b.imag();
  });
  r.max_real_part = -INFINITY;
  for (auto z : r.eigenvalues)
    r.max_real_part = std::max(r.max_real_part, z.real());
}

} // namespace

SpectrumReport compute_spectrum(const GeneratorMatrix &G) {
  if (G.dim() > kDenseSpectrumLimit)
    throw std::invalid_argument("spectral: dimension " + std::to_string(G.dim()) +
                                " exceeds the dense eigensolve budget");
  SpectrumReport r;
  EnergyFactor C(G.B);
  if (C.ok()) {
    r.eigenvalues = dense_eigenvalues(C.transform(G.A));
    r.energy_transformed = true;
    r.method = "dense, energy-similarity transformed";
  } else {
    r.eigenvalues = dense_eigenvalues(Eigen::MatrixXd(G.A));
    r.method = "dense, raw (energy weight only semidefinite)";
  }
  finish(r);
  return r;
}

SpectrumReport compute_spectrum_reduced(const GeneratorMatrix &G) {
  SpectrumReport r;
  if (G.kernel.memoryless()) {
    r.eigenvalues = dense_eigenvalues(Eigen::MatrixXd(G.A));
    r.method = "dense, memoryless";
    finish(r);
    return r;
  }
  GeneratorMatrix R = assemble_memory_reduced(G.params, G.kernel, G.bc, G.grid);
  r.eigenvalues = dense_eigenvalues(Eigen::MatrixXd(R.A));
  r.method = "moment reduction + transport values";
  // transport eigenvalues -1/d_j (j < ns), nc copies each
  for (int j = 1; j < G.layout.ns; ++j)
    r.eigenvalues.insert(r.eigenvalues.end(), G.layout.nc, cplx(-1.0 / G.mgrid.step[j - 1], 0.0));
  finish(r);
  return r;
}

SpectrumReport spectrum_auto(const GeneratorMatrix &G, int dense_limit) {
  if (G.dim() <= std::min(dense_limit, kDenseSpectrumLimit))
    return compute_spectrum(G);
  return compute_spectrum_reduced(G);
}

double spectral_abscissa(const GeneratorMatrix &G, int dense_limit) {
  return spectrum_auto(G, dense_limit).max_real_part;
}

double eigen_residual(const GeneratorMatrix &G, cplx mu) {
  int n = G.dim();
  SpMatC T = G.A.cast<cplx>();
  for (int i = 0; i < n; ++i)
    T.coeffRef(i, i) -= mu;
  T.makeCompressed();
  Eigen::SparseLU<SpMatC, Eigen::COLAMDOrdering<int>> lu(T);
  if (lu.info() != Eigen::Success)
    return 0.0; // exactly singular
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  VecC x(n);
  for (int i = 0; i < n; ++i)
    x[i] = {nd(rng), nd(rng)};
  for (int it = 0; it < 2; ++it) {
    x = lu.solve(VecC(x / x.norm()));
  }
  x /= x.norm();
  double anorm = 0.0;
  for (int k = 0; k < G.A.outerSize(); ++k)
    for (SpMat::InnerIterator it(G.A, k); it; ++it)
      anorm = std::max(anorm, std::abs(it.value()));
  return (T * x).norm() / (anorm + std::abs(mu));
}

double resolution_limit(const GeneratorMatrix &G) {
  auto s = wave_speeds(G.params);
  double vmin = std::sqrt(std::min({s[0], s[1], G.params.timoshenko ? s[1] : s[2]}));
  return 0.5 * M_PI * vmin / G.grid.h;
}

ResolventSample resolvent_norm(const GeneratorMatrix &G, const EnergyFactor &C, double lambda) {
  if (!C.ok())
    throw std::runtime_error("spectral: resolvent norm needs a positive definite energy weight");
  int n = G.dim();
  SpMatC T = -G.A.cast<cplx>();
  for (int i = 0; i < n; ++i)
    T.coeffRef(i, i) += cplx(0.0, lambda);
  T.makeCompressed();
  Eigen::SparseLU<SpMatC, Eigen::COLAMDOrdering<int>> lu(T);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("spectral: i lambda - A is singular at lambda = " +
                             std::to_string(lambda));

  // Lanczos on C R B^{-1} R^* C^T, the largest eigenvalue is ||R||_B^2
  auto op = [&](const VecC &x) {
    VecC a = C.apply_t(x);
    VecC b = lu.adjoint().solve(a);
    VecC c = C.solve_b(b);
    VecC d = lu.solve(c);
    return C.apply(d);
  };

  const int maxit = 120;
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> nd;
  std::vector<VecC> Q;
  VecC q(n);
  for (int i = 0; i < n; ++i)
    q[i] = {nd(rng), nd(rng)};
  q /= q.norm();
  std::vector<double> alpha, beta;
  ResolventSample s;
  s.lambda = lambda;
  double theta = 0.0;
  for (int k = 0; k < maxit; ++k) {
    Q.push_back(q);
    VecC w = op(q);
    double a = (q.dot(w)).real();
    alpha.push_back(a);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto &v : Q)
        w -= v * v.dot(w);
    double b = w.norm();
    int m = (int)alpha.size();
    Eigen::MatrixXd Tm = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      Tm(i, i) = alpha[i];
      if (i + 1 < m)
        Tm(i, i + 1) = Tm(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Tm);
    theta = es.eigenvalues()(m - 1);
    double resid = std::abs(b * es.eigenvectors()(m - 1, m - 1));
    s.iterations = k + 1;
    if (resid <= 1e-6 * theta || b <= 1e-14 * theta) {
      s.converged = true;
      break;
    }
    beta.push_back(b);
    q = w / b;
  }
  s.inv_sigma_min = std::sqrt(std::max(theta, 0.0));
  if (!std::isfinite(s.inv_sigma_min))
    throw std::runtime_error("spectral: singular value estimate broke down at lambda = " +
                             std::to_string(lambda));
  return s;
}

ResolventScan resolvent_scan(const GeneratorMatrix &G, const std::vector<double> &lambdas,
                             int threads) {
  for (size_t i = 1; i < lambdas.size(); ++i)
    if (!(lambdas[i] > lambdas[i - 1]))
      throw std::invalid_argument("resolvent_scan: frequencies must be strictly increasing");
  EnergyFactor C(G.B);
  ResolventScan scan;
  scan.samples.resize(lambdas.size());
  threads = std::max(1, std::min<int>(threads, (int)lambdas.size()));
  std::vector<std::exception_ptr> errs(threads);
  auto work = [&](int t) {
    try {
      for (size_t i = t; i < lambdas.size(); i += threads)
        scan.samples[i] = resolvent_norm(G, C, lambdas[i]);
    } catch (...) {
      errs[t] = std::current_exception();
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back(work, t);
    for (auto &th : pool)
      th.join();
  }
  for (auto &e : errs)
    if (e)
      std::rethrow_exception(e);
  if (!lambdas.empty()) {
    scan.window_lo = lambdas.front();
    scan.window_hi = lambdas.back();
    if (lambdas.size() >= 8) {
      GrowthFit f = fit_growth_exponent(scan, scan.window_lo, scan.window_hi);
      scan.l_est = f.slope;
      scan.l_residual = f.residual;
    }
  }
  return scan;
}

std::vector<double> log_spaced(double lo, double hi, int n) {
  if (!(lo > 0.0 && hi > lo && n >= 2))
    throw std::invalid_argument("log_spaced: need 0 < lo < hi and n >= 2");
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i)
    v[i] = lo * std::pow(hi / lo, double(i) / (n - 1));
  return v;
}

std::vector<double> peak_frequencies(const std::vector<cplx> &eigs, double lo, double hi,
                                     int bands) {
  std::vector<double> edges = log_spaced(lo, hi, bands + 1);
  std::vector<double> out;
  for (int b = 0; b < bands; ++b) {
    const cplx *best = nullptr;
    for (const auto &z : eigs)
      if (z.imag() >= edges[b] && z.imag() < edges[b + 1] && (!best || z.real() > best->real()))
        best = &z;
    if (best)
      out.push_back(best->imag());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

GrowthFit fit_growth_exponent(const std::vector<double> &lambda, const std::vector<double> &value,
                              double lo, double hi, int group) {
  if (lambda.size() != value.size())
    throw std::invalid_argument("fit_growth_exponent: size mismatch");
  std::vector<double> x, y;
  for (size_t i = 0; i < lambda.size(); ++i)
    if (lambda[i] >= lo && lambda[i] <= hi) {
      if (!(lambda[i] > 0.0 && value[i] > 0.0))
        throw std::invalid_argument("fit_growth_exponent: non-positive sample");
      x.push_back(lambda[i]);
      y.push_back(value[i]);
    }
  if (x.size() < 8)
    throw std::invalid_argument("fit_growth_exponent: fewer than 8 samples in window");
  group = std::max(1, group);
  std::vector<double> lx, ly;
  for (size_t s = 0; s < x.size(); s += group) {
    size_t e = std::min(x.size(), s + group);
    size_t k = s;
    for (size_t i = s; i < e; ++i)
      if (y[i] > y[k])
        k = i;
    lx.push_back(std::log(x[k]));
    ly.push_back(std::log(y[k]));
  }
  if (lx.size() < 2)
    throw std::invalid_argument("fit_growth_exponent: degenerate window");
  Eigen::MatrixXd X(lx.size(), 2);
  Vec Y(ly.size());
  for (size_t i = 0; i < lx.size(); ++i) {
    X(i, 0) = 1.0;
    X(i, 1) = lx[i];
    Y[i] = ly[i];
  }
  Vec coef = X.colPivHouseholderQr().solve(Y);
  GrowthFit f;
  f.intercept = coef[0];
  f.slope = coef[1];
  f.residual = std::sqrt((X * coef - Y).squaredNorm() / lx.size());
  f.points = (int)lx.size();
  return f;
}

GrowthFit fit_growth_exponent(const ResolventScan &scan, double lo, double hi, int group) {
  std::vector<double> l, v;
  for (const auto &s : scan.samples) {
    l.push_back(s.lambda);
    v.push_back(s.inv_sigma_min);
  }
  return fit_growth_exponent(l, v, lo, hi, group);
}

cplx branch_prediction(const PhysicalParams &p, const KernelSpec &k, int branch, int n) {
  if (branch == 0)
    return {-evaluate(k, 0.0) / (2.0 * p.k2), n * M_PI * std::sqrt(p.k2 / p.rho2)};
  if (branch == 1)
    return {0.0, n * M_PI * std::sqrt(p.k1 / p.rho1)};
  throw std::invalid_argument("branch_prediction: branch must be 0 or 1");
}

SpectrumReport match_branches(const SpectrumReport &report, const PhysicalParams &p,
                              const KernelSpec &k, double im_max) {
  if (!p.timoshenko || p.ell != 0.0 || p.thermal || std::abs(p.length - 1.0) > 1e-12)
    throw std::invalid_argument("match_branches: needs the Timoshenko configuration with L = 1");
  double v0 = std::sqrt(p.k2 / p.rho2), v1 = std::sqrt(p.k1 / p.rho1);
  if (rel_equal(p.rho1 / p.k1, p.rho2 / p.k2))
    throw std::invalid_argument("match_branches: equal speeds have no branch split");
  double gap = 0.1 * std::min(M_PI * v0, M_PI * v1);
  SpectrumReport out = report;
  out.tags.assign(out.eigenvalues.size(), BranchTag::None);
  for (size_t i = 0; i < out.eigenvalues.size(); ++i) {
    cplx z = out.eigenvalues[i];
    double y = std::abs(z.imag());
    if (y > im_max || y < 0.5 * M_PI * std::min(v0, v1))
      continue;
    long n0 = std::max(1L, std::lround(y / (M_PI * v0)));
    long n1 = std::max(1L, std::lround(y / (M_PI * v1)));
    cplx p0 = branch_prediction(p, k, 0, (int)n0), p1 = branch_prediction(p, k, 1, (int)n1);
    if (std::abs(p0.imag() - p1.imag()) <= gap) {
      out.tags[i] = BranchTag::Ambiguous;
      continue;
    }
    double d0 = std::abs(cplx(z.real(), y) - p0);
    double d1 = std::abs(cplx(z.real(), y) - p1);
    out.tags[i] = d0 <= d1 ? BranchTag::Zero : BranchTag::One;
  }
  return out;
}

std::string to_string(BranchTag t) {
  switch (t) {
  case BranchTag::None: return "none";
  case BranchTag::Zero: return "0";
  case BranchTag::One: return "1";
  case BranchTag::Ambiguous: return "ambiguous";
  }
  return "?";
}

} // namespace bresse
