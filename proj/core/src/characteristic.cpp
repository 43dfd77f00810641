#include "bresse/characteristic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include <Eigen/Dense>

namespace bresse {

void check_timoshenko(const PhysicalParams &p) {
  p.validate();
  if (p.thermal || p.ell != 0.0)
    throw std::invalid_argument("characteristic: Timoshenko reduction needs thermal = false, ell = 0");
  if (std::abs(p.length - 1.0) > 1e-12)
    throw std::invalid_argument("characteristic: the boundary matrix is set up for L = 1");
}

cplx f_direct(const PhysicalParams &p, cplx k2_low, cplx lambda, cplx r) {
  return r * r * r - (p.rho2 / k2_low) * r * lambda * lambda;
}

cplx det_boundary_matrix(cplx r1, cplx r3, cplx f1, cplx f3) {
  Eigen::Matrix4cd M;
  cplx e1 = std::exp(r1), e1m = std::exp(-r1), e3 = std::exp(r3), e3m = std::exp(-r3);
  M << 1.0, 1.0, 1.0, 1.0,
       e1, e1m, e3, e3m,
       f1, -f1, f3, -f3,
       f1 * e1, -f1 * e1m, f3 * e3, -f3 * e3m;
  return M.determinant();
}

CharPoint char_point(const PhysicalParams &p, const KernelSpec &k, cplx lambda) {
  check_timoshenko(p);
  if (lambda == 0.0)
    throw std::invalid_argument("characteristic: lambda = 0 excluded");
  CharPoint c;
  c.lambda = lambda;
  c.k2_low = p.k2 - laplace(k, lambda);
  cplx A = p.rho2 / c.k2_low;
  double B = p.rho1 / p.k1;
  cplx l2 = lambda * lambda;
  cplx gap = 4.0 * p.rho1 / (c.k2_low * l2); // (A-B)^2 - disc^2
  c.disc = std::sqrt((A - B) * (A - B) - gap);
  c.near_branch_cut = std::abs(c.disc) <= 1e-6 * (std::abs(A) + B);
  c.r1 = lambda * std::sqrt((A + B + c.disc) / 2.0);
  c.r3 = lambda * std::sqrt((A + B - c.disc) / 2.0);
  double ds = p.rho2 / p.k2 - B;
  c.speed_sign = ds > 0 ? 1 : (ds < 0 ? -1 : 0);

  // (B-A) +- disc, the smaller one through their product
  cplx bp = (B - A) + c.disc, bm = (B - A) - c.disc;
  if (std::abs(bp) < std::abs(bm))
    bp = gap / bm;
  else
    bm = gap / bp;
  c.f1 = c.r1 * l2 / 2.0 * bp;
  c.f3 = c.r3 * l2 / 2.0 * bm;
  c.sqrt_term = c.r1 * c.r3 / l2;

  cplx l4 = l2 * l2;
  cplx ss_coef = l4 * l2 / p.k1 * (B - A) * (B - A) - l4 / c.k2_low * (3.0 * B - A);
  cplx cc_coef = 2.0 * l4 / c.k2_low * c.sqrt_term;
  double s = std::abs(c.r1.real()) + std::abs(c.r3.real());
  auto sh = [](cplx r) { return 0.5 * (std::exp(r - std::abs(r.real())) - std::exp(-r - std::abs(r.real()))); };
  auto ch = [](cplx r) { return 0.5 * (std::exp(r - std::abs(r.real())) + std::exp(-r - std::abs(r.real()))); };
  cplx scaled = ss_coef * sh(c.r1) * sh(c.r3) - cc_coef * ch(c.r1) * ch(c.r3) + cc_coef * std::exp(-s);
  c.F_scaled = scaled / l4;
  c.F = scaled * std::exp(s);
  c.detM = det_boundary_matrix(c.r1, c.r3, c.f1, c.f3);
  return c;
}

std::vector<cplx> branch_seeds(const PhysicalParams &p, const KernelSpec &k, int branch,
                               int n_lo, int n_hi) {
  check_timoshenko(p);
  if (rel_equal(p.rho1 / p.k1, p.rho2 / p.k2))
    throw std::invalid_argument("branch_seeds: equal speeds rho1/k1 = rho2/k2 excluded");
  if (n_lo < 1 || n_hi < n_lo)
    throw std::invalid_argument("branch_seeds: mode indices start at 1");
  std::vector<cplx> out;
  for (int n = n_lo; n <= n_hi; ++n) {
    if (branch == 0)
      out.emplace_back(-evaluate(k, 0.0) / (2.0 * p.k2), n * M_PI * std::sqrt(p.k2 / p.rho2));
    else if (branch == 1)
      out.emplace_back(0.0, n * M_PI * std::sqrt(p.k1 / p.rho1));
    else
      throw std::invalid_argument("branch_seeds: branch is 0 or 1");
  }
  return out;
}

BranchRoot refine_root(const std::function<cplx(cplx)> &F, cplx seed, int max_iter) {
  BranchRoot r;
  r.seed = seed;
  cplx z = seed;
  double ref = std::max(1.0, std::abs(F(seed)));
  cplx fz = F(z);
  for (int it = 0; it < max_iter; ++it) {
    double hstep = 1e-6 * (1.0 + std::abs(z));
    cplx d = (F(z + hstep) - F(z - hstep)) / (2.0 * hstep);
    if (d == 0.0 || !std::isfinite(std::abs(d)))
      break;
    cplx dz = fz / d;
    if (std::abs(dz) > 0.5)
      dz *= 0.5 / std::abs(dz);
    z -= dz;
    fz = F(z);
    r.iters = it + 1;
    if (std::abs(dz) <= 1e-13 * (1.0 + std::abs(z)))
      break;
  }
  r.root = z;
  r.residual = std::abs(fz);
  r.converged = std::isfinite(r.residual) && r.residual <= 1e-9 * ref;
  r.basin_escape = std::abs(z - seed) > 1.0;
  return r;
}

BranchRoot refine_root(const PhysicalParams &p, const KernelSpec &k, cplx seed) {
  return refine_root([&](cplx z) { return char_point(p, k, z).F_scaled; }, seed);
}

std::vector<BranchRoot> branch_roots(const PhysicalParams &p, const KernelSpec &k, int n_lo,
                                     int n_hi, int threads) {
  std::vector<BranchRoot> out;
  for (int b = 0; b <= 1; ++b) {
    auto seeds = branch_seeds(p, k, b, n_lo, n_hi);
    for (size_t i = 0; i < seeds.size(); ++i) {
      BranchRoot r;
      r.branch = b;
      r.n = n_lo + (int)i;
      r.seed = seeds[i];
      out.push_back(r);
    }
  }
  threads = std::max(1, std::min<int>(threads, (int)out.size()));
  auto work = [&](int t) {
    for (size_t i = t; i < out.size(); i += threads) {
      BranchRoot r = refine_root(p, k, out[i].seed);
      r.n = out[i].n;
      r.branch = out[i].branch;
      out[i] = r;
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t)
    pool.emplace_back(work, t);
  work(0);
  for (auto &th : pool)
    th.join();
  return out;
}

bool decreasing_with_jitter(const std::vector<double> &seq, double jitter) {
  if (seq.size() < 4)
    return false;
  size_t half = seq.size() / 2;
  double first = *std::max_element(seq.begin(), seq.begin() + half);
  double second = *std::max_element(seq.begin() + half, seq.end());
  return second <= (1.0 - jitter) * first;
}

BranchSummary branch_convergence_report(const std::vector<BranchRoot> &roots, double re0,
                                        double thr0, double thr1) {
  BranchSummary s;
  s.all_converged = true;
  std::vector<const BranchRoot *> b0, b1;
  for (const auto &r : roots) {
    s.all_converged = s.all_converged && r.converged && !r.basin_escape;
    (r.branch == 0 ? b0 : b1).push_back(&r);
  }
  auto by_n = [](const BranchRoot *a, const BranchRoot *b) { return a->n < b->n; };
  std::sort(b0.begin(), b0.end(), by_n);
  std::sort(b1.begin(), b1.end(), by_n);
  for (auto *r : b0) {
    s.n0.push_back(r->n);
    s.dev0.push_back(std::abs(r->root.real() - re0));
  }
  for (auto *r : b1) {
    s.n1.push_back(r->n);
    s.dev1.push_back(std::abs(r->root.real()));
  }
  if (s.dev0.size() < 5 || s.dev1.size() < 5)
    return s;
  s.decreasing0 = decreasing_with_jitter(s.dev0);
  s.decreasing1 = decreasing_with_jitter(s.dev1);
  s.max_dev0 = *std::max_element(s.dev0.begin(), s.dev0.end());
  s.final_dev1 = s.dev1.back();
  s.within0 = s.max_dev0 <= thr0;
  s.within1 = s.final_dev1 <= thr1;
  return s;
}

} // namespace bresse
