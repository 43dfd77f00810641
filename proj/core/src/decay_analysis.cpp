#include "bresse/decay_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace bresse {

namespace {

struct Line {
  double slope = 0.0, intercept = 0.0, r2 = 0.0, rms = 0.0;
  int n = 0;
};

Line least_squares(const std::vector<double> &x, const std::vector<double> &y) {
  Line f;
  f.n = (int)x.size();
  if (f.n < 3)
    throw std::invalid_argument("decay fit: fewer than 3 samples in window");
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < f.n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= f.n;
  my /= f.n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (int i = 0; i < f.n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0)
    throw std::invalid_argument("decay fit: degenerate window");
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssr = 0.0;
  for (int i = 0; i < f.n; ++i) {
    double r = y[i] - (f.intercept + f.slope * x[i]);
    ssr += r * r;
  }
  f.rms = std::sqrt(ssr / f.n);
  f.r2 = syy > 0.0 ? std::clamp(1.0 - ssr / syy, 0.0, 1.0) : 0.0;
  return f;
}

void window(const std::vector<double> &t, const std::vector<double> &E, double t0, double t1,
            bool logt, std::vector<double> &x, std::vector<double> &y) {
  if (t.size() != E.size())
    throw std::invalid_argument("decay fit: size mismatch");
  if (!(t1 > t0))
    throw std::invalid_argument("decay fit: empty window");
  if (t.empty() || t0 < t.front() - 1e-12 || t1 > t.back() + 1e-9)
    throw std::invalid_argument("decay fit: window outside the trace");
  for (size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t0 - 1e-12 || t[i] > t1 + 1e-12)
      continue;
    if (!(E[i] > 0.0))
      throw std::invalid_argument("decay fit: non-positive energy in window");
    x.push_back(logt ? std::log(t[i]) : t[i]);
    y.push_back(std::log(E[i]));
  }
}

void unpack(const EnergyTrace &tr, std::vector<double> &t, std::vector<double> &E) {
  for (const auto &s : tr.samples) {
    t.push_back(s.t);
    E.push_back(s.E);
  }
}

} // namespace

DecayFit fit_exponential(const std::vector<double> &t, const std::vector<double> &E, double t0,
                         double t1) {
  std::vector<double> x, y;
  window(t, E, t0, t1, false, x, y);
  Line l = least_squares(x, y);
  DecayFit f;
  f.model = DecayFit::Model::Exponential;
  f.param1 = std::exp(l.intercept);
  f.param2 = -l.slope;
  f.t0 = t0;
  f.t1 = t1;
  f.residual = l.rms;
  f.r2 = l.r2;
  f.points = l.n;
  f.non_decaying = !(f.param2 > 1e-12);
  return f;
}

DecayFit fit_polynomial(const std::vector<double> &t, const std::vector<double> &E, double t0,
                        double t1) {
  if (t0 < 1.0)
    throw std::invalid_argument("decay fit: power-law window must start at t >= 1");
  std::vector<double> x, y;
  window(t, E, t0, t1, true, x, y);
  Line l = least_squares(x, y);
  DecayFit f;
  f.model = DecayFit::Model::Polynomial;
  f.param1 = std::exp(l.intercept);
  f.param2 = -l.slope;
  f.t0 = t0;
  f.t1 = t1;
  f.residual = l.rms;
  f.r2 = l.r2;
  f.points = l.n;
  f.non_decaying = !(f.param2 > 1e-12);
  return f;
}

DecayFit fit_exponential(const EnergyTrace &tr, double t0, double t1) {
  std::vector<double> t, E;
  unpack(tr, t, E);
  return fit_exponential(t, E, t0, t1);
}

DecayFit fit_polynomial(const EnergyTrace &tr, double t0, double t1) {
  std::vector<double> t, E;
  unpack(tr, t, E);
  return fit_polynomial(t, E, t0, t1);
}

DecayFit fit_exponential(const EnergyTrace &tr) {
  if (tr.samples.empty())
    throw std::invalid_argument("decay fit: empty trace");
  double T = tr.samples.back().t;
  return fit_exponential(tr, 0.4 * T, T);
}

DecayFit fit_polynomial(const EnergyTrace &tr) {
  if (tr.samples.empty())
    throw std::invalid_argument("decay fit: empty trace");
  double T = tr.samples.back().t;
  return fit_polynomial(tr, std::max(1.0, 0.2 * T), T);
}

DecayClass classify_decay(const std::vector<double> &t, const std::vector<double> &E) {
  if (t.empty() || t.back() < 10.0)
    throw std::invalid_argument("classify_decay: trace must reach t >= 10");
  double T = t.back();
  double t0 = std::max(1.0, 0.2 * T);
  DecayClass c;
  c.exp_fit = fit_exponential(t, E, t0, T);
  c.poly_fit = fit_polynomial(t, E, t0, T);
  double gap = c.exp_fit.r2 - c.poly_fit.r2;
  if (gap > 0.02 && !c.exp_fit.non_decaying) {
    c.kind = DecayClass::Kind::Exponential;
  } else if (gap < -0.02 && !c.poly_fit.non_decaying) {
    c.kind = DecayClass::Kind::Polynomial;
    c.alpha = c.poly_fit.param2;
  }
  return c;
}

DecayClass classify_decay(const EnergyTrace &tr) {
  std::vector<double> t, E;
  unpack(tr, t, E);
  return classify_decay(t, E);
}

PolyDrift polynomial_drift(const std::vector<double> &t, const std::vector<double> &E) {
  double T = t.back();
  PolyDrift d;
  d.alpha_early = fit_polynomial(t, E, std::max(1.0, 0.2 * T), 0.6 * T).param2;
  d.alpha_late = fit_polynomial(t, E, 0.6 * T, T).param2;
  d.better_than_polynomial = d.alpha_late > 1.1 * d.alpha_early && d.alpha_late > 0.0;
  return d;
}

LadderVerdict ladder_verdict(const std::vector<int> &nx, const std::vector<double> &abscissa,
                             double uniform_max, double nonuniform_min) {
  if (nx.size() != abscissa.size() || nx.size() < 2)
    throw std::invalid_argument("ladder_verdict: need at least two rungs");
  LadderVerdict v;
  v.nx = nx;
  for (double a : abscissa)
    v.abscissa.push_back(std::abs(a));
  v.uniform = v.nonuniform = true;
  for (size_t i = 0; i + 1 < v.abscissa.size(); ++i) {
    double r = v.abscissa[i] / v.abscissa[i + 1];
    v.ratios.push_back(r);
    v.uniform = v.uniform && r <= uniform_max;
    v.nonuniform = v.nonuniform && r >= nonuniform_min;
  }
  return v;
}

bool at_least_as_fast(Regime measured, Regime predicted) {
  auto rank = [](Regime r) {
    switch (r) {
    case Regime::Exponential: return 3;
    case Regime::PolyOne: return 2;
    case Regime::PolyHalf: return 1;
    case Regime::Uncovered: return 0;
    }
    return 0;
  };
  return rank(measured) >= rank(predicted);
}

std::string to_string(DecayFit::Model m) {
  return m == DecayFit::Model::Exponential ? "exponential" : "polynomial";
}

std::string to_string(const DecayClass &c) {
  switch (c.kind) {
  case DecayClass::Kind::Exponential: return "Exponential";
  case DecayClass::Kind::Polynomial: {
    std::ostringstream os;
    os << "Polynomial(alpha=" << c.alpha << ")";
    return os.str();
  }
  case DecayClass::Kind::Undecided: return "Undecided";
  }
  return "?";
}

} // namespace bresse
