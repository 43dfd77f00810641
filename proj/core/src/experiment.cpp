#include "bresse/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <set>
#include <sstream>

namespace bresse {

namespace fs = std::filesystem;

ConfigError::ConfigError(int line, const std::string &msg)
    : std::runtime_error(line > 0 ? "config line " + std::to_string(line) + ": " + msg
                                  : "config: " + msg),
      line_(line) {}

ComputeError::ComputeError(const std::string &module, const std::string &msg)
    : std::runtime_error("[" + module + "] " + msg), module_(module) {}

bool RunResult::failed() const {
  return std::any_of(lines.begin(), lines.end(), [](const ReportLine &l) { return l.tag == Tag::Fail; });
}

std::string to_string(Experiment e) {
  switch (e) {
  case Experiment::Simulate: return "simulate";
  case Experiment::Spectrum: return "spectrum";
  case Experiment::Resolvent: return "resolvent";
  case Experiment::Characteristic: return "characteristic";
  case Experiment::Classify: return "classify";
  case Experiment::FullReport: return "full-report";
  }
  return "?";
}

namespace {

const std::set<std::string> kKeys = {
    "experiment",   "kernel.a",      "kernel.c",       "params.rho1",    "params.rho2",
    "params.rho3",  "params.k1",     "params.k2",      "params.k3",      "params.ell",
    "params.l",     "params.delta",  "params.tau",     "params.beta",    "params.L",
    "params.thermal", "params.timoshenko", "bc",      "disc.nx",        "disc.ns",
    "disc.trunc_tol", "sim.T",       "sim.dt",         "sim.stride",     "sim.ic",
    "sim.seed",     "spec.lambda_min", "spec.lambda_max", "spec.samples", "spec.placement",
    "char.n_min",   "char.n_max"};

std::string trim(const std::string &s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Entry {
  std::string value;
  int line = 0;
};

double as_double(const std::string &key, const Entry &e) {
  double v = 0.0;
  const char *b = e.value.data(), *end = b + e.value.size();
  auto r = std::from_chars(b, end, v);
  if (r.ec != std::errc() || r.ptr != end || !std::isfinite(v))
    throw ConfigError(e.line, "key '" + key + "' expects a number, got '" + e.value + "'");
  return v;
}

long long as_int(const std::string &key, const Entry &e) {
  long long v = 0;
  const char *b = e.value.data(), *end = b + e.value.size();
  auto r = std::from_chars(b, end, v);
  if (r.ec != std::errc() || r.ptr != end)
    throw ConfigError(e.line, "key '" + key + "' expects an integer, got '" + e.value + "'");
  return v;
}

bool as_bool(const std::string &key, const Entry &e) {
  if (e.value == "true" || e.value == "1")
    return true;
  if (e.value == "false" || e.value == "0")
    return false;
  throw ConfigError(e.line, "key '" + key + "' expects true/false, got '" + e.value + "'");
}

Experiment as_experiment(const Entry &e) {
  static const std::map<std::string, Experiment> m = {
      {"simulate", Experiment::Simulate},   {"spectrum", Experiment::Spectrum},
      {"resolvent", Experiment::Resolvent}, {"characteristic", Experiment::Characteristic},
      {"classify", Experiment::Classify},   {"full-report", Experiment::FullReport}};
  auto it = m.find(e.value);
  if (it == m.end())
    throw ConfigError(e.line, "unknown experiment '" + e.value + "'");
  return it->second;
}

} // namespace

ExperimentConfig parse_config(std::istream &in, const std::string &id) {
  std::map<std::string, Entry> kv;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    auto hash = raw.find('#');
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty())
      continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(lineno, "expected 'key = value'");
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key == "params.l")
      key = "params.ell";
    if (!kKeys.count(key))
      throw ConfigError(lineno, "unknown key '" + key + "'");
    if (value.empty())
      throw ConfigError(lineno, "key '" + key + "' has no value");
    if (kv.count(key))
      throw ConfigError(lineno, "duplicate key '" + key + "' (first set on line " +
                                    std::to_string(kv[key].line) + ")");
    kv[key] = {value, lineno};
  }

  auto need = [&](const std::string &key) -> const Entry & {
    auto it = kv.find(key);
    if (it == kv.end())
      throw ConfigError(0, "missing required key '" + key + "'");
    return it->second;
  };
  auto has = [&](const std::string &key) { return kv.count(key) > 0; };

  ExperimentConfig c;
  c.id = id;
  c.experiment = as_experiment(need("experiment"));
  {
    double a = as_double("kernel.a", need("kernel.a"));
    double cc = as_double("kernel.c", need("kernel.c"));
    try {
      c.kernel = KernelSpec(a, cc);
    } catch (const std::exception &ex) {
      throw ConfigError(need("kernel.a").line, ex.what());
    }
  }
  PhysicalParams &p = c.params;
  p.thermal = has("params.thermal") ? as_bool("params.thermal", kv["params.thermal"]) : false;
  p.timoshenko = has("params.timoshenko") ? as_bool("params.timoshenko", kv["params.timoshenko"]) : false;
  p.rho1 = as_double("params.rho1", need("params.rho1"));
  p.rho2 = as_double("params.rho2", need("params.rho2"));
  p.k1 = as_double("params.k1", need("params.k1"));
  p.k2 = as_double("params.k2", need("params.k2"));
  if (!p.timoshenko || has("params.k3"))
    p.k3 = as_double("params.k3", need("params.k3"));
  else
    p.k3 = p.k1;
  if (has("params.ell"))
    p.ell = as_double("params.ell", kv["params.ell"]);
  if (has("params.L"))
    p.length = as_double("params.L", kv["params.L"]);
  if (p.thermal) {
    p.rho3 = as_double("params.rho3", need("params.rho3"));
    p.delta = as_double("params.delta", need("params.delta"));
    p.tau = as_double("params.tau", need("params.tau"));
    p.beta = as_double("params.beta", need("params.beta"));
  } else {
    for (const char *k : {"params.rho3", "params.delta", "params.tau", "params.beta"})
      if (has(k))
        throw ConfigError(kv[k].line, std::string("key '") + k + "' only applies with params.thermal = true");
  }
  try {
    p.validate();
  } catch (const std::exception &ex) {
    throw ConfigError(0, ex.what());
  }

  if (has("bc")) {
    try {
      c.bc = parse_bc(kv["bc"].value);
      check_bc(p, c.bc);
    } catch (const std::invalid_argument &ex) {
      throw ConfigError(kv["bc"].line, ex.what());
    }
  } else {
    c.bc = p.thermal ? BoundaryCondition::DDDD : BoundaryCondition::DDD;
  }

  if (has("disc.nx")) c.nx = (int)as_int("disc.nx", kv["disc.nx"]);
  if (has("disc.ns")) c.ns = (int)as_int("disc.ns", kv["disc.ns"]);
  if (has("disc.trunc_tol")) c.trunc_tol = as_double("disc.trunc_tol", kv["disc.trunc_tol"]);
  if (c.nx < 4) throw ConfigError(has("disc.nx") ? kv["disc.nx"].line : 0, "disc.nx must be >= 4");
  if (c.ns < 8) throw ConfigError(has("disc.ns") ? kv["disc.ns"].line : 0, "disc.ns must be >= 8");
  if (!(c.trunc_tol > 0.0 && c.trunc_tol < 1.0))
    throw ConfigError(kv["disc.trunc_tol"].line, "disc.trunc_tol must lie in (0,1)");

  if (has("sim.T")) c.T = as_double("sim.T", kv["sim.T"]);
  if (has("sim.dt")) c.dt = as_double("sim.dt", kv["sim.dt"]);
  if (has("sim.stride")) c.stride = (int)as_int("sim.stride", kv["sim.stride"]);
  if (has("sim.ic")) c.ic = kv["sim.ic"].value;
  if (has("sim.seed")) {
    long long s = as_int("sim.seed", kv["sim.seed"]);
    if (s < 0) throw ConfigError(kv["sim.seed"].line, "sim.seed must be >= 0");
    c.seed = (unsigned long long)s;
  }
  if (c.T < 0.0) throw ConfigError(kv["sim.T"].line, "sim.T must be >= 0");
  if (c.dt && (!(*c.dt > 0.0) || (c.T > 0.0 && *c.dt > c.T)))
    throw ConfigError(kv["sim.dt"].line, "sim.dt must satisfy 0 < dt <= T");
  if (c.stride < 1) throw ConfigError(kv["sim.stride"].line, "sim.stride must be >= 1");
  try {
    InitialCondition::parse(c.ic, c.seed);
  } catch (const std::invalid_argument &ex) {
    throw ConfigError(kv["sim.ic"].line, ex.what());
  }

  if (has("spec.lambda_min")) c.lambda_min = as_double("spec.lambda_min", kv["spec.lambda_min"]);
  if (has("spec.lambda_max")) c.lambda_max = as_double("spec.lambda_max", kv["spec.lambda_max"]);
  if (has("spec.samples")) c.samples = (int)as_int("spec.samples", kv["spec.samples"]);
  if (has("spec.placement")) c.placement = kv["spec.placement"].value;
  if (!(c.lambda_min > 0.0))
    throw ConfigError(kv["spec.lambda_min"].line, "spec.lambda_min must be > 0");
  if (c.lambda_max && !(*c.lambda_max > c.lambda_min))
    throw ConfigError(kv["spec.lambda_max"].line, "spec.lambda_max must exceed spec.lambda_min");
  if (c.samples < 8)
    throw ConfigError(has("spec.samples") ? kv["spec.samples"].line : 0, "spec.samples must be >= 8");
  if (c.placement != "peaks" && c.placement != "uniform")
    throw ConfigError(kv["spec.placement"].line, "spec.placement is 'peaks' or 'uniform'");

  if (has("char.n_min")) c.n_min = (int)as_int("char.n_min", kv["char.n_min"]);
  if (has("char.n_max")) c.n_max = (int)as_int("char.n_max", kv["char.n_max"]);
  if (c.n_min < 1 || c.n_max < c.n_min + 4)
    throw ConfigError(0, "char.n_min >= 1 and at least 5 modes per branch required");
  return c;
}

ExperimentConfig load_config(const fs::path &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError(0, "cannot read '" + path.string() + "'");
  return parse_config(in, path.stem().string());
}

namespace {

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(15) << v;
  return os.str();
}

std::string num(cplx z) {
  std::ostringstream os;
  os << std::setprecision(15) << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
  return os.str();
}

std::string tag_name(Tag t) {
  switch (t) {
  case Tag::Pass: return "PASS";
  case Tag::Fail: return "FAIL";
  case Tag::Uncovered: return "UNCOVERED";
  case Tag::Info: return "INFO";
  }
  return "?";
}

struct Context {
  const ExperimentConfig &cfg;
  fs::path out;
  int threads;
  RunResult res;
  std::optional<RegimeReport> regime;
  std::optional<GeneratorMatrix> gen;

  void add(Tag t, const std::string &s) { res.lines.push_back({t, s}); }
  void check(bool ok, const std::string &s) { add(ok ? Tag::Pass : Tag::Fail, s); }

  std::ofstream open(const std::string &name) {
    std::ofstream f(out / name);
    if (!f)
      throw ComputeError("cli", "cannot write " + (out / name).string());
    res.files.push_back(name);
    return f;
  }

  const GeneratorMatrix &generator() {
    if (!gen) {
      try {
        SpatialGrid g = make_grid(cfg.params.length, cfg.nx);
        MemoryGrid m = build_memory_grid(cfg.kernel, cfg.ns, cfg.trunc_tol);
        gen = assemble_generator(cfg.params, cfg.kernel, cfg.bc, g, m);
      } catch (const std::exception &ex) {
        throw ComputeError("discretization", ex.what());
      }
    }
    return *gen;
  }
};

bool timoshenko_eligible(const PhysicalParams &p) {
  return !p.thermal && p.ell == 0.0 && std::abs(p.length - 1.0) <= 1e-12 &&
         !rel_equal(p.rho1 / p.k1, p.rho2 / p.k2);
}

void do_classify(Context &c) {
  const auto &cfg = c.cfg;
  auto hyp = validate_hypotheses(cfg.kernel, cfg.params.k2);
  c.check(hyp.passes(), "hypothesis (H): k2 - g0 = " + num(hyp.k2_tilde) + " > 0, g' = -c g with c = " +
                            num(hyp.h_constant) + "; (H') |g''| <= c2 g with c2 = " + num(hyp.hp_constant));
  if (!hyp.passes())
    throw ComputeError("model_config", "kernel violates hypothesis (H): k2 - g0 = " + num(hyp.k2_tilde));
  RegimeReport r;
  try {
    r = classify_regime(cfg.params, cfg.kernel);
  } catch (const std::exception &ex) {
    throw ComputeError("model_config", ex.what());
  }
  c.regime = r;
  auto s = wave_speeds(cfg.params);
  c.add(Tag::Info, "wave speed ratios k1/rho1 = " + num(s[0]) + ", k2/rho2 = " + num(s[1]) +
                       ", k3/rho1 = " + num(s[2]));
  if (cfg.params.thermal)
    c.add(Tag::Info, "stability number chi0 = " + num(r.chi0));
  c.add(r.regime == Regime::Uncovered ? Tag::Uncovered : Tag::Info,
        "regime: " + to_string(r.regime) + ", " + r.theorem);
  if (r.near_degenerate)
    c.add(Tag::Info, "near-degenerate: an equality of the decision table holds only to 1e-6");
  if (r.decoupled)
    c.add(Tag::Info, "delta = 0: heat decouples from the mechanics; classified by the thermal table");
  if (cfg.bc == BoundaryCondition::DNDD || cfg.bc == BoundaryCondition::DNND)
    c.add(Tag::Info, "history variable eta is held at zero on both ends in this variant (modeling choice)");
  if (cfg.bc == BoundaryCondition::DNND)
    c.add(Tag::Info, "dnnd admits the rigid mode w = const, psi = -l w; the energy weight is only semidefinite");
}

void do_simulate(Context &c) {
  const auto &cfg = c.cfg;
  const GeneratorMatrix &G = c.generator();
  SimulationResult sim;
  double dt = cfg.dt ? *cfg.dt : default_dt(G);
  try {
    InitialCondition ic = InitialCondition::parse(cfg.ic, cfg.seed);
    Vec u0 = build_initial_state(G, ic);
    sim = simulate(G, u0, cfg.T, std::min(dt, cfg.T > 0 ? cfg.T : dt), cfg.stride);
    c.add(Tag::Info, "simulation: ic " + ic.describe() + ", T = " + num(cfg.T) + ", dt = " + num(dt) +
                         ", " + std::to_string(sim.trace.steps) + " implicit midpoint steps");
  } catch (const std::exception &ex) {
    throw ComputeError("simulator", ex.what());
  }
  {
    auto f = c.open("energy.csv");
    write_energy_csv(f, sim.trace);
  }
  const auto &smp = sim.trace.samples;
  if (sim.trace.steps > 0) {
    c.check(sim.trace.max_step_growth <= 1e-10,
            "energy non-increasing (derivative of energy <= 0): max step growth (E+ - E)/E = " +
                num(sim.trace.max_step_growth) + " <= 1e-10");
    if (cfg.stride == 1) {
      double worst = -INFINITY;
      for (size_t k = 0; k + 1 < smp.size(); ++k) {
        double rate = std::max(smp[k].mem_rate + smp[k].heat_rate, smp[k + 1].mem_rate + smp[k + 1].heat_rate);
        double slack = (smp[k + 1].E - smp[k].E) - (smp[k + 1].t - smp[k].t) * rate - 1e-8 * smp[k].E;
        worst = std::max(worst, slack / std::max(smp[k].E, 1e-300));
      }
      c.check(worst <= 0.0, "discrete energy balance E(t+) - E(t) <= dt * max recorded rate + 1e-8 E: worst margin " +
                                num(worst));
    }
  }
  auto f = c.open("fits.csv");
  write_fits_header(f);
  double T = cfg.T;
  if (T < 10.0 || smp.size() < 10) {
    c.add(Tag::Info, "decay fits skipped: trace shorter than t = 10");
    return;
  }
  try {
    DecayFit ef = fit_exponential(sim.trace);
    DecayFit pf = fit_polynomial(sim.trace);
    DecayClass dc = classify_decay(sim.trace);
    write_fit_row(f, cfg.id, ef);
    write_fit_row(f, cfg.id, pf);
    c.add(Tag::Info, "exponential fit on [" + num(ef.t0) + ", " + num(ef.t1) + "]: M = " + num(ef.param1) +
                         ", eps = " + num(ef.param2) + ", r2 = " + num(ef.r2));
    c.add(Tag::Info, "power-law fit on [" + num(pf.t0) + ", " + num(pf.t1) + "]: C = " + num(pf.param1) +
                         ", alpha = " + num(pf.param2) + ", r2 = " + num(pf.r2));
    c.add(Tag::Info, "decay model selection: " + to_string(dc));
    if (c.regime) {
      switch (c.regime->regime) {
      case Regime::Exponential:
        c.check(ef.r2 >= 0.99 && ef.param2 > 0.0,
                "predicted exponential decay (" + c.regime->theorem + "): measured eps = " + num(ef.param2) +
                    ", r2 = " + num(ef.r2) + " (need r2 >= 0.99, eps > 0)");
        break;
      case Regime::PolyOne:
      case Regime::PolyHalf:
        c.add(Tag::Info, "predicted " + to_string(c.regime->regime) +
                             " decay is an upper bound; a finite grid always decays exponentially, the refinement ladder in full-report carries the check");
        break;
      case Regime::Uncovered:
        c.add(Tag::Uncovered, "no theorem covers this configuration; measured eps = " + num(ef.param2));
        break;
      }
    }
  } catch (const std::invalid_argument &ex) {
    throw ComputeError("decay_analysis", ex.what());
  }
}

SpectrumReport do_spectrum(Context &c) {
  const auto &cfg = c.cfg;
  const GeneratorMatrix &G = c.generator();
  SpectrumReport r;
  try {
    r = spectrum_auto(G);
  } catch (const std::exception &ex) {
    throw ComputeError("spectral", ex.what());
  }
  c.add(Tag::Info, "spectrum: " + std::to_string(r.eigenvalues.size()) + " eigenvalues (" + r.method + ")");
  c.check(r.max_real_part <= 1e-8, "dissipativity: max Re(eig) = " + num(r.max_real_part) + " <= 1e-8");
  double closest = INFINITY;
  for (auto z : r.eigenvalues)
    closest = std::min(closest, std::abs(z.real()));
  c.add(Tag::Info, "closest eigenvalue distance to the imaginary axis: " + num(closest));
  if (cfg.params.timoshenko && timoshenko_eligible(cfg.params)) {
    r = match_branches(r, cfg.params, cfg.kernel, 0.5 * M_PI / G.grid.h);
    int n0 = 0, n1 = 0, na = 0;
    for (auto t : r.tags) {
      n0 += t == BranchTag::Zero;
      n1 += t == BranchTag::One;
      na += t == BranchTag::Ambiguous;
    }
    c.add(Tag::Info, "branch tags: " + std::to_string(n0) + " branch-0, " + std::to_string(n1) +
                         " branch-1, " + std::to_string(na) + " ambiguous");
  }
  auto f = c.open("spectrum.csv");
  write_spectrum_csv(f, r);
  return r;
}

void do_resolvent(Context &c, const SpectrumReport *spec) {
  const auto &cfg = c.cfg;
  const GeneratorMatrix &G = c.generator();
  double limit = resolution_limit(G);
  double hi = cfg.lambda_max ? *cfg.lambda_max : limit;
  if (hi > limit * (1.0 + 1e-12))
    throw ConfigError(0, "spec.lambda_max = " + num(hi) + " exceeds the grid resolution limit " + num(limit));
  if (!(hi > cfg.lambda_min))
    throw ConfigError(0, "spec.lambda_min must lie below the resolution limit " + num(limit));
  std::vector<double> lambdas;
  ResolventScan scan;
  try {
    if (cfg.placement == "peaks") {
      SpectrumReport own;
      if (!spec) {
        own = spectrum_auto(G);
        spec = &own;
      }
      lambdas = peak_frequencies(spec->eigenvalues, cfg.lambda_min, hi, cfg.samples);
    } else {
      lambdas = log_spaced(cfg.lambda_min, hi, cfg.samples);
    }
    scan = resolvent_scan(G, lambdas, c.threads);
  } catch (const std::exception &ex) {
    throw ComputeError("spectral", ex.what());
  }
  {
    auto f = c.open("resolvent.csv");
    write_resolvent_csv(f, scan);
  }
  c.add(Tag::Info, "resolvent scan: " + std::to_string(scan.samples.size()) + " samples (" + cfg.placement +
                       ") on [" + num(cfg.lambda_min) + ", " + num(hi) + "], growth exponent l_est = " +
                       num(scan.l_est) + " (fit rms " + num(scan.l_residual) + "); a lower-bound witness, not the exact exponent");
  if (!c.regime)
    return;
  switch (c.regime->regime) {
  case Regime::Exponential:
    c.check(std::abs(scan.l_est) <= 0.2, "(H2) bounded resolvent: |l_est| = " + num(std::abs(scan.l_est)) + " <= 0.2");
    break;
  case Regime::PolyOne:
  case Regime::PolyHalf:
    c.check(scan.l_est >= 0.5, "(H3) resolvent growth: l_est = " + num(scan.l_est) + " >= 0.5");
    break;
  case Regime::Uncovered:
    c.add(Tag::Uncovered, "no resolvent prediction for this configuration; l_est = " + num(scan.l_est));
    break;
  }
}

void do_characteristic(Context &c) {
  const auto &cfg = c.cfg;
  const PhysicalParams &p = cfg.params;
  if (!timoshenko_eligible(p)) {
    if (cfg.experiment == Experiment::Characteristic)
      throw ComputeError("characteristic", "needs the Timoshenko reduction: elastic, ell = 0, L = 1, rho1/k1 != rho2/k2");
    c.add(Tag::Info, "characteristic analysis skipped: not a Timoshenko configuration with distinct speeds");
    return;
  }
  std::vector<BranchRoot> roots;
  BranchSummary s;
  double re0 = -evaluate(cfg.kernel, 0.0) / (2.0 * p.k2);
  PhysicalParams pt = p;
  pt.timoshenko = true;
  try {
    roots = branch_roots(pt, cfg.kernel, cfg.n_min, cfg.n_max, c.threads);
    s = branch_convergence_report(roots, re0);
  } catch (const std::exception &ex) {
    throw ComputeError("characteristic", ex.what());
  }
  {
    auto f = c.open("branches.csv");
    write_branches_csv(f, roots);
  }
  c.check(s.all_converged, "Newton refinement converged for all " + std::to_string(roots.size()) +
                               " seeds without basin escape");
  c.check(s.within0, "(branch1) Re lambda_n^(0) -> -g(0)/(2 k2) = " + num(re0) +
                         ": max |Re + g(0)/(2k2)| = " + num(s.max_dev0) + " <= 0.05");
  c.check(s.within1, "(branch2) Re lambda_n'^(1) -> 0: |Re| at n' = " + std::to_string(cfg.n_max) + " is " +
                         num(s.final_dev1) + " <= 0.02");
  c.check(s.decreasing0 && s.decreasing1, "branch residual sequences decrease (second-half max <= 0.9 first-half max)");

  std::mt19937_64 rng(cfg.seed + 1);
  std::uniform_real_distribution<double> ure(-1.0, 0.0), uim(1.0, 100.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    CharPoint cp = char_point(pt, cfg.kernel, {ure(rng), uim(rng)});
    worst = std::max(worst, std::abs(cp.detM + 4.0 * p.rho1 * cp.F) / (1.0 + std::abs(cp.detM)));
  }
  c.check(worst <= 1e-8, "det M + 4 rho1 F = 0 at 100 random lambda: worst relative defect " + num(worst) + " <= 1e-8");
}

void do_ladder(Context &c) {
  const auto &cfg = c.cfg;
  std::vector<int> nx = {cfg.nx, 2 * cfg.nx, 4 * cfg.nx};
  std::vector<double> ab;
  try {
    MemoryGrid m = build_memory_grid(cfg.kernel, cfg.ns, cfg.trunc_tol);
    for (int n : nx) {
      GeneratorMatrix G = assemble_generator(cfg.params, cfg.kernel, cfg.bc, make_grid(cfg.params.length, n), m);
      ab.push_back(spectral_abscissa(G));
    }
  } catch (const std::exception &ex) {
    throw ComputeError("spectral", ex.what());
  }
  LadderVerdict v = ladder_verdict(nx, ab);
  std::ostringstream os;
  os << "spectral abscissa ladder nx = " << nx[0] << "/" << nx[1] << "/" << nx[2] << ": |max Re| = "
     << num(v.abscissa[0]) << ", " << num(v.abscissa[1]) << ", " << num(v.abscissa[2]) << "; ratios "
     << num(v.ratios[0]) << ", " << num(v.ratios[1]);
  c.add(Tag::Info, os.str());
  if (!c.regime)
    return;
  switch (c.regime->regime) {
  case Regime::Exponential:
    c.check(v.uniform, "uniform stability signature: abscissa ratios <= 1.5");
    break;
  case Regime::PolyOne:
  case Regime::PolyHalf:
    c.check(v.nonuniform, "non-uniform stability signature: abscissa ratios >= 2");
    break;
  case Regime::Uncovered:
    c.add(Tag::Uncovered, "no ladder prediction for this configuration");
    break;
  }
}

void write_report(Context &c) {
  std::ofstream f(c.out / "report.txt");
  if (!f)
    throw ComputeError("cli", "cannot write report.txt");
  const auto &cfg = c.cfg;
  const auto &p = cfg.params;
  f << "config: " << cfg.id << "\n";
  f << "experiment: " << to_string(cfg.experiment) << "\n";
  f << std::setprecision(15);
  f << "kernel: g(s) = " << cfg.kernel.a << " exp(-" << cfg.kernel.c << " s)\n";
  f << "params: rho1=" << p.rho1 << " rho2=" << p.rho2 << " k1=" << p.k1 << " k2=" << p.k2 << " k3=" << p.k3
    << " ell=" << p.ell << " L=" << p.length;
  if (p.thermal)
    f << " rho3=" << p.rho3 << " delta=" << p.delta << " tau=" << p.tau << " beta=" << p.beta;
  f << (p.timoshenko ? " (timoshenko)" : "") << "\n";
  f << "bc: " << to_string(cfg.bc) << ", nx=" << cfg.nx << ", ns=" << cfg.ns << ", trunc_tol=" << cfg.trunc_tol << "\n\n";
  for (const auto &l : c.res.lines)
    f << "[" << tag_name(l.tag) << "] " << l.text << "\n";
  f << "\nsummary: " << (c.res.failed() ? "FAIL" : "PASS") << "\n";
  c.res.files.push_back("report.txt");
}

} // namespace

RunResult run(const ExperimentConfig &cfg, const fs::path &out_dir, int threads) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec)
    throw ComputeError("cli", "cannot create output directory " + out_dir.string());
  Context c{cfg, out_dir, std::max(1, threads), {}, {}, {}};
  do_classify(c);
  switch (cfg.experiment) {
  case Experiment::Classify:
    break;
  case Experiment::Simulate:
    do_simulate(c);
    break;
  case Experiment::Spectrum:
    do_spectrum(c);
    break;
  case Experiment::Resolvent:
    do_resolvent(c, nullptr);
    break;
  case Experiment::Characteristic:
    do_characteristic(c);
    break;
  case Experiment::FullReport: {
    do_simulate(c);
    SpectrumReport s = do_spectrum(c);
    if (cfg.bc == BoundaryCondition::DNND)
      c.add(Tag::Info, "resolvent scan skipped: dnnd has a semidefinite energy weight");
    else
      do_resolvent(c, &s);
    do_characteristic(c);
    do_ladder(c);
    break;
  }
  }
  write_report(c);
  return c.res;
}

void write_energy_csv(std::ostream &os, const EnergyTrace &tr) {
  os << "t,E,mem_rate,heat_rate\n" << std::setprecision(15);
  for (const auto &s : tr.samples)
    os << s.t << ',' << s.E << ',' << s.mem_rate << ',' << s.heat_rate << '\n';
}

void write_spectrum_csv(std::ostream &os, const SpectrumReport &r) {
  os << "re,im,branch\n" << std::setprecision(15);
  for (size_t i = 0; i < r.eigenvalues.size(); ++i)
    os << r.eigenvalues[i].real() << ',' << r.eigenvalues[i].imag() << ','
       << (r.tags.empty() ? "none" : to_string(r.tags[i])) << '\n';
}

void write_resolvent_csv(std::ostream &os, const ResolventScan &s) {
  os << "lambda,inv_sigma_min\n" << std::setprecision(15);
  for (const auto &x : s.samples)
    os << x.lambda << ',' << x.inv_sigma_min << '\n';
}

void write_branches_csv(std::ostream &os, const std::vector<BranchRoot> &roots) {
  os << "branch,n,seed_re,seed_im,root_re,root_im,residual,iters\n" << std::setprecision(15);
  for (const auto &r : roots)
    os << r.branch << ',' << r.n << ',' << r.seed.real() << ',' << r.seed.imag() << ',' << r.root.real()
       << ',' << r.root.imag() << ',' << r.residual << ',' << r.iters << '\n';
}

void write_fits_header(std::ostream &os) { os << "config_id,model,param1,param2,r2,window_t0,window_t1\n"; }

void write_fit_row(std::ostream &os, const std::string &config_id, const DecayFit &f) {
  os << std::setprecision(15) << config_id << ',' << to_string(f.model) << ',' << f.param1 << ',' << f.param2
     << ',' << f.r2 << ',' << f.t0 << ',' << f.t1 << '\n';
}

} // namespace bresse
