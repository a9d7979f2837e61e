#include "cavity/fermi_entropy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "cavity/csv.hpp"
#include "cavity/errors.hpp"
#include "cavity/hamiltonian.hpp"
#include "cavity/numeric.hpp"
#include "cavity/thermo.hpp"

namespace cavity {

bool XcSet::contains(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) return false;
  return thermo::rate_function(x, p) < threshold;
}

XcSet xc_set(double c, double p) {
  if (!(c > 0.0)) throw std::invalid_argument("xc_set: c must be > 0");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("xc_set: p must lie in (0,1)");
  XcSet xc;
  xc.p = p;
  xc.threshold = std::log(1.0 / p) / c;
  auto excess = [&](double x) { return thermo::rate_function(x, p) - xc.threshold; };
  const double centre = 1.0 - p;
  xc.lower = excess(0.0) <= 0.0 ? 0.0 : bisect(excess, 0.0, centre, 1e-15, 200).root;
  xc.upper = excess(1.0) <= 0.0 ? 1.0 : bisect(excess, centre, 1.0, 1e-15, 200).root;
  return xc;
}

std::vector<int> jc_levels(const XcSet& xc, int k) {
  if (k < 1) throw std::invalid_argument("jc_levels: k must be >= 1");
  std::vector<int> out;
  for (int j = 0; j <= k; ++j)
    if (xc.contains(static_cast<double>(j) / k)) out.push_back(j);
  return out;
}

std::vector<LevelCount> degeneracy_stats(const Graph& graph, const Configuration& sigma,
                                         const ModelParams& params, double delta) {
  const FieldTable table = cavity_fields(graph, sigma, params.h());
  const int k = table.k;
  const double outside = static_cast<double>(graph.size()) - k;
  const XcSet xc = xc_set(params.c(), params.p);
  std::vector<LevelCount> out;
  for (int j = 0; j <= k; ++j) {
    LevelCount lc;
    lc.j = j;
    lc.empirical = table.degeneracy[j][1];
    const double prob = std::exp(log_binomial(k, j) + j * std::log1p(-params.p) +
                                 (k - j) * std::log(params.p));
    lc.expected = outside * prob;
    lc.sd = std::sqrt(outside * prob * (1.0 - prob));
    const double x = static_cast<double>(j) / k;
    lc.in_jc = xc.contains(x);
    const double centre = xc.threshold - thermo::rate_function(x, params.p);
    if (lc.in_jc) {
      lc.log_lower = k * (-delta + centre);
      lc.log_upper = k * (delta + centre);
    } else {
      lc.log_lower = kNegInf;
      lc.log_upper = k * delta;
    }
    const double lg = lc.empirical > 0 ? std::log(static_cast<double>(lc.empirical)) : kNegInf;
    lc.within_window = lg <= lc.log_upper && (!lc.in_jc || lg >= lc.log_lower);
    out.push_back(lc);
  }
  return out;
}

double LevelSpectrum::total() const { return std::accumulate(g.begin(), g.end(), 0.0); }

LevelSpectrum parse_spectrum(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  LevelSpectrum s;
  std::vector<bool> seen;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string js, gs, extra;
    if (!(ls >> js)) continue;
    if (!(ls >> gs) || (ls >> extra)) {
      throw ConfigError("spectrum line " + std::to_string(lineno) + ": expected `j g_j`");
    }
    long j = 0;
    double g = 0.0;
    try {
      std::size_t used = 0;
      j = std::stol(js, &used);
      if (used != js.size()) throw std::invalid_argument(js);
      g = parse_double(gs);
    } catch (const std::exception&) {
      throw ConfigError("spectrum line " + std::to_string(lineno) + ": not a number");
    }
    if (j < 0 || j > 1'000'000 || !(g >= 0.0) || std::isinf(g)) {
      throw ConfigError("spectrum line " + std::to_string(lineno) + ": value out of range");
    }
    if (static_cast<std::size_t>(j) >= s.g.size()) {
      s.g.resize(j + 1, 0.0);
      seen.resize(j + 1, false);
    }
    if (seen[j]) throw ConfigError("spectrum: level " + std::to_string(j) + " repeated");
    seen[j] = true;
    s.g[j] = g;
  }
  if (s.g.empty()) throw ConfigError("spectrum: no levels");
  return s;
}

LevelSpectrum load_spectrum(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open spectrum file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_spectrum(ss.str());
}

std::pair<double, double> energy_range(const LevelSpectrum& spectrum, double N) {
  auto fill = [&](bool ascending) {
    double left = N;
    double e = 0.0;
    const std::size_t L = spectrum.g.size();
    for (std::size_t t = 0; t < L && left > 0.0; ++t) {
      const std::size_t j = ascending ? t : L - 1 - t;
      const double take = std::min(left, spectrum.g[j]);
      e += take * static_cast<double>(j);
      left -= take;
    }
    return e;
  };
  return {fill(true), fill(false)};
}

namespace {

double fermi(double z) {
  if (z > 0.0) {
    const double e = std::exp(-z);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(z));
}

struct Active {
  std::vector<double> g;
  std::vector<double> j;
};

struct Moments {
  double n = 0.0;   // sum g x
  double e = 0.0;   // sum g j x
  double w = 0.0;   // sum g x(1-x)
  double wj = 0.0;  // sum g x(1-x) j
  double wjj = 0.0;
};

Moments moments(const Active& a, double lambda, double mu) {
  Moments m;
  for (std::size_t t = 0; t < a.g.size(); ++t) {
    const double z = lambda + mu * a.j[t];
    const double x = fermi(z);
    const double y = fermi(-z);  // 1 - x without cancellation
    const double w = a.g[t] * x * y;
    m.n += a.g[t] * x;
    m.e += a.g[t] * a.j[t] * x;
    m.w += w;
    m.wj += w * a.j[t];
    m.wjj += w * a.j[t] * a.j[t];
  }
  return m;
}

// Safeguarded Newton on a decreasing function value(x) - target.
template <typename Eval>
double decreasing_solve(Eval&& eval, double target, double start, double tol, int& iters) {
  double lo = start - 1.0;
  double hi = start + 1.0;
  double step = 1.0;
  for (int i = 0; eval(lo).first <= target; ++i) {
    step *= 2.0;
    lo = start - step;
    if (i > 2000) throw NumericalFailure("occupation_solve: cannot bracket from below");
  }
  step = 1.0;
  for (int i = 0; eval(hi).first >= target; ++i) {
    step *= 2.0;
    hi = start + step;
    if (i > 2000) throw NumericalFailure("occupation_solve: cannot bracket from above");
  }
  double x = std::clamp(start, lo, hi);
  const double scale = std::max(1.0, std::abs(target));
  for (int i = 0; i < 400; ++i) {
    ++iters;
    const auto [v, d] = eval(x);
    const double r = v - target;
    if (std::abs(r) <= tol * scale) return x;
    if (r > 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    double next = d < 0.0 ? x - r / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo <= 1e-15 * std::max(1.0, std::abs(x))) return next;
    x = next;
  }
  return x;
}

}  // namespace

OccupationSolution occupation_solve(const LevelSpectrum& spectrum, double N, double E,
                                    double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("occupation_solve: tol must be > 0");
  Active a;
  for (std::size_t j = 0; j < spectrum.g.size(); ++j) {
    if (spectrum.g[j] < 0.0) throw std::invalid_argument("occupation_solve: negative degeneracy");
    if (spectrum.g[j] > 0.0) {
      a.g.push_back(spectrum.g[j]);
      a.j.push_back(static_cast<double>(j));
    }
  }
  const double total = spectrum.total();
  const auto [e_min, e_max] = energy_range(spectrum, std::clamp(N, 0.0, total));
  if (!(N > 0.0 && N < total)) {
    throw InfeasibleOccupation("occupation_solve: need 0 < N < " + format_double(total),
                               total, e_min, e_max);
  }
  const bool single = a.g.size() == 1 || e_max - e_min <= 1e-12 * std::max(1.0, e_max);
  const double escale = std::max(1.0, std::abs(E));
  if (single ? std::abs(E - e_min) > tol * escale : !(E > e_min && E < e_max)) {
    throw InfeasibleOccupation("occupation_solve: energy " + format_double(E) +
                                   " outside the attainable range (" + format_double(e_min) +
                                   ", " + format_double(e_max) + ")",
                               total, e_min, e_max);
  }

  OccupationSolution s;
  int iters = 0;
  double lambda = std::log((total - N) / N);
  auto solve_lambda = [&](double mu) {
    lambda = decreasing_solve(
        [&](double l) {
          const Moments m = moments(a, l, mu);
          return std::pair{m.n, -m.w};
        },
        N, lambda, tol * 1e-2, iters);
    return lambda;
  };

  double mu = 0.0;
  if (!single) {
    mu = decreasing_solve(
        [&](double m) {
          const double l = solve_lambda(m);
          const Moments mo = moments(a, l, m);
          const double slope =
              mo.w > 0.0 ? -(mo.wjj - mo.wj * mo.wj / mo.w) : 0.0;
          return std::pair{mo.e, slope};
        },
        E, 0.0, tol, iters);
  }
  solve_lambda(mu);

  s.lambda = lambda;
  s.mu = mu;
  s.iterations = iters;
  s.occupations.assign(spectrum.g.size(), 0.0);
  double n_sum = 0.0;
  double e_sum = 0.0;
  for (std::size_t j = 0; j < spectrum.g.size(); ++j) {
    const double z = lambda + mu * static_cast<double>(j);
    const double x = fermi(z);
    s.occupations[j] = x;
    if (spectrum.g[j] == 0.0) continue;
    n_sum += spectrum.g[j] * x;
    e_sum += spectrum.g[j] * static_cast<double>(j) * x;
    s.entropy -= spectrum.g[j] * binary_entropy_neg(x);
  }
  s.residual_particles = std::abs(n_sum - N) / std::max(1.0, N);
  s.residual_energy = std::abs(e_sum - E) / escale;
  if (s.residual_particles > 1e-8 || s.residual_energy > 1e-8) {
    throw NumericalFailure("occupation_solve: did not converge (residuals " +
                           format_double(s.residual_particles) + ", " +
                           format_double(s.residual_energy) + ")");
  }
  return s;
}

double entropy_estimate(const Graph& graph, const Configuration& sigma,
                        const ModelParams& params, double alpha, double rho, double delta,
                        int rho_points) {
  if (!(alpha >= 0.0 && alpha <= 1.0) || !(rho >= 0.0 && rho <= 1.0)) {
    throw std::invalid_argument("entropy_estimate: alpha and rho must lie in [0,1]");
  }
  if (!(delta >= 0.0) || rho_points < 1) {
    throw std::invalid_argument("entropy_estimate: bad delta or grid");
  }
  const FieldTable table = cavity_fields(graph, sigma, params.h());
  const int k = table.k;
  LevelSpectrum levels;
  levels.offset = params.h();
  for (int j = 0; j <= k; ++j) levels.g.push_back(table.degeneracy[j][1]);

  const double N = (1.0 - alpha) * k;
  const double inside = k * std::log(2.0);
  const double kk = static_cast<double>(k) * k;
  if (N <= 0.0) return inside / kk;

  double best = kNegInf;
  for (int i = 0; i < rho_points; ++i) {
    const double rp =
        rho_points == 1 ? rho : rho - delta + 3.0 * delta * i / (rho_points - 1);
    const double E = (1.0 - alpha) * kk * rp;
    try {
      best = std::max(best, occupation_solve(levels, N, E).entropy);
    } catch (const InfeasibleOccupation&) {
    }
  }
  if (best == kNegInf) return kNegInf;
  return (best + inside) / kk;
}

}  // namespace cavity
