#include "cavity/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "cavity/errors.hpp"
#include "cavity/numeric.hpp"

namespace cavity::thermo {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_beta(double beta) {
  if (!(beta >= 0.0)) throw std::invalid_argument("beta must be >= 0");
}

void check_p(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p must lie in (0, 1)");
}

bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

// Finds the unique zero of a function that is positive at 0 and negative
// for large arguments.
double decreasing_root(const std::function<double(double)>& fn) {
  double hi = 1.0;
  int grow = 0;
  while (fn(hi) > 0.0) {
    hi *= 2.0;
    if (++grow > 200) throw NumericalFailure("critical beta: no sign change");
  }
  return bisect(fn, 0.0, hi, 1e-13, 200).root;
}

}  // namespace

double beta_times(double beta, double energy) {
  if (energy == 0.0) return 0.0;
  return beta * energy;
}

double f(double beta, double p) {
  check_beta(beta);
  if (std::isinf(beta)) return -std::log(p);
  // p + (1-p) e^{-b} = 1 - (1-p)(1 - e^{-b})
  return -std::log1p((1.0 - p) * std::expm1(-beta));
}

double f_prime(double beta, double p) {
  check_beta(beta);
  if (std::isinf(beta)) return 0.0;
  return (1.0 - p) / (p * std::exp(beta) + (1.0 - p));
}

double f_second(double beta, double p) {
  const double d = f_prime(beta, p);
  return -d * (1.0 - d);
}

double f_eval(double beta, double p, int order) {
  switch (order) {
    case 0: return f(beta, p);
    case 1: return f_prime(beta, p);
    case 2: return f_second(beta, p);
    default: throw std::invalid_argument("f_eval: order must be 0, 1 or 2");
  }
}

double rate_function(double x, double p, int order) {
  check_p(p);
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("rate_function: x outside [0,1]");
  switch (order) {
    case 0: {
      const double a = x > 0.0 ? x * std::log(x / (1.0 - p)) : 0.0;
      const double b = x < 1.0 ? (1.0 - x) * std::log((1.0 - x) / p) : 0.0;
      return a + b;
    }
    case 1:
      if (x == 0.0) return -kInf;
      if (x == 1.0) return kInf;
      return std::log(x * p / ((1.0 - p) * (1.0 - x)));
    case 2:
      if (x == 0.0 || x == 1.0) return kInf;
      return 1.0 / (x * (1.0 - x));
    default:
      throw std::invalid_argument("rate_function: order must be 0, 1 or 2");
  }
}

LegendrePoint legendre_minimizer(double beta, double p) {
  check_beta(beta);
  const double x = f_prime(beta, p);
  return {x, rate_function(x, p) + beta_times(beta, x)};
}

LegendrePoint legendre_numeric(double beta, double p, int grid_points) {
  check_beta(beta);
  if (grid_points < 3) throw std::invalid_argument("legendre_numeric: grid too small");
  auto g = [&](double x) { return rate_function(x, p) + beta_times(beta, x); };
  int best = 0;
  double best_v = g(0.0);
  for (int i = 1; i <= grid_points; ++i) {
    const double v = g(static_cast<double>(i) / grid_points);
    if (v < best_v) {
      best_v = v;
      best = i;
    }
  }
  double a = std::max(0, best - 1) / static_cast<double>(grid_points);
  double b = std::min(grid_points, best + 1) / static_cast<double>(grid_points);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double gc = g(c);
  double gd = g(d);
  for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
    if (gc < gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - inv_phi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + inv_phi * (b - a);
      gd = g(d);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, std::min({g(x), gc, gd})};
}

double critical_field(double beta, double p, double c) {
  check_beta(beta);
  check_p(p);
  if (beta == 0.0) return kInf;
  if (std::isinf(beta)) return 0.0;
  return (f(2.0 * beta, p) / 2.0 - f(beta, p) + std::log(1.0 / p) / c) / beta;
}

double low_temperature_function(double beta, double p, double c) {
  check_beta(beta);
  return std::log(1.0 / p) / c - f(beta, p) + beta_times(beta, f_prime(beta, p));
}

double critical_beta(double p, double c) {
  check_p(p);
  if (!(c > 1.0)) throw std::invalid_argument("critical_beta: requires c > 1");
  return decreasing_root([&](double b) { return low_temperature_function(b, p, c); });
}

std::optional<double> bar_critical_beta(double p, double c) {
  check_p(p);
  if (!(c > 2.0)) return std::nullopt;
  const double target = std::log(1.0 / p) / c;
  return decreasing_root(
      [&](double b) { return target - (f(2 * b, p) - f(4 * b, p) / 2.0); });
}

std::optional<double> hat_critical_beta(double p, double c) {
  check_p(p);
  if (!(c > 2.0)) return std::nullopt;
  const double target = std::log(1.0 / p) / c;
  return decreasing_root([&](double b) {
    return target - (f(2 * b, p) - beta_times(2 * b, f_prime(4 * b, p)));
  });
}

std::string to_string(Region r) {
  switch (r) {
    case Region::A: return "A";
    case Region::B: return "B";
    case Region::C: return "C";
    case Region::Boundary: return "boundary";
  }
  return "?";
}

PhaseReport critical_lines(const ModelParams& params) {
  params.validate();
  const double c = params.c();
  if (!(c > 1.0)) throw std::invalid_argument("critical_lines: requires c > 1");
  PhaseReport r;
  r.htilde_c = critical_field(params.beta, params.p, c);
  r.beta_c = critical_beta(params.p, c);
  r.bar_beta_c = bar_critical_beta(params.p, c);
  r.hat_beta_c = hat_critical_beta(params.p, c);
  return r;
}

PhaseDensities region_densities(const ModelParams& params, Region region) {
  params.validate();
  const double beta = params.beta;
  const double p = params.p;
  const double rate = params.entropy_rate();
  PhaseDensities d;
  switch (region) {
    case Region::A:
      d.energy = f_prime(2 * beta, p);
      d.energy_variance = -f_second(2 * beta, p);
      d.overlap = 1.0;
      d.entropy = rate - f(2 * beta, p) / 2.0 + beta_times(beta, f_prime(2 * beta, p));
      return d;
    case Region::B:
    case Region::C:
      d.energy = f_prime(beta, p) + params.htilde;
      d.energy_variance = -f_second(beta, p);
      d.overlap = 0.0;
      d.entropy = region == Region::B
                      ? 2 * rate - f(beta, p) + beta_times(beta, f_prime(beta, p))
                      : rate;
      return d;
    case Region::Boundary: break;
  }
  throw std::invalid_argument("region_densities: no expression on a boundary");
}

PhaseReport phase_classify(const ModelParams& params) {
  PhaseReport r = critical_lines(params);
  const double beta = params.beta;

  const bool low_temperature = beta > r.beta_c;
  r.identical_phase = region_densities(params, Region::A);
  r.disjoint_phase = region_densities(params, low_temperature ? Region::B : Region::C);

  if (nearly_equal(params.htilde, r.htilde_c)) {
    r.region = Region::Boundary;
  } else if (params.htilde > r.htilde_c) {
    r.region = Region::A;
  } else if (nearly_equal(beta, r.beta_c)) {
    r.region = Region::Boundary;
  } else {
    r.region = low_temperature ? Region::B : Region::C;
  }

  switch (r.region) {
    case Region::A: r.densities = r.identical_phase; break;
    case Region::B:
    case Region::C: r.densities = r.disjoint_phase; break;
    case Region::Boundary: r.densities = {kNaN, kNaN, kNaN, kNaN}; break;
  }
  return r;
}

namespace {

double log_choose_population(const ModelParams& params, std::int64_t m) {
  if (params.n_exact) return log_binomial(*params.n_exact, m);
  return log_binomial_real(params.log_n, m);
}

}  // namespace

double theta(const ModelParams& params, int q) {
  const int k = params.k;
  if (q < 0 || q > k) throw std::invalid_argument("theta: q outside [0,k]");
  const double a = log_choose_population(params, 2 * k - q);
  if (a == kNegInf) return kNegInf;
  return a + log_binomial(2 * k - q, q) + log_binomial(2 * (k - q), k - q);
}

double phi(const ModelParams& params, int q) {
  const int k = params.k;
  if (q < 0 || q > k) throw std::invalid_argument("phi: q outside [0,k]");
  const double beta = params.beta;
  const double nonoverlap = static_cast<double>(k - q);
  const double single = static_cast<double>(k) * k - static_cast<double>(q) * q;
  const double doubled = static_cast<double>(q) * (q - 1) / 2.0;
  double v = -beta_times(beta, params.h() * nonoverlap);
  if (single != 0.0) v -= f(beta, params.p) * single;
  if (doubled != 0.0) v -= f(2 * beta, params.p) * doubled;
  return v;
}

std::vector<double> annealed_terms(const ModelParams& params) {
  params.validate();
  std::vector<double> t(static_cast<std::size_t>(params.k) + 1);
  for (int q = 0; q <= params.k; ++q) {
    const double th = theta(params, q);
    t[q] = th == kNegInf ? kNegInf : th + phi(params, q);
  }
  return t;
}

AsymptoticLogZ annealed_log_z_asymptotic(const ModelParams& params) {
  params.validate();
  const double c = params.c();
  if (!(c > 1.0)) throw std::invalid_argument("asymptotic annealed: requires c > 1");
  const double k = params.k;
  const double rate = std::log(1.0 / params.p) / c;
  const double beta = params.beta;
  AsymptoticLogZ a;
  a.identical = k * k * rate + k - f(2 * beta, params.p) * k * (k - 1) / 2.0 -
                k * std::log(k);
  a.disjoint = 2 * k * k * rate + 2 * k - beta_times(beta, params.htilde * k * k) -
               f(beta, params.p) * k * k - 2 * k * std::log(k);
  const double hc = critical_field(beta, params.p, c);
  if (nearly_equal(params.htilde, hc)) {
    a.region = Region::Boundary;
  } else {
    a.region = params.htilde > hc ? Region::A : Region::B;
  }
  return a;
}

double annealed_log_z(const ModelParams& params, AnnealedMode mode) {
  if (mode == AnnealedMode::ExactSum) {
    const auto t = annealed_terms(params);
    return log_sum_exp(t);
  }
  const auto a = annealed_log_z_asymptotic(params);
  if (a.region == Region::Boundary) {
    throw std::domain_error("annealed_log_z: h~ = h~_c, asymptotic branch undefined");
  }
  return a.region == Region::A ? a.identical : a.disjoint;
}

OverlapArgmax argmax_overlap(const ModelParams& params) {
  const auto t = annealed_terms(params);
  OverlapArgmax r;
  r.value = kNegInf;
  for (int q = 0; q <= params.k; ++q) {
    if (t[q] > r.value) {
      r.value = t[q];
      r.q = q;
    }
  }
  for (int q = 0; q <= params.k; ++q) {
    if (nearly_equal(t[q], r.value)) r.tied.push_back(q);
  }
  r.tie = r.tied.size() > 1;
  if (!r.tie) r.tied.clear();
  return r;
}

}  // namespace cavity::thermo
