#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cavity/params.hpp"

/// Closed-form annealed thermodynamics of the cavity pair measure.
///
/// The per-pair weight exponent f(beta) = -ln[p + (1-p) e^{-beta}] and the
/// binomial rate function I_p are Legendre duals; every critical value of
/// the phase diagram is expressed through them.
namespace cavity::thermo {

/// f(beta); beta may be +inf, where f = ln(1/p).
double f(double beta, double p);
/// f'(beta) = (1-p) e^{-beta} / (p + (1-p) e^{-beta}).
double f_prime(double beta, double p);
/// f''(beta) = -f'(1 - f') < 0.
double f_second(double beta, double p);
/// order in {0,1,2}; throws std::invalid_argument otherwise or for beta < 0.
double f_eval(double beta, double p, int order);

/// I_p(x) = x ln(x/(1-p)) + (1-x) ln((1-x)/p) and its first two
/// derivatives; endpoints by continuous extension.
double rate_function(double x, double p, int order = 0);

struct LegendrePoint {
  double x_star;
  double value;
};

/// Closed form: x* = f'(beta), value = I_p(x*) + beta x* = f(beta).
LegendrePoint legendre_minimizer(double beta, double p);

/// Independent numerical minimisation of I_p(x) + beta x: a uniform grid of
/// `grid_points` followed by golden-section refinement of the best cell.
LegendrePoint legendre_numeric(double beta, double p, int grid_points = 10000);

/// h~_c(beta) = (f(2b)/2 - f(b) + ln(1/p)/c) / b. Returns +inf at beta = 0
/// (the limit) and 0 at beta = +inf.
double critical_field(double beta, double p, double c);

/// C(beta) = ln(1/p)/c - f(beta) + beta f'(beta); strictly decreasing.
double low_temperature_function(double beta, double p, double c);

/// Zero of C(beta) for c > 1 by bisection (1e-13 absolute, 200 iterations).
double critical_beta(double p, double c);

/// For c > 2: zero of f(2b) - f(4b)/2 - ln(1/p)/c. Empty when c <= 2.
std::optional<double> bar_critical_beta(double p, double c);
/// For c > 2: zero of f(2b) - 2b f'(4b) - ln(1/p)/c. Empty when c <= 2.
std::optional<double> hat_critical_beta(double p, double c);

enum class Region { A, B, C, Boundary };
std::string to_string(Region r);

struct PhaseDensities {
  double energy = 0.0;           ///< lim mu2(H)/k^2
  double energy_variance = 0.0;  ///< lim var_mu2(H)/k^2
  double overlap = 0.0;          ///< lim mu2(q)/k
  double entropy = 0.0;          ///< lim S/k^2
};

struct PhaseReport {
  Region region = Region::Boundary;
  double htilde_c = 0.0;
  double beta_c = 0.0;
  std::optional<double> bar_beta_c;
  std::optional<double> hat_beta_c;
  /// Densities of the classified region; NaN on a boundary.
  PhaseDensities densities;
  /// Both branches, always filled (disjoint uses B or C by beta vs beta_c).
  PhaseDensities identical_phase;
  PhaseDensities disjoint_phase;
};

/// The limiting densities of one region's expressions, evaluated at params
/// whatever region params actually fall in. B and C share all but the
/// entropy. Throws std::invalid_argument for Boundary.
PhaseDensities region_densities(const ModelParams& params, Region region);

/// Critical values only (h~_c, beta_c, and the c > 2 diagnostics).
/// Requires c > 1.
PhaseReport critical_lines(const ModelParams& params);

/// Region A: h~ > h~_c; B: h~ < h~_c and beta > beta_c; C: h~ < h~_c and
/// beta < beta_c. Exact equalities are reported as Boundary.
PhaseReport phase_classify(const ModelParams& params);

/// ln[C(n,2k-q) C(2k-q,q) C(2(k-q),k-q)] (-inf when 2k-q > n).
double theta(const ModelParams& params, int q);
/// -beta h (k-q) - f(beta)(k^2-q^2) - f(2 beta) q(q-1)/2.
double phi(const ModelParams& params, int q);
/// Theta(q) + Phi(q) for q = 0..k.
std::vector<double> annealed_terms(const ModelParams& params);

enum class AnnealedMode { ExactSum, Asymptotic };

struct AsymptoticLogZ {
  double identical = 0.0;  ///< q = k branch, valid for h~ > h~_c
  double disjoint = 0.0;   ///< q = 0 branch, valid for h~ < h~_c
  Region region = Region::Boundary;  ///< A, B (stands for B or C), or Boundary
  /// Leading terms only; the o(k) remainder is dropped.
  static constexpr const char* kDroppedTerms = "o(k)";
};

AsymptoticLogZ annealed_log_z_asymptotic(const ModelParams& params);

/// ln E Z. ExactSum is the log-sum over q of annealed_terms; Asymptotic
/// selects the branch by h~ vs h~_c and throws std::domain_error on the
/// boundary.
double annealed_log_z(const ModelParams& params, AnnealedMode mode);

struct OverlapArgmax {
  int q = 0;
  double value = 0.0;
  bool tie = false;
  std::vector<int> tied;  ///< all maximisers when tie is true
};

OverlapArgmax argmax_overlap(const ModelParams& params);

/// beta * e with the convention 0 * inf = 0 (zero energy at zero temperature).
double beta_times(double beta, double energy);

}  // namespace cavity::thermo
