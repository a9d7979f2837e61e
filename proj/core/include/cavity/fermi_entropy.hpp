#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "cavity/configuration.hpp"
#include "cavity/graph.hpp"
#include "cavity/params.hpp"

namespace cavity {

/// Missing-link densities with positive configurational entropy:
/// { x in [0,1] : I_p(x) < ln(1/p)/c }, an interval around 1-p.
struct XcSet {
  double lower = 0.0;
  double upper = 1.0;
  double p = 0.5;
  double threshold = 0.0;  ///< ln(1/p)/c

  /// Evaluates the defining strict inequality directly.
  bool contains(double x) const;
};

/// Endpoints by bisection on each side of 1-p (1e-15 absolute); an endpoint
/// sits at 0 or 1 when the rate function there is already below threshold.
XcSet xc_set(double c, double p);

/// { j in 0..k : j/k in X_c }.
std::vector<int> jc_levels(const XcSet& xc, int k);

struct LevelCount {
  int j = 0;
  std::uint32_t empirical = 0;  ///< sites outside sigma with j missing links to sigma
  double expected = 0.0;        ///< (n-k) C(k,j) (1-p)^j p^(k-j)
  double sd = 0.0;              ///< binomial standard deviation
  bool in_jc = false;
  double log_lower = 0.0;       ///< k(-delta + ln(1/p)/c - I_p(j/k)), j in J_c
  double log_upper = 0.0;       ///< k(+delta + ln(1/p)/c - I_p(j/k)), or k delta
  bool within_window = false;
};

std::vector<LevelCount> degeneracy_stats(const Graph& graph, const Configuration& sigma,
                                         const ModelParams& params, double delta);

/// Degeneracies g_j of levels j = 0..size-1 (energy j + offset).
struct LevelSpectrum {
  std::vector<double> g;
  double offset = 0.0;

  double total() const;
};

/// Text form: one `j g_j` pair per line, `#` comments allowed.
LevelSpectrum parse_spectrum(const std::string& text);
LevelSpectrum load_spectrum(const std::string& path);

struct OccupationSolution {
  double lambda = 0.0;
  double mu = 0.0;
  std::vector<double> occupations;
  double entropy = 0.0;           ///< -sum g_j E(x_j), E(x) = x ln x + (1-x) ln(1-x)
  double residual_particles = 0.0;  ///< |sum g x - N| / max(1, N)
  double residual_energy = 0.0;     ///< |sum g j x - E| / max(1, |E|)
  int iterations = 0;
};

/// (N, E) outside the attainable region.
class InfeasibleOccupation : public std::invalid_argument {
 public:
  InfeasibleOccupation(const std::string& what, double n_max, double e_min, double e_max)
      : std::invalid_argument(what), n_max_(n_max), e_min_(e_min), e_max_(e_max) {}
  double n_max() const { return n_max_; }
  double e_min() const { return e_min_; }
  double e_max() const { return e_max_; }

 private:
  double n_max_;
  double e_min_;
  double e_max_;
};

/// Lowest and highest sum g_j j x_j over 0 <= x_j <= 1 with sum g_j x_j = N.
std::pair<double, double> energy_range(const LevelSpectrum& spectrum, double N);

/// Solves sum g_j x_j = N and sum g_j j x_j = E with x_j = 1/(1+e^{lambda+mu j}):
/// lambda for fixed mu is found by safeguarded Newton on the (decreasing)
/// particle number, and mu by safeguarded Newton on the constrained energy.
/// Energies are measured in level index j (the offset is a constant shift).
/// Throws InfeasibleOccupation unless 0 < N < sum g and E lies strictly
/// inside energy_range (a single occupied level accepts only its own energy).
OccupationSolution occupation_solve(const LevelSpectrum& spectrum, double N, double E,
                                    double tol = 1e-12);

/// Upper estimate of (1/k^2) ln #{tau : q = alpha k, H0 = rho k^2}: the
/// outside part is bounded by the maximum entropy of occupations of the
/// empirical outside levels over rho' in [rho - delta, rho + 2 delta]; the
/// inside part by 2^k. Returns -inf when no rho' is attainable.
double entropy_estimate(const Graph& graph, const Configuration& sigma,
                        const ModelParams& params, double alpha, double rho, double delta,
                        int rho_points = 61);

}  // namespace cavity
