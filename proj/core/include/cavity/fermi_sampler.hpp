#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "cavity/configuration.hpp"
#include "cavity/graph.hpp"
#include "cavity/hamiltonian.hpp"
#include "cavity/params.hpp"
#include "cavity/rng.hpp"

namespace cavity {

/// ln Z_sigma = ln sum_{|tau|=k} prod_{i in tau} e^{-beta h_i(sigma)}.
///
/// Grouped by the at most 2(k+1) distinct levels, with binomial weights for
/// the occupancy of each level. beta = +inf counts the zero-energy subsets
/// (the result is -inf when there are none). Throws for beta < 0.
double log_z_sigma(const FieldTable& table, double beta);

/// Same quantity by the site-by-site elementary symmetric recursion, O(nk).
double log_z_sigma_sitewise(const FieldTable& table, double beta);

/// One exact draw from P(sigma, .) = e^{-beta H(sigma, .)} / Z_sigma.
/// beta = +inf draws uniformly among the minimal-energy subsets.
Configuration sample_step(const FieldTable& table, double beta, CounterRng& rng);

/// Reference sampler by backward traversal of the site-wise table.
Configuration sample_step_sitewise(const FieldTable& table, double beta, CounterRng& rng);

/// states[0..T]; transition t goes states[t] -> states[t+1] with energy
/// H(states[t], states[t+1]), overlap q and ln Z_{states[t]}.
struct Trajectory {
  std::vector<Configuration> states;
  std::vector<double> energies;
  std::vector<std::uint32_t> overlaps;
  std::vector<double> log_z;

  std::size_t steps() const { return energies.size(); }
};

/// Iterates the kernel for `steps` transitions. The initial state is a
/// uniform k-subset drawn from the same seeded stream unless given.
Trajectory run_chain(const Graph& graph, const ModelParams& params, std::uint64_t steps,
                     std::uint64_t seed,
                     const std::optional<Configuration>& initial = std::nullopt);

struct OscillationReport {
  bool period2 = false;
  bool fixed = false;
};

/// Examines the trailing `window` transitions. Throws std::invalid_argument
/// if window is zero or exceeds the number of transitions.
OscillationReport detect_oscillation(const Trajectory& traj, std::size_t window);

/// CSV `step,energy,overlap,logZsigma,state`; row s is the transition
/// states[s-1] -> states[s].
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

struct StationaryReport {
  double l1 = 0.0;                ///< || mu P - mu ||_1
  double detailed_balance = 0.0;  ///< max |mu(s)P(s,t) - mu(t)P(t,s)|
  double max_row_error = 0.0;     ///< max_s |sum_t P(s,t) - 1|
  double max_column_error = 0.0;  ///< max_t |sum_s P(s,t) - 1|
  std::uint64_t states = 0;
};

inline constexpr std::uint64_t kDefaultKernelCap = 4000;

/// Materialises the full kernel on all C(n,k) configurations with
/// mu(sigma) = Z_sigma / Z. Throws BudgetExceeded above `cap` states.
StationaryReport stationary_check(const Graph& graph, const ModelParams& params,
                                  std::uint64_t cap = kDefaultKernelCap);

}  // namespace cavity
