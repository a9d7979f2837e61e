#pragma once

#include <cstdint>
#include <vector>

#include "cavity/configuration.hpp"
#include "cavity/graph.hpp"
#include "cavity/params.hpp"

namespace cavity {

inline constexpr std::uint64_t kDefaultEnumerationCap = 5'000'000;

/// Exact ln Z = ln sum_sigma Z_sigma over all C(n,k) configurations.
/// Throws BudgetExceeded when C(n,k) > cap.
double exact_log_z(const Graph& graph, const ModelParams& params,
                   std::uint64_t cap = kDefaultEnumerationCap);

/// ln sum_{sigma,tau} e^{-beta H(sigma,tau)} by direct pair enumeration;
/// the cap applies to C(n,k)^2.
double exact_log_z_pairs(const Graph& graph, const ModelParams& params,
                         std::uint64_t cap = kDefaultEnumerationCap);

/// mu(sigma) = Z_sigma / Z in the lexicographic order of all_configurations.
struct StationaryMeasure {
  std::vector<Configuration> configs;
  std::vector<double> log_z_sigma;
  double log_z = 0.0;

  double log_mu(std::size_t i) const { return log_z_sigma[i] - log_z; }
};

StationaryMeasure stationary_measure(const Graph& graph, const ModelParams& params,
                                     std::uint64_t cap = kDefaultEnumerationCap);

struct EntropyReport {
  double log_z = 0.0;
  double direct = 0.0;           ///< -sum mu ln mu
  double via_free_energy = 0.0;  ///< ln Z + beta mu(F), F = -ln Z_sigma / beta
};

EntropyReport exact_entropy(const Graph& graph, const ModelParams& params,
                            std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace cavity
