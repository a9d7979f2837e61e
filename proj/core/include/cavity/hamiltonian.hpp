#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "cavity/configuration.hpp"
#include "cavity/graph.hpp"
#include "cavity/params.hpp"
#include "cavity/thermo.hpp"

namespace cavity {

/// Cavity fields of every site with respect to a configuration sigma.
///
/// Site i sits on level (l, r): l missing links to sigma (i itself excluded)
/// and r = 1 when i is outside sigma, so that its field is l + r h.
struct FieldTable {
  std::vector<double> fields;
  std::vector<std::uint32_t> level;    ///< l per site
  std::vector<std::uint8_t> outside;   ///< r per site
  /// degeneracy[l][r] = number of sites on level (l, r), l = 0..k.
  std::vector<std::array<std::uint32_t, 2>> degeneracy;
  int k = 0;
  double h = 0.0;

  std::size_t size() const { return fields.size(); }
  double level_energy(std::uint32_t l, int r) const { return l + r * h; }
};

FieldTable cavity_fields(const Graph& graph, const Configuration& sigma, double h);

/// n_{l,r}: how many sites of tau lie on each level of the table.
std::vector<std::array<std::uint32_t, 2>> level_occupations(const FieldTable& table,
                                                            const Configuration& tau);

struct PairDiagnostics {
  std::uint32_t q = 0;       ///< |sigma ∩ tau|
  std::uint64_t H0 = 0;      ///< ordered count of missing links sigma -> tau
  double H = 0.0;            ///< H0 + h (k - q)
  std::uint32_t qbar = 0;    ///< sites of the symmetric difference with atypical density
  double qbar_ratio = 0.0;   ///< qbar / 2(k-q), 0 when q = k
  thermo::Region region = thermo::Region::Boundary;
  bool in_q_interval = false;
  bool in_h_interval = false;
  bool in_qbar_interval = false;
  /// Empty on a phase boundary, where the interval family is undefined.
  std::optional<bool> in_typical_set;
};

/// q, H0 and H only. Throws std::invalid_argument on a size mismatch.
PairDiagnostics pair_energy(const Graph& graph, const Configuration& sigma,
                            const Configuration& tau, double h);

inline constexpr double kDefaultTypicalityDelta = 0.05;

/// Full diagnostics: overlap, energy and atypical-site densities tested
/// against the interval family of the phase selected by params.
/// Densities of missing links from a site of one half of the symmetric
/// difference are normalised by the size of the other half.
PairDiagnostics typicality(const Graph& graph, const Configuration& sigma,
                           const Configuration& tau, const ModelParams& params,
                           double delta = kDefaultTypicalityDelta);

}  // namespace cavity
