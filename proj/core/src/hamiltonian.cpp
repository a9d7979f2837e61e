#include "cavity/hamiltonian.hpp"

#include <stdexcept>

#include "cavity/fermi_entropy.hpp"

namespace cavity {

FieldTable cavity_fields(const Graph& graph, const Configuration& sigma, double h) {
  sigma.validate(graph.size());
  const std::uint32_t n = graph.size();
  const auto k = static_cast<std::uint32_t>(sigma.size());
  const auto members = graph.mask(sigma.vertices());

  FieldTable t;
  t.k = static_cast<int>(k);
  t.h = h;
  t.fields.resize(n);
  t.level.resize(n);
  t.outside.resize(n);
  t.degeneracy.assign(k + 1, {0, 0});
  for (std::uint32_t i = 0; i < n; ++i) {
    const bool in = (members[i >> 6] >> (i & 63)) & 1u;
    const std::uint32_t linked = graph.adjacent_within(i, members);
    const std::uint32_t l = k - linked - (in ? 1u : 0u);
    const int r = in ? 0 : 1;
    t.level[i] = l;
    t.outside[i] = static_cast<std::uint8_t>(r);
    t.fields[i] = t.level_energy(l, r);
    ++t.degeneracy[l][r];
  }
  return t;
}

std::vector<std::array<std::uint32_t, 2>> level_occupations(const FieldTable& table,
                                                            const Configuration& tau) {
  std::vector<std::array<std::uint32_t, 2>> occ(table.degeneracy.size(), {0, 0});
  for (std::uint32_t i : tau) {
    if (i >= table.size()) throw std::invalid_argument("level_occupations: vertex out of range");
    ++occ[table.level[i]][table.outside[i]];
  }
  return occ;
}

PairDiagnostics pair_energy(const Graph& graph, const Configuration& sigma,
                            const Configuration& tau, double h) {
  if (sigma.size() != tau.size()) {
    throw std::invalid_argument("pair_energy: configurations differ in size");
  }
  sigma.validate(graph.size());
  tau.validate(graph.size());
  const auto k = static_cast<std::uint32_t>(sigma.size());
  PairDiagnostics d;
  d.q = static_cast<std::uint32_t>(sigma.overlap(tau));
  const auto members = graph.mask(sigma.vertices());
  for (std::uint32_t j : tau) {
    const bool in = (members[j >> 6] >> (j & 63)) & 1u;
    d.H0 += k - graph.adjacent_within(j, members) - (in ? 1u : 0u);
  }
  d.H = static_cast<double>(d.H0) + h * (k - d.q);
  return d;
}

namespace {

std::vector<std::uint32_t> difference(const Configuration& a, const Configuration& b) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t v : a)
    if (!b.contains(v)) out.push_back(v);
  return out;
}

std::uint32_t atypical_sites(const Graph& graph, const std::vector<std::uint32_t>& from,
                             const std::vector<std::uint32_t>& to, const XcSet& xc) {
  if (to.empty()) return 0;
  const auto members = graph.mask(to);
  std::uint32_t count = 0;
  for (std::uint32_t i : from) {
    const std::uint32_t missing =
        static_cast<std::uint32_t>(to.size()) - graph.adjacent_within(i, members);
    const double density = static_cast<double>(missing) / static_cast<double>(to.size());
    if (!xc.contains(density)) ++count;
  }
  return count;
}

bool within(double x, double lo, double hi) { return x >= lo && x <= hi; }

}  // namespace

PairDiagnostics typicality(const Graph& graph, const Configuration& sigma,
                           const Configuration& tau, const ModelParams& params,
                           double delta) {
  if (!(delta > 0.0 && delta < 0.5)) {
    throw std::invalid_argument("typicality: delta must lie in (0, 1/2)");
  }
  if (params.n_exact && *params.n_exact != graph.size()) {
    throw std::invalid_argument("typicality: params do not describe this graph");
  }
  PairDiagnostics d = pair_energy(graph, sigma, tau, params.h());
  const double k = static_cast<double>(sigma.size());

  const auto S = difference(sigma, tau);
  const auto T = difference(tau, sigma);
  const XcSet xc = xc_set(params.c(), params.p);
  d.qbar = atypical_sites(graph, T, S, xc) + atypical_sites(graph, S, T, xc);
  d.qbar_ratio = d.q == sigma.size() ? 0.0 : d.qbar / (2.0 * (k - d.q));

  const thermo::PhaseReport phase = thermo::phase_classify(params);
  d.region = phase.region;
  const double qk = d.q / k;
  const double hk = static_cast<double>(d.H0) / (k * k);
  const double beta = params.beta;
  switch (phase.region) {
    case thermo::Region::A: {
      const double centre = thermo::f_prime(2 * beta, params.p);
      d.in_q_interval = within(qk, 1.0 - delta, 1.0);
      d.in_h_interval = within(hk, centre - delta, centre + delta);
      d.in_qbar_interval = within(d.qbar_ratio, 0.0, 1.0);
      break;
    }
    case thermo::Region::B:
    case thermo::Region::C: {
      const double centre = thermo::f_prime(beta, params.p);
      d.in_q_interval = within(qk, 0.0, delta);
      d.in_h_interval = within(hk, centre - delta, centre + delta);
      d.in_qbar_interval = phase.region == thermo::Region::C
                               ? within(d.qbar_ratio, 0.0, 1.0)
                               : within(d.qbar_ratio, 1.0 - 2 * delta, 1.0);
      break;
    }
    case thermo::Region::Boundary:
      return d;
  }
  d.in_typical_set = d.in_q_interval && d.in_h_interval && d.in_qbar_interval;
  return d;
}

}  // namespace cavity
