#include "cavity/enumeration.hpp"

#include <cmath>
#include <string>

#include "cavity/errors.hpp"
#include "cavity/fermi_sampler.hpp"
#include "cavity/hamiltonian.hpp"
#include "cavity/numeric.hpp"
#include "cavity/parallel.hpp"
#include "cavity/thermo.hpp"

namespace cavity {

namespace {

void check_budget(double log_count, std::uint64_t cap, const char* what) {
  if (log_count > std::log(static_cast<double>(cap)) + 1e-9) {
    throw BudgetExceeded(std::string(what) + ": enumeration exceeds the cap of " +
                         std::to_string(cap));
  }
}

void check_size(const Graph& graph, const ModelParams& params) {
  if (params.k < 1 || static_cast<std::uint32_t>(params.k) > graph.size()) {
    throw std::invalid_argument("enumeration: need 1 <= k <= n");
  }
  if (!(params.beta >= 0.0)) throw std::invalid_argument("enumeration: beta must be >= 0");
}

}  // namespace

StationaryMeasure stationary_measure(const Graph& graph, const ModelParams& params,
                                     std::uint64_t cap) {
  check_size(graph, params);
  check_budget(log_binomial(graph.size(), params.k), cap, "stationary_measure");
  StationaryMeasure m;
  m.configs = all_configurations(graph.size(), static_cast<std::uint32_t>(params.k));
  m.log_z_sigma.resize(m.configs.size());
  const double h = params.h();
  parallel_for(m.configs.size(), [&](std::size_t i) {
    m.log_z_sigma[i] = log_z_sigma(cavity_fields(graph, m.configs[i], h), params.beta);
  });
  m.log_z = log_sum_exp(m.log_z_sigma);
  return m;
}

double exact_log_z(const Graph& graph, const ModelParams& params, std::uint64_t cap) {
  return stationary_measure(graph, params, cap).log_z;
}

double exact_log_z_pairs(const Graph& graph, const ModelParams& params, std::uint64_t cap) {
  check_size(graph, params);
  check_budget(2.0 * log_binomial(graph.size(), params.k), cap, "exact_log_z_pairs");
  const auto configs = all_configurations(graph.size(), static_cast<std::uint32_t>(params.k));
  const double h = params.h();
  std::vector<double> rows(configs.size());
  parallel_for(configs.size(), [&](std::size_t s) {
    LogAccumulator acc;
    for (const auto& tau : configs) {
      const PairDiagnostics d = pair_energy(graph, configs[s], tau, h);
      acc.add(-thermo::beta_times(params.beta, d.H));
    }
    rows[s] = acc.value();
  });
  return log_sum_exp(rows);
}

EntropyReport exact_entropy(const Graph& graph, const ModelParams& params,
                            std::uint64_t cap) {
  const StationaryMeasure m = stationary_measure(graph, params, cap);
  EntropyReport r;
  r.log_z = m.log_z;
  double mean_log_zs = 0.0;
  for (std::size_t i = 0; i < m.configs.size(); ++i) {
    if (m.log_z_sigma[i] == kNegInf) continue;
    const double lm = m.log_mu(i);
    const double mu = std::exp(lm);
    r.direct -= mu * lm;
    mean_log_zs += mu * m.log_z_sigma[i];
  }
  r.via_free_energy = m.log_z - mean_log_zs;
  return r;
}

}  // namespace cavity
