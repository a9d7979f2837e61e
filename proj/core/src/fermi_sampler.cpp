#include "cavity/fermi_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

#include "cavity/csv.hpp"
#include "cavity/errors.hpp"
#include "cavity/numeric.hpp"
#include "cavity/thermo.hpp"

namespace cavity {

namespace {

void check_beta(double beta) {
  if (!(beta >= 0.0)) throw std::invalid_argument("beta must be >= 0");
}

struct Level {
  double energy;
  std::uint32_t g;
  std::uint32_t l;
  int r;
};

std::vector<Level> occupied_levels(const FieldTable& t) {
  std::vector<Level> out;
  for (int r = 0; r < 2; ++r) {
    for (std::uint32_t l = 0; l < t.degeneracy.size(); ++l) {
      const std::uint32_t g = t.degeneracy[l][r];
      if (g > 0) out.push_back({t.level_energy(l, r), g, l, r});
    }
  }
  return out;
}

// Rows t = 0..L of the level recursion; row t covers the first t levels.
std::vector<std::vector<double>> level_tables(const std::vector<Level>& levels, int k,
                                              double beta) {
  std::vector<std::vector<double>> T(levels.size() + 1, std::vector<double>(k + 1, kNegInf));
  T[0][0] = 0.0;
  for (std::size_t t = 0; t < levels.size(); ++t) {
    const Level& lv = levels[t];
    const double lw = -thermo::beta_times(beta, lv.energy);
    const auto& prev = T[t];
    auto& cur = T[t + 1];
    for (int j = 0; j <= k; ++j) {
      LogAccumulator acc;
      const int top = std::min<int>(static_cast<int>(lv.g), j);
      for (int m = 0; m <= top; ++m) {
        if (prev[j - m] == kNegInf) continue;
        const double term = m == 0 ? 0.0 : m * lw;
        if (term == kNegInf) continue;
        acc.add(prev[j - m] + log_binomial(lv.g, m) + term);
      }
      cur[j] = acc.value();
    }
  }
  return T;
}

std::vector<double> log_weights(const FieldTable& t, double beta) {
  std::vector<double> lw(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) lw[i] = -thermo::beta_times(beta, t.fields[i]);
  return lw;
}

// (n+1) x (k+1), row-major.
std::vector<double> site_table(const std::vector<double>& lw, int k) {
  const std::size_t n = lw.size();
  const std::size_t w = static_cast<std::size_t>(k) + 1;
  std::vector<double> E((n + 1) * w, kNegInf);
  E[0] = 0.0;
  for (std::size_t m = 1; m <= n; ++m) {
    E[m * w] = 0.0;
    for (int j = 1; j <= k; ++j) {
      const double skip = E[(m - 1) * w + j];
      const double prev = E[(m - 1) * w + j - 1];
      const double take = (prev == kNegInf || lw[m - 1] == kNegInf) ? kNegInf : prev + lw[m - 1];
      E[m * w + j] = log_add(skip, take);
    }
  }
  return E;
}

void check_table(const FieldTable& t) {
  if (t.k < 0 || static_cast<std::size_t>(t.k) > t.size()) {
    throw std::invalid_argument("field table: k exceeds the number of sites");
  }
}

// Uniform choice among the subsets of least total field.
Configuration minimal_energy_draw(const FieldTable& t, CounterRng& rng) {
  std::map<double, std::vector<std::uint32_t>> by_energy;
  for (std::uint32_t i = 0; i < t.size(); ++i) by_energy[t.fields[i]].push_back(i);
  std::vector<std::uint32_t> chosen;
  std::uint32_t need = static_cast<std::uint32_t>(t.k);
  for (const auto& [e, sites] : by_energy) {
    if (need == 0) break;
    const auto g = static_cast<std::uint32_t>(sites.size());
    if (g <= need) {
      chosen.insert(chosen.end(), sites.begin(), sites.end());
      need -= g;
    } else {
      for (std::uint32_t idx : random_subset(rng, g, need)) chosen.push_back(sites[idx]);
      need = 0;
    }
  }
  return Configuration(std::move(chosen));
}

// Picks index m with probability exp(terms[m] - total) by a single uniform.
int draw_index(const std::vector<double>& terms, double total, CounterRng& rng) {
  const double u = rng.uniform();
  double cum = 0.0;
  int last = -1;
  for (std::size_t m = 0; m < terms.size(); ++m) {
    if (terms[m] == kNegInf) continue;
    last = static_cast<int>(m);
    cum += std::exp(terms[m] - total);
    if (u < cum) return last;
  }
  if (last < 0) throw NumericalFailure("sample_step: empty support");
  return last;
}

}  // namespace

double log_z_sigma(const FieldTable& table, double beta) {
  check_beta(beta);
  check_table(table);
  if (std::isinf(beta)) {
    std::int64_t zero = 0;
    for (double x : table.fields)
      if (x == 0.0) ++zero;
    return log_binomial(zero, table.k);
  }
  const auto levels = occupied_levels(table);
  return level_tables(levels, table.k, beta).back()[table.k];
}

double log_z_sigma_sitewise(const FieldTable& table, double beta) {
  check_beta(beta);
  check_table(table);
  const auto E = site_table(log_weights(table, beta), table.k);
  return E.back();
}

Configuration sample_step(const FieldTable& table, double beta, CounterRng& rng) {
  check_beta(beta);
  check_table(table);
  if (std::isinf(beta)) return minimal_energy_draw(table, rng);

  const auto levels = occupied_levels(table);
  const auto T = level_tables(levels, table.k, beta);
  if (T.back()[table.k] == kNegInf) throw NumericalFailure("sample_step: Z_sigma vanishes");

  std::vector<std::uint32_t> take(levels.size(), 0);
  int j = table.k;
  std::vector<double> terms;
  for (std::size_t t = levels.size(); t-- > 0 && j > 0;) {
    const Level& lv = levels[t];
    const double lw = -beta * lv.energy;
    const int top = std::min<int>(static_cast<int>(lv.g), j);
    terms.assign(top + 1, kNegInf);
    for (int m = 0; m <= top; ++m) {
      if (T[t][j - m] == kNegInf) continue;
      terms[m] = T[t][j - m] + log_binomial(lv.g, m) + (m == 0 ? 0.0 : m * lw);
    }
    const int m = draw_index(terms, T[t + 1][j], rng);
    take[t] = static_cast<std::uint32_t>(m);
    j -= m;
  }

  std::vector<std::vector<std::uint32_t>> sites(levels.size());
  {
    std::vector<std::size_t> index(table.degeneracy.size() * 2, 0);
    for (std::size_t t = 0; t < levels.size(); ++t) index[levels[t].l * 2 + levels[t].r] = t;
    for (std::uint32_t i = 0; i < table.size(); ++i) {
      const std::size_t t = index[table.level[i] * 2 + table.outside[i]];
      if (take[t] > 0) sites[t].push_back(i);
    }
  }
  std::vector<std::uint32_t> chosen;
  chosen.reserve(table.k);
  for (std::size_t t = 0; t < levels.size(); ++t) {
    if (take[t] == 0) continue;
    for (std::uint32_t idx : random_subset(rng, levels[t].g, take[t])) {
      chosen.push_back(sites[t][idx]);
    }
  }
  return Configuration(std::move(chosen));
}

Configuration sample_step_sitewise(const FieldTable& table, double beta, CounterRng& rng) {
  check_beta(beta);
  check_table(table);
  if (std::isinf(beta)) return minimal_energy_draw(table, rng);
  const auto lw = log_weights(table, beta);
  const auto E = site_table(lw, table.k);
  const std::size_t w = static_cast<std::size_t>(table.k) + 1;
  if (E.back() == kNegInf) throw NumericalFailure("sample_step: Z_sigma vanishes");
  std::vector<std::uint32_t> chosen;
  int j = table.k;
  for (std::size_t m = table.size(); m > 0 && j > 0; --m) {
    const double prev = E[(m - 1) * w + j - 1];
    const double p_take = std::exp(lw[m - 1] + prev - E[m * w + j]);
    if (rng.uniform() < p_take) {
      chosen.push_back(static_cast<std::uint32_t>(m - 1));
      --j;
    }
  }
  return Configuration(std::move(chosen));
}

Trajectory run_chain(const Graph& graph, const ModelParams& params, std::uint64_t steps,
                     std::uint64_t seed, const std::optional<Configuration>& initial) {
  if (steps < 1) throw std::invalid_argument("run_chain: steps must be >= 1");
  if (params.k < 1 || static_cast<std::uint32_t>(params.k) > graph.size()) {
    throw std::invalid_argument("run_chain: need 1 <= k <= n");
  }
  CounterRng rng(seed);
  Configuration sigma;
  if (initial) {
    if (initial->size() != static_cast<std::size_t>(params.k)) {
      throw std::invalid_argument("run_chain: initial configuration has the wrong size");
    }
    initial->validate(graph.size());
    sigma = *initial;
  } else {
    sigma = Configuration(random_subset(rng, graph.size(), params.k));
  }
  Trajectory traj;
  traj.states.reserve(steps + 1);
  traj.states.push_back(sigma);
  const double h = params.h();
  for (std::uint64_t s = 0; s < steps; ++s) {
    const FieldTable table = cavity_fields(graph, sigma, h);
    traj.log_z.push_back(log_z_sigma(table, params.beta));
    Configuration tau = sample_step(table, params.beta, rng);
    double energy = 0.0;
    for (std::uint32_t i : tau) energy += table.fields[i];
    traj.energies.push_back(energy);
    traj.overlaps.push_back(static_cast<std::uint32_t>(sigma.overlap(tau)));
    traj.states.push_back(tau);
    sigma = std::move(tau);
  }
  return traj;
}

OscillationReport detect_oscillation(const Trajectory& traj, std::size_t window) {
  const std::size_t T = traj.states.empty() ? 0 : traj.states.size() - 1;
  if (window == 0 || window > T) {
    throw std::invalid_argument("detect_oscillation: window must lie in [1, steps]");
  }
  std::vector<std::uint64_t> hash(window + 1);
  const std::size_t start = T - window;
  for (std::size_t i = 0; i <= window; ++i) hash[i] = traj.states[start + i].hash();
  auto same = [&](std::size_t a, std::size_t b) {
    return hash[a] == hash[b] && traj.states[start + a] == traj.states[start + b];
  };
  OscillationReport r;
  r.fixed = true;
  r.period2 = true;
  for (std::size_t i = 0; i < window; ++i) {
    const bool moved = !same(i, i + 1);
    if (moved) r.fixed = false;
    if (!moved) r.period2 = false;
    if (i + 2 <= window && !same(i, i + 2)) r.period2 = false;
  }
  if (window < 2) r.period2 = false;
  return r;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  CsvWriter csv(out, {"step", "energy", "overlap", "logZsigma", "state"});
  for (std::size_t s = 1; s <= traj.steps(); ++s) {
    csv.cell(static_cast<long long>(s))
        .cell(traj.energies[s - 1])
        .cell(static_cast<long long>(traj.overlaps[s - 1]))
        .cell(traj.log_z[s - 1])
        .cell(traj.states[s].to_string());
    csv.end_row();
  }
}

StationaryReport stationary_check(const Graph& graph, const ModelParams& params,
                                  std::uint64_t cap) {
  if (std::isinf(params.beta) || !(params.beta >= 0.0)) {
    throw std::invalid_argument("stationary_check: beta must be finite and >= 0");
  }
  const std::uint32_t n = graph.size();
  const auto k = static_cast<std::uint32_t>(params.k);
  if (k > n) throw std::invalid_argument("stationary_check: k exceeds n");
  const double log_states = log_binomial(n, k);
  if (log_states > std::log(static_cast<double>(cap)) + 1e-9) {
    throw BudgetExceeded("stationary_check: C(n,k) exceeds the kernel cap of " +
                         std::to_string(cap));
  }
  const auto configs = all_configurations(n, k);
  const std::size_t N = configs.size();
  std::vector<double> logP(N * N);
  std::vector<double> logZs(N);
  const double h = params.h();
  for (std::size_t s = 0; s < N; ++s) {
    const FieldTable table = cavity_fields(graph, configs[s], h);
    logZs[s] = log_z_sigma(table, params.beta);
    for (std::size_t t = 0; t < N; ++t) {
      double energy = 0.0;
      for (std::uint32_t i : configs[t]) energy += table.fields[i];
      logP[s * N + t] = -params.beta * energy - logZs[s];
    }
  }
  const double logZ = log_sum_exp(logZs);
  std::vector<double> mu(N);
  for (std::size_t s = 0; s < N; ++s) mu[s] = std::exp(logZs[s] - logZ);

  StationaryReport r;
  r.states = N;
  for (std::size_t t = 0; t < N; ++t) {
    double flow = 0.0;
    double column = 0.0;
    for (std::size_t s = 0; s < N; ++s) {
      const double P = std::exp(logP[s * N + t]);
      flow += mu[s] * P;
      column += P;
      const double back = mu[t] * std::exp(logP[t * N + s]);
      r.detailed_balance = std::max(r.detailed_balance, std::abs(mu[s] * P - back));
    }
    r.l1 += std::abs(flow - mu[t]);
    r.max_column_error = std::max(r.max_column_error, std::abs(column - 1.0));
  }
  for (std::size_t s = 0; s < N; ++s) {
    double row = 0.0;
    for (std::size_t t = 0; t < N; ++t) row += std::exp(logP[s * N + t]);
    r.max_row_error = std::max(r.max_row_error, std::abs(row - 1.0));
  }
  return r;
}

}  // namespace cavity
