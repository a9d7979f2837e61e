#include "cavity/second_moment.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cavity/configuration.hpp"
#include "cavity/enumeration.hpp"
#include "cavity/errors.hpp"
#include "cavity/graph.hpp"
#include "cavity/numeric.hpp"
#include "cavity/parallel.hpp"
#include "cavity/thermo.hpp"

namespace cavity::second_moment {

namespace {

int in_first(Region r) { return r == Region::S || r == Region::I ? 1 : 0; }
int in_second(Region r) { return r == Region::I || r == Region::T ? 1 : 0; }

Region parse_region(char c) {
  switch (c) {
    case 'S': return Region::S;
    case 'I': return Region::I;
    case 'T': return Region::T;
    case 'C': return Region::C;
    default: throw std::invalid_argument(std::string("unknown region letter '") + c + "'");
  }
}

std::string strip_primes(std::string_view label) {
  std::string out;
  for (std::size_t i = 0; i < label.size(); ++i) {
    if (label[i] == '\'') continue;
    if (label.substr(i, 3) == "\xE2\x80\xB2") {
      i += 2;
      continue;
    }
    out.push_back(label[i]);
  }
  return out;
}

struct Coefficients {
  double A;  // 2f(b) - f(2b)
  double B;  // f(b) + f(2b) - f(3b)
  double D;  // 2f(2b) - f(4b)
};

Coefficients coefficients(double beta, double p) {
  const double f1 = thermo::f(beta, p);
  const double f2 = thermo::f(2 * beta, p);
  const double f3 = thermo::f(3 * beta, p);
  const double f4 = thermo::f(4 * beta, p);
  return {2 * f1 - f2, f1 + f2 - f3, 2 * f2 - f4};
}

double log_fact_clamped(int m) { return m <= 1 ? 0.0 : log_factorial(m); }

void check_beta(double beta) {
  if (!(beta >= 0.0)) throw std::invalid_argument("beta must be >= 0");
}

}  // namespace

int multiplicity(Region a, Region b) {
  return in_first(a) * in_second(b) + in_first(b) * in_second(a);
}

int multiplicity(Cell a, Cell b) {
  return multiplicity(a.first, b.first) + multiplicity(a.second, b.second);
}

int multiplicity(std::string_view a, std::string_view b) {
  const std::string x = strip_primes(a);
  const std::string y = strip_primes(b);
  if (x.size() != y.size() || x.empty() || x.size() > 2) {
    throw std::invalid_argument("multiplicity: labels must both be regions or both cells");
  }
  if (x.size() == 1) return multiplicity(parse_region(x[0]), parse_region(y[0]));
  return multiplicity(Cell{parse_region(x[0]), parse_region(x[1])},
                      Cell{parse_region(y[0]), parse_region(y[1])});
}

int OverlapCell::total() const {
  int s = 0;
  for (int v : g) s += v;
  return s;
}

std::array<int, 6> OverlapCell::complements() const {
  return {k - q - (g[0] + g[1] + g[2]),  q - (g[3] + g[4] + g[5]),
          k - q - (g[6] + g[7] + g[8]),  k - qp - (g[0] + g[3] + g[6]),
          qp - (g[1] + g[4] + g[7]),     k - qp - (g[2] + g[5] + g[8])};
}

bool OverlapCell::feasible() const {
  if (k < 0 || q < 0 || q > k || qp < 0 || qp > k) return false;
  for (int v : g)
    if (v < 0) return false;
  for (int c : complements())
    if (c < 0) return false;
  return true;
}

PsiPair psi_and_bound(const OverlapCell& cell, double beta, double p) {
  check_beta(beta);
  if (!cell.feasible()) throw std::invalid_argument("psi_and_bound: infeasible cell");
  const auto [A, B, D] = coefficients(beta, p);
  const auto& g = cell.g;
  // g[r-1] holds g_r
  const double C1 = A * (g[4] + g[5] + g[7] + g[8]);
  const double C3 = A * (g[3] + g[4] + g[6] + g[7]);
  const double C7 = A * (g[1] + g[2] + g[4] + g[5]);
  const double C9 = A * (g[0] + g[1] + g[3] + g[4]);
  const double C2 = A * (g[3] + g[5] + g[6] + g[8]) + B * (g[4] + g[7]);
  const double C4 = A * (g[1] + g[2] + g[7] + g[8]) + B * (g[4] + g[5]);
  const double C6 = A * (g[0] + g[1] + g[6] + g[7]) + B * (g[3] + g[4]);
  const double C8 = A * (g[0] + g[2] + g[3] + g[5]) + B * (g[1] + g[4]);
  const double C5 = A * (g[0] + g[2] + g[6] + g[8]) + B * (g[1] + g[3] + g[5] + g[7]);
  const std::array<double, 9> C{C1, C2, C3, C4, C5, C6, C7, C8, C9};
  double sum = 0.0;
  for (int r = 0; r < 9; ++r) sum += g[r] * C[r];
  const double g5 = g[4];
  PsiPair out;
  out.psi = g5 * (g5 - 1) / 2.0 * D + 0.5 * sum;
  out.psi_bar = psi_bar(cell.k, cell.total(), g[4], beta, p);
  return out;
}

double psi_bar(int k, int g, int g5, double beta, double p) {
  check_beta(beta);
  const auto [A, B, D] = coefficients(beta, p);
  (void)A;
  const double a = g5;
  return a * (a - 1) / 2.0 * D + 0.5 * B * (std::min(k, g) + a) * (g - a);
}

double theta2_bar(int q, int qp, int g, double log_n, int k) {
  if (q < 0 || q > k || qp < 0 || qp > k || g < 0 || g > std::min(2 * k - q, 2 * k - qp)) {
    throw std::invalid_argument("theta2_bar: (q, q', g) outside the feasible range");
  }
  return (4.0 * k - q - qp - g) * log_n - log_fact_clamped(q - g) - log_fact_clamped(qp - g) -
         2.0 * (log_fact_clamped(k - q - g) + log_fact_clamped(k - qp - g)) + 8.0;
}

double log_cell_count(const OverlapCell& cell, double log_n,
                      const std::optional<std::int64_t>& n_exact) {
  const std::int64_t m = 4LL * cell.k - cell.q - cell.qp - cell.total();
  double v;
  if (n_exact) {
    if (m > *n_exact) return kNegInf;
    v = log_factorial(*n_exact) - log_factorial(*n_exact - m);
  } else {
    v = log_falling_factorial_real(log_n, m);
    if (v == kNegInf) return kNegInf;
  }
  for (int x : cell.g) v -= log_factorial(x);
  for (int x : cell.complements()) v -= log_factorial(x);
  return v;
}

namespace {

double brute(const ModelParams& params, std::uint64_t cap) {
  if (!params.n_exact) throw std::invalid_argument("brute second moment needs an integer n");
  const std::int64_t n = *params.n_exact;
  if (n > 32) throw BudgetExceeded("brute second moment: n > 32");
  const int k = params.k;
  if (4.0 * log_binomial(n, k) > std::log(static_cast<double>(cap)) + 1e-9) {
    throw BudgetExceeded("brute second moment: C(n,k)^4 exceeds the cap of " +
                         std::to_string(cap));
  }
  std::vector<std::uint32_t> masks;
  for_each_subset(static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(k),
                  [&](std::span<const std::uint32_t> s) {
                    std::uint32_t m = 0;
                    for (auto v : s) m |= 1u << v;
                    masks.push_back(m);
                  });
  std::array<double, 5> F{};
  for (int m = 1; m <= 4; ++m) F[m] = thermo::f(m * params.beta, params.p);
  const double h = params.h();
  const std::size_t N = masks.size();
  const auto nn = static_cast<int>(n);

  std::vector<double> partial(N);
  parallel_for(N, [&](std::size_t a) {
    LogAccumulator acc;
    std::vector<int> s(nn), t(nn), s2(nn), t2(nn);
    for (int i = 0; i < nn; ++i) s[i] = (masks[a] >> i) & 1u;
    for (std::size_t b = 0; b < N; ++b) {
      for (int i = 0; i < nn; ++i) t[i] = (masks[b] >> i) & 1u;
      const int q = std::popcount(masks[a] & masks[b]);
      for (std::size_t c = 0; c < N; ++c) {
        for (int i = 0; i < nn; ++i) s2[i] = (masks[c] >> i) & 1u;
        for (std::size_t d = 0; d < N; ++d) {
          for (int i = 0; i < nn; ++i) t2[i] = (masks[d] >> i) & 1u;
          const int qp = std::popcount(masks[c] & masks[d]);
          double e = -thermo::beta_times(params.beta, h * (2 * k - q - qp));
          for (int i = 0; i < nn; ++i) {
            for (int j = i + 1; j < nn; ++j) {
              const int m = s[i] * t[j] + s[j] * t[i] + s2[i] * t2[j] + s2[j] * t2[i];
              e -= F[m];
            }
          }
          acc.add(e);
        }
      }
    }
    partial[a] = acc.value();
  });
  return log_sum_exp(partial);
}

template <typename Fn>
void for_each_cell(int k, int q, int qp, Fn&& fn) {
  OverlapCell cell;
  cell.k = k;
  cell.q = q;
  cell.qp = qp;
  std::array<int, 3> row{k - q, q, k - q};
  std::array<int, 3> col{k - qp, qp, k - qp};
  auto rec = [&](auto&& self, int r) -> void {
    if (r == 9) {
      fn(static_cast<const OverlapCell&>(cell));
      return;
    }
    const int a = r / 3;
    const int b = r % 3;
    const int top = std::min(row[a], col[b]);
    for (int v = 0; v <= top; ++v) {
      cell.g[r] = v;
      row[a] -= v;
      col[b] -= v;
      self(self, r + 1);
      row[a] += v;
      col[b] += v;
    }
    cell.g[r] = 0;
  };
  rec(rec, 0);
}

double decomposition(const ModelParams& params, std::uint64_t cap) {
  const int k = params.k;
  if (11.0 * std::log(k + 1.0) > std::log(static_cast<double>(cap)) + 1e-9) {
    throw BudgetExceeded("decomposition second moment: (k+1)^11 exceeds the cap of " +
                         std::to_string(cap));
  }
  std::vector<double> phi(k + 1);
  for (int q = 0; q <= k; ++q) phi[q] = thermo::phi(params, q);
  std::vector<double> partial(static_cast<std::size_t>(k + 1) * (k + 1));
  parallel_for(partial.size(), [&](std::size_t idx) {
    const int q = static_cast<int>(idx) / (k + 1);
    const int qp = static_cast<int>(idx) % (k + 1);
    LogAccumulator acc;
    for_each_cell(k, q, qp, [&](const OverlapCell& cell) {
      const double count = log_cell_count(cell, params.log_n, params.n_exact);
      if (count == kNegInf) return;
      acc.add(count + phi[q] + phi[qp] + psi_and_bound(cell, params.beta, params.p).psi);
    });
    partial[idx] = acc.value();
  });
  return log_sum_exp(partial);
}

}  // namespace

double log_second_moment(const ModelParams& params, Mode mode, std::uint64_t cap) {
  params.validate();
  if (mode == Mode::Brute) return brute(params, cap == 0 ? kDefaultBruteCap : cap);
  return decomposition(params, cap == 0 ? kDefaultDecompositionCap : cap);
}

double lemma_objective(const ModelParams& params, int q, int g, int g5) {
  const int k = params.k;
  if (q < 0 || q > k || g5 < 0 || g5 > q || g < g5 || g > 2 * k - q) {
    throw std::invalid_argument("lemma_objective: point outside the polyhedron");
  }
  return theta2_bar(q, q, g, params.log_n, k) + 2.0 * thermo::phi(params, q) +
         psi_bar(k, g, g5, params.beta, params.p);
}

LemmaPoint lemma_max(const ModelParams& params, int g_min) {
  params.validate();
  const int k = params.k;
  LemmaPoint best;
  best.value = kNegInf;
  bool found = false;
  for (int q = 0; q <= k; ++q) {
    for (int g = std::max(0, g_min); g <= 2 * k - q; ++g) {
      for (int g5 = 0; g5 <= std::min(q, g); ++g5) {
        const double v = lemma_objective(params, q, g, g5);
        if (!found || v > best.value) {
          best = {q, g, g5, v};
          found = true;
        }
      }
    }
  }
  if (!found) throw std::invalid_argument("lemma_max: empty polyhedron");
  return best;
}

double constrained_max_leading(const ModelParams& params) {
  params.validate();
  const double k = params.k;
  if (params.k < 2) throw std::invalid_argument("constrained_max_leading: needs k >= 2");
  const double hc = thermo::critical_field(params.beta, params.p, params.c());
  const double ln_n = params.log_n;
  if (params.htilde >= hc) {
    return -thermo::f(2 * params.beta, params.p) * k * (k - 1) + (2 * k - 2) * ln_n -
           2 * log_factorial(params.k - 2);
  }
  return -thermo::beta_times(2 * params.beta, params.h() * k) -
         2 * thermo::f(params.beta, params.p) * k * k + (4 * k - 2) * ln_n -
         4 * log_factorial(params.k - 2);
}

double quadratic_part(const ModelParams& params, double q, double g, double g5) {
  const double k = params.k;
  const double beta = params.beta;
  const double p = params.p;
  const auto [A, B, D] = coefficients(beta, p);
  (void)A;
  return -2 * thermo::beta_times(beta, params.h() * (k - q)) -
         2 * thermo::f(beta, p) * (k * k - q * q) - thermo::f(2 * beta, p) * q * (q - 1) +
         g5 * (g5 - 1) * D / 2.0 + 0.5 * B * (std::min(k, g) + g5) * (g - g5) +
         (4 * k - 2 * q - g) * params.log_n;
}

OverlapCell random_feasible_cell(int k, CounterRng& rng) {
  if (k < 0) throw std::invalid_argument("random_feasible_cell: k must be >= 0");
  OverlapCell cell;
  cell.k = k;
  cell.q = static_cast<int>(rng.below(k + 1));
  cell.qp = static_cast<int>(rng.below(k + 1));
  std::array<int, 3> row{k - cell.q, cell.q, k - cell.q};
  std::array<int, 3> col{k - cell.qp, cell.qp, k - cell.qp};
  for (int r = 0; r < 9; ++r) {
    const int slack = std::min(row[r / 3], col[r % 3]);
    const int v = static_cast<int>(rng.below(static_cast<std::uint64_t>(slack) + 1));
    cell.g[r] = v;
    row[r / 3] -= v;
    col[r % 3] -= v;
  }
  return cell;
}

std::vector<SelfAveragingRow> self_averaging_experiment(const SelfAveragingSetup& setup) {
  if (setup.replicas < 2) throw std::invalid_argument("self averaging: need >= 2 replicas");
  if (!(setup.c_bar > 0.0)) throw std::invalid_argument("self averaging: c_bar must be > 0");
  std::vector<SelfAveragingRow> rows;
  for (int k : setup.k_list) {
    const double n_real = std::round(std::exp(k * std::log(1.0 / setup.p) / setup.c_bar));
    if (!(n_real >= 2.0 && n_real >= k && n_real < 1e9)) {
      throw ConfigError("self averaging: k = " + std::to_string(k) +
                        " gives an unusable vertex count");
    }
    const auto n = static_cast<std::uint32_t>(n_real);
    const ModelParams params =
        ModelParams::for_graph(n, k, setup.p, setup.beta, setup.htilde);
    if (log_binomial(n, k) > std::log(static_cast<double>(setup.enumeration_cap)) + 1e-9) {
      throw BudgetExceeded("self averaging: C(" + std::to_string(n) + "," +
                           std::to_string(k) + ") exceeds the enumeration cap");
    }
    std::vector<double> lz(setup.replicas);
    const std::uint64_t stream = mix_seed(setup.seed, static_cast<std::uint64_t>(k));
    parallel_for(lz.size(), [&](std::size_t r) {
      const Graph g = generate_graph(n, setup.p, mix_seed(stream, r));
      lz[r] = exact_log_z(g, params, setup.enumeration_cap);
    });
    const double top = *std::max_element(lz.begin(), lz.end());
    SelfAveragingRow row;
    row.k = k;
    row.n = n;
    row.replicas = setup.replicas;
    row.reference = 1.0 / (n_real * n_real);
    row.log_annealed = thermo::annealed_log_z(params, thermo::AnnealedMode::ExactSum);
    if (top == kNegInf) {
      row.log_mean_z = kNegInf;
      row.log_var_z = kNegInf;
      row.ratio = std::numeric_limits<double>::quiet_NaN();
      rows.push_back(row);
      continue;
    }
    double mean = 0.0;
    for (double x : lz) mean += std::exp(x - top);
    mean /= setup.replicas;
    double var = 0.0;
    for (double x : lz) {
      const double d = std::exp(x - top) - mean;
      var += d * d;
    }
    var /= setup.replicas - 1;
    row.log_mean_z = top + std::log(mean);
    row.log_var_z = var > 0.0 ? 2 * top + std::log(var) : kNegInf;
    row.ratio = var / (mean * mean);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace cavity::second_moment
