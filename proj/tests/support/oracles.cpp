#include "oracles.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace oracle {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

void subsets(int n, int k, const std::function<void(const Configuration&)>& fn) {
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) != k) continue;
    std::vector<std::uint32_t> v;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1u) v.push_back(static_cast<std::uint32_t>(i));
    fn(Configuration(v));
  }
}

}  // namespace

std::array<std::array<int, 16>, 16> quad_table() {
  // Upper triangle, row by row, starting at the diagonal.
  static const std::vector<std::vector<int>> upper{
      {0, 1, 1, 0, 1, 2, 2, 1, 1, 2, 2, 1, 0, 1, 1, 0},
      {2, 1, 0, 2, 3, 2, 1, 2, 3, 2, 1, 1, 2, 1, 0},
      {0, 0, 2, 2, 1, 1, 2, 2, 1, 1, 1, 1, 0, 0},
      {0, 1, 1, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0},
      {2, 3, 3, 2, 1, 2, 2, 1, 0, 1, 1, 0},
      {4, 3, 2, 2, 3, 2, 1, 1, 2, 1, 0},
      {2, 2, 2, 2, 1, 1, 1, 1, 0, 0},
      {2, 1, 1, 1, 1, 0, 0, 0, 0},
      {0, 1, 1, 0, 0, 1, 1, 0},
      {2, 1, 0, 1, 2, 1, 0},
      {0, 0, 1, 1, 0, 0},
      {0, 0, 0, 0, 0},
      {0, 1, 1, 0},
      {2, 1, 0},
      {0, 0},
      {0},
  };
  std::array<std::array<int, 16>, 16> t{};
  for (int r = 0; r < 16; ++r)
    for (int c = r; c < 16; ++c) t[r][c] = t[c][r] = upper[r][c - r];
  return t;
}

std::vector<double> naive_fields(const Graph& g, const Configuration& sigma, double h) {
  std::vector<double> out(g.size(), 0.0);
  for (std::uint32_t i = 0; i < g.size(); ++i) {
    double s = 0.0;
    for (std::uint32_t j = 0; j < g.size(); ++j)
      if (j != i && sigma.contains(j) && !g.adjacent(i, j)) s += 1.0;
    out[i] = s + (sigma.contains(i) ? 0.0 : h);
  }
  return out;
}

double naive_pair_energy(const Graph& g, const Configuration& sigma,
                         const Configuration& tau, double h) {
  double e = 0.0;
  for (auto i : sigma)
    for (auto j : tau)
      if (i != j && !g.adjacent(i, j)) e += 1.0;
  int q = 0;
  for (auto i : sigma) q += tau.contains(i) ? 1 : 0;
  return e + h * (static_cast<double>(sigma.size()) - q);
}

double brute_log_z_sigma(const Graph& g, const Configuration& sigma, double beta, double h) {
  double acc = kNegInf;
  subsets(static_cast<int>(g.size()), static_cast<int>(sigma.size()),
          [&](const Configuration& tau) {
            const double e = naive_pair_energy(g, sigma, tau, h);
            acc = log_add(acc, e == 0.0 ? 0.0 : -beta * e);
          });
  return acc;
}

double pairwise_log_annealed(int n, int k, double p, double beta, double h) {
  double acc = kNegInf;
  subsets(n, k, [&](const Configuration& sigma) {
    subsets(n, k, [&](const Configuration& tau) {
      double lw = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          const int m = (sigma.contains(i) && tau.contains(j) ? 1 : 0) +
                        (sigma.contains(j) && tau.contains(i) ? 1 : 0);
          if (m) lw += std::log(p + (1.0 - p) * std::exp(-m * beta));
        }
      const auto q = static_cast<int>(sigma.overlap(tau));
      lw -= beta * h * (k - q);
      acc = log_add(acc, lw);
    });
  });
  return acc;
}

double graph_average_log_second_moment(int n, int k, double p, double beta, double h) {
  if (n > 6) throw std::invalid_argument("graph_average_log_second_moment: n <= 6");
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  std::vector<Configuration> configs;
  subsets(n, k, [&](const Configuration& c) { configs.push_back(c); });

  double acc = kNegInf;
  for (std::uint32_t mask = 0; mask < (1u << pairs.size()); ++mask) {
    Graph g = Graph::edgeless(static_cast<std::uint32_t>(n));
    double lp = 0.0;
    for (std::size_t e = 0; e < pairs.size(); ++e) {
      const bool present = mask >> e & 1u;
      g.set_edge(pairs[e].first, pairs[e].second, present);
      lp += std::log(present ? p : 1.0 - p);
    }
    double lz = kNegInf;
    for (const auto& s : configs)
      for (const auto& t : configs) {
        const double e = naive_pair_energy(g, s, t, h);
        lz = log_add(lz, e == 0.0 ? 0.0 : -beta * e);
      }
    acc = log_add(acc, lp + 2.0 * lz);
  }
  return acc;
}

double log_fermi_count(const std::vector<int>& g, int N, int E) {
  int emax = 0;
  for (std::size_t j = 0; j < g.size(); ++j) emax += g[j] * static_cast<int>(j);
  if (N < 0 || E < 0 || E > emax) return kNegInf;
  // ways[m][e]: subsets of single-particle states with m particles, energy e
  std::vector<std::vector<double>> ways(N + 1, std::vector<double>(emax + 1, 0.0));
  ways[0][0] = 1.0;
  for (std::size_t j = 0; j < g.size(); ++j)
    for (int copy = 0; copy < g[j]; ++copy)
      for (int m = N; m >= 1; --m)
        for (int e = emax; e >= static_cast<int>(j); --e)
          ways[m][e] += ways[m - 1][e - j];
  const double w = ways[N][E];
  return w > 0.0 ? std::log(w) : kNegInf;
}

double log_factorial_sum(int m) {
  double s = 0.0;
  for (int i = 2; i <= m; ++i) s += std::log(static_cast<double>(i));
  return s;
}

std::array<std::array<double, 3>, 3> fd_hessian(
    const std::function<double(double, double, double)>& fn, double x, double y, double z,
    double step) {
  std::array<double, 3> p{x, y, z};
  auto eval = [&](int a, int da, int b, int db) {
    auto v = p;
    v[a] += da * step;
    v[b] += db * step;
    return fn(v[0], v[1], v[2]);
  };
  std::array<std::array<double, 3>, 3> hess{};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      if (a == b) {
        auto v = p;
        const double c = fn(v[0], v[1], v[2]);
        v[a] += step;
        const double up = fn(v[0], v[1], v[2]);
        v[a] -= 2 * step;
        const double down = fn(v[0], v[1], v[2]);
        hess[a][a] = (up - 2 * c + down) / (step * step);
      } else {
        hess[a][b] = (eval(a, 1, b, 1) - eval(a, 1, b, -1) - eval(a, -1, b, 1) +
                      eval(a, -1, b, -1)) /
                     (4 * step * step);
      }
    }
  return hess;
}

int brute_clique_number(const Graph& g) {
  const int n = static_cast<int>(g.size());
  if (n > 22) throw std::invalid_argument("brute_clique_number: n <= 22");
  int best = 0;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    const int size = __builtin_popcount(mask);
    if (size <= best) continue;
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      if (mask >> i & 1u)
        for (int j = i + 1; j < n && ok; ++j)
          if ((mask >> j & 1u) && !g.adjacent(i, j)) ok = false;
    if (ok) best = size;
  }
  return best;
}

double total_variation(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("total_variation: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return 0.5 * s;
}

}  // namespace oracle
