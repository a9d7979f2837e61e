#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "cavity/params.hpp"
#include "cavity/rng.hpp"

/// Second moment of the pair partition function over the random graph.
///
/// Four configurations (sigma, tau, sigma', tau') split the vertex set into
/// cells; the cell of a vertex is (region w.r.t. sigma,tau) x (region w.r.t.
/// sigma',tau') with regions S = sigma only, I = both, T = tau only, C = none.
namespace cavity::second_moment {

enum class Region : std::uint8_t { S = 0, I = 1, T = 2, C = 3 };

struct Cell {
  Region first;
  Region second;
};

/// sigma_i tau_j + sigma_j tau_i for vertices in regions a and b.
int multiplicity(Region a, Region b);
/// Sum of both copies: sigma_i tau_j + sigma_j tau_i + sigma'_i tau'_j + sigma'_j tau'_i.
int multiplicity(Cell a, Cell b);

/// Label form: "S", "I", "T", "C" or two-letter cells "SS'", "IT'" (the
/// prime may be ', U+2032 or omitted). Both labels must have the same form.
/// Throws std::invalid_argument on a malformed label.
int multiplicity(std::string_view a, std::string_view b);

/// Intersection sizes g1..g9 of {S,I,T} x {S',I',T'} in row-major order.
struct OverlapCell {
  int k = 0;
  int q = 0;
  int qp = 0;
  std::array<int, 9> g{};

  int total() const;
  int g5() const { return g[4]; }
  /// |SC'|, |IC'|, |TC'|, |S'C|, |I'C|, |T'C|.
  std::array<int, 6> complements() const;
  bool feasible() const;
};

struct PsiPair {
  double psi;
  double psi_bar;
};

/// Psi from the per-cell coefficients and its bound Psi-bar.
/// Throws std::invalid_argument for an infeasible cell.
PsiPair psi_and_bound(const OverlapCell& cell, double beta, double p);

/// Psi-bar as a function of (g, g5) alone.
double psi_bar(int k, int g, int g5, double beta, double p);

/// Upper bound on the log multinomial sum for fixed (q, q', g):
/// (4k-q-q'-g) ln n - ln((q-g)!(q'-g)!) - 2 ln((k-q-g)!(k-q'-g)!) + 8,
/// with m! = 1 for every m <= 1 (negative arguments arise on the polyhedron).
/// Throws std::invalid_argument outside 0 <= q,q' <= k, 0 <= g <= (2k-q)^(2k-q').
double theta2_bar(int q, int qp, int g, double log_n, int k);

enum class Mode { Brute, Decomposition };

inline constexpr std::uint64_t kDefaultBruteCap = 1'000'000;        // quadruples
inline constexpr std::uint64_t kDefaultDecompositionCap = 50'000'000;  // (k+1)^11

/// ln E(Z^2). Brute enumerates every quadruple of configurations and
/// multiplies per-pair expectations; Decomposition sums the exact
/// multinomial over overlap cells. Needs an integer vertex count for Brute.
/// Throws BudgetExceeded past `cap`.
double log_second_moment(const ModelParams& params, Mode mode, std::uint64_t cap = 0);

/// ln of the multinomial count of quadruples realising the cell.
double log_cell_count(const OverlapCell& cell, double log_n,
                      const std::optional<std::int64_t>& n_exact);

struct LemmaPoint {
  int q = 0;
  int g = 0;
  int g5 = 0;
  double value = 0.0;
};

/// (Theta2-bar + Phi(q) + Phi(q') + Psi-bar) at q = q'.
double lemma_objective(const ModelParams& params, int q, int g, int g5);

/// Grid maximum of lemma_objective over 0 <= q <= k, g5 <= g <= 2k-q,
/// 0 <= g5 <= q, g >= g_min. Ties go to the lexicographically first point.
LemmaPoint lemma_max(const ModelParams& params, int g_min = 0);

/// The leading-order value claimed for the constrained (g >= 2) maximum:
/// identical-pair phase -f(2b)k(k-1) + (2k-2) ln n - 2 ln (k-2)!, otherwise
/// -2bhk - 2f(b)k^2 + (4k-2) ln n - 4 ln (k-2)!.
double constrained_max_leading(const ModelParams& params);

/// The quadratic part a(q, g, g5) of the objective (real arguments), whose
/// Hessian carries the convexity argument behind the vertex maximum.
double quadratic_part(const ModelParams& params, double q, double g, double g5);

/// Draws q, q' uniformly, then g1..g9 in order, each uniform within the
/// remaining row and column slack, so every draw is feasible.
OverlapCell random_feasible_cell(int k, CounterRng& rng);

struct SelfAveragingRow {
  int k = 0;
  std::uint32_t n = 0;
  int replicas = 0;
  double log_mean_z = 0.0;
  double log_var_z = 0.0;  ///< -inf when every replica has the same Z
  double ratio = 0.0;      ///< var Z / (mean Z)^2, unbiased sample variance
  double reference = 0.0;  ///< n^-2
  double log_annealed = 0.0;
};

struct SelfAveragingSetup {
  double p = 0.2;
  double c_bar = 1.9;
  std::vector<int> k_list{2, 3, 4};
  int replicas = 200;
  double beta = 1.0;
  double htilde = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t enumeration_cap = 2'000'000;  ///< configurations per graph
};

/// n = round(exp(k ln(1/p) / c_bar)) for each k; exact Z per sampled graph.
std::vector<SelfAveragingRow> self_averaging_experiment(const SelfAveragingSetup& setup);

}  // namespace cavity::second_moment
