#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cavity/configuration.hpp"

namespace cavity {

/// Undirected simple graph on vertices 0..n-1, stored as packed adjacency
/// bit rows. The missing-link indicator J_ij of the cavity model is the
/// complement of adjacency off the diagonal.
class Graph {
 public:
  using Word = std::uint64_t;

  Graph() = default;
  /// Edgeless graph on n vertices (every J_ij = 1).
  Graph(std::uint32_t n, double p, std::uint64_t seed);

  static Graph complete(std::uint32_t n);
  static Graph edgeless(std::uint32_t n);

  std::uint32_t size() const { return n_; }
  double density() const { return p_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t words_per_row() const { return words_; }

  bool adjacent(std::uint32_t i, std::uint32_t j) const {
    return (rows_[i * words_ + (j >> 6)] >> (j & 63)) & 1u;
  }
  /// J_ij; false on the diagonal.
  bool missing(std::uint32_t i, std::uint32_t j) const {
    return i != j && !adjacent(i, j);
  }

  void set_edge(std::uint32_t i, std::uint32_t j, bool present);

  std::span<const Word> row(std::uint32_t i) const {
    return {rows_.data() + i * words_, words_};
  }

  std::uint32_t degree(std::uint32_t i) const;
  std::uint64_t edge_count() const;
  std::uint64_t missing_count() const;

  /// Number of vertices of `members` (a packed membership mask of the same
  /// width as a row) adjacent to i.
  std::uint32_t adjacent_within(std::uint32_t i, std::span<const Word> members) const;

  /// Packed membership mask of a vertex set.
  std::vector<Word> mask(std::span<const std::uint32_t> vertices) const;

  bool operator==(const Graph& other) const = default;

 private:
  std::uint32_t n_ = 0;
  double p_ = 0.0;
  std::uint64_t seed_ = 0;
  std::size_t words_ = 0;
  std::vector<Word> rows_;
};

/// G(n, p): every unordered pair is an edge independently with probability p.
/// Pairs are drawn in the order (1,2),(1,3),(2,3),(1,4),... so that G_n is the
/// restriction of G_{n+1} for the same seed.
Graph generate_graph(std::uint32_t n, double p, std::uint64_t seed);

/// Text format: `n p seed`, then n-1 lines; line i (1-based) holds J_{i,j}
/// for j = i+1..n as a 0/1 string.
void write_graph(std::ostream& out, const Graph& g);
Graph read_graph(std::istream& in);
void save_graph(const std::string& path, const Graph& g);
Graph load_graph(const std::string& path);

struct CliqueResult {
  std::uint32_t size = 0;
  Configuration witness;
  std::uint64_t nodes = 0;
};

inline constexpr std::uint64_t kDefaultCliqueNodeBudget = 500'000'000;

/// Exact maximum clique by branch and bound with a greedy colouring bound.
/// Throws BudgetExceeded when more than node_budget search nodes are needed.
CliqueResult max_clique(const Graph& g,
                        std::uint64_t node_budget = kDefaultCliqueNodeBudget);

bool is_clique(const Graph& g, std::span<const std::uint32_t> vertices);

/// Predicted window for the clique number of G(n, p): center
/// 2 log_b n - 2 log_b log_b n + 2 log_b(e/2) + 1 with b = 1/p, +-3/2.
struct CliqueWindow {
  double center = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double base = 0.0;
};

struct CliqueStatistics {
  double log_expected_count = 0.0;  ///< ln E Y_r = ln C(n,r) + C(r,2) ln p
  CliqueWindow window;
};

CliqueWindow clique_window(double n, double p);
CliqueStatistics clique_statistics(std::int64_t n, double p, std::int64_t r);

/// Lattice-gas energy sum_{i != j} J_ij s_i s_j - h |subset| with the ordered
/// double sum (each unordered missing pair inside the subset counts twice).
double grand_hamiltonian(const Graph& g, std::span<const std::uint32_t> subset,
                         double h);

}  // namespace cavity
