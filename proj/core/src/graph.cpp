#include "cavity/graph.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "cavity/csv.hpp"
#include "cavity/errors.hpp"
#include "cavity/numeric.hpp"
#include "cavity/rng.hpp"

namespace cavity {

Graph::Graph(std::uint32_t n, double p, std::uint64_t seed)
    : n_(n), p_(p), seed_(seed), words_((n + 63) / 64), rows_(n * words_, 0) {}

Graph Graph::complete(std::uint32_t n) {
  Graph g(n, 1.0, 0);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j) g.set_edge(i, j, true);
  return g;
}

Graph Graph::edgeless(std::uint32_t n) { return Graph(n, 0.0, 0); }

void Graph::set_edge(std::uint32_t i, std::uint32_t j, bool present) {
  if (i == j) return;
  const Word bi = Word{1} << (i & 63);
  const Word bj = Word{1} << (j & 63);
  if (present) {
    rows_[i * words_ + (j >> 6)] |= bj;
    rows_[j * words_ + (i >> 6)] |= bi;
  } else {
    rows_[i * words_ + (j >> 6)] &= ~bj;
    rows_[j * words_ + (i >> 6)] &= ~bi;
  }
}

std::uint32_t Graph::degree(std::uint32_t i) const {
  std::uint32_t d = 0;
  for (Word w : row(i)) d += static_cast<std::uint32_t>(std::popcount(w));
  return d;
}

std::uint64_t Graph::edge_count() const {
  std::uint64_t s = 0;
  for (std::uint32_t i = 0; i < n_; ++i) s += degree(i);
  return s / 2;
}

std::uint64_t Graph::missing_count() const {
  const std::uint64_t pairs = std::uint64_t{n_} * (n_ - (n_ ? 1 : 0)) / 2;
  return pairs - edge_count();
}

std::uint32_t Graph::adjacent_within(std::uint32_t i,
                                     std::span<const Word> members) const {
  const auto r = row(i);
  std::uint32_t c = 0;
  for (std::size_t w = 0; w < words_; ++w)
    c += static_cast<std::uint32_t>(std::popcount(r[w] & members[w]));
  return c;
}

std::vector<Graph::Word> Graph::mask(std::span<const std::uint32_t> vertices) const {
  std::vector<Word> m(words_, 0);
  for (std::uint32_t v : vertices) m[v >> 6] |= Word{1} << (v & 63);
  return m;
}

Graph generate_graph(std::uint32_t n, double p, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("generate_graph: need n >= 2");
  if (!(p > 0.0 && p <= 1.0)) {
    throw std::invalid_argument("generate_graph: edge density must lie in (0, 1]");
  }
  Graph g(n, p, seed);
  CounterRng rng(seed);
  for (std::uint32_t j = 1; j < n; ++j) {
    for (std::uint32_t i = 0; i < j; ++i) {
      if (rng.uniform() < p) g.set_edge(i, j, true);
    }
  }
  return g;
}

void write_graph(std::ostream& out, const Graph& g) {
  const std::uint32_t n = g.size();
  out << n << ' ' << format_double(g.density()) << ' ' << g.seed() << '\n';
  std::string line;
  for (std::uint32_t i = 0; i + 1 < n; ++i) {
    line.assign(n - i - 1, '0');
    for (std::uint32_t j = i + 1; j < n; ++j) {
      if (g.missing(i, j)) line[j - i - 1] = '1';
    }
    out << line << '\n';
  }
}

Graph read_graph(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw ConfigError("graph file: missing header");
  std::istringstream hs(header);
  std::int64_t n = 0;
  std::string p_text;
  std::uint64_t seed = 0;
  if (!(hs >> n >> p_text >> seed) || n < 1) {
    throw ConfigError("graph file: header must be `n p seed`");
  }
  Graph g(static_cast<std::uint32_t>(n), parse_double(p_text), seed);
  std::string line;
  for (std::uint32_t i = 0; i + 1 < static_cast<std::uint32_t>(n); ++i) {
    if (!std::getline(in, line)) throw ConfigError("graph file: truncated");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.size() != static_cast<std::size_t>(n) - i - 1) {
      throw ConfigError("graph file: row " + std::to_string(i + 1) +
                        " has wrong length");
    }
    for (std::uint32_t j = i + 1; j < static_cast<std::uint32_t>(n); ++j) {
      const char c = line[j - i - 1];
      if (c != '0' && c != '1') throw ConfigError("graph file: expected 0/1");
      g.set_edge(i, j, c == '0');
    }
  }
  return g;
}

void save_graph(const std::string& path, const Graph& g) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  write_graph(out, g);
}

Graph load_graph(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path);
  return read_graph(in);
}

bool is_clique(const Graph& g, std::span<const std::uint32_t> vertices) {
  for (std::size_t a = 0; a < vertices.size(); ++a)
    for (std::size_t b = a + 1; b < vertices.size(); ++b)
      if (!g.adjacent(vertices[a], vertices[b])) return false;
  return true;
}

CliqueWindow clique_window(double n, double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("clique_window: p must lie in (0, 1)");
  }
  const double lnb = std::log(1.0 / p);
  const double logb_n = std::log(n) / lnb;
  CliqueWindow w;
  w.base = 1.0 / p;
  w.center = 2.0 * logb_n - 2.0 * std::log(logb_n) / lnb +
             2.0 * std::log(std::exp(1.0) / 2.0) / lnb + 1.0;
  w.lower = w.center - 1.5;
  w.upper = w.center + 1.5;
  return w;
}

CliqueStatistics clique_statistics(std::int64_t n, double p, std::int64_t r) {
  if (r < 1 || r > n) throw std::invalid_argument("clique_statistics: need 1 <= r <= n");
  CliqueStatistics s;
  s.log_expected_count = log_binomial(n, r) +
                         static_cast<double>(r) * static_cast<double>(r - 1) / 2.0 *
                             std::log(p);
  s.window = clique_window(static_cast<double>(n), p);
  return s;
}

double grand_hamiltonian(const Graph& g, std::span<const std::uint32_t> subset,
                         double h) {
  std::uint64_t missing_pairs = 0;
  for (std::size_t a = 0; a < subset.size(); ++a)
    for (std::size_t b = a + 1; b < subset.size(); ++b)
      if (g.missing(subset[a], subset[b])) ++missing_pairs;
  return 2.0 * static_cast<double>(missing_pairs) -
         h * static_cast<double>(subset.size());
}

}  // namespace cavity
