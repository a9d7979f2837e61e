#include <bit>
#include <string>
#include <vector>

#include "cavity/errors.hpp"
#include "cavity/graph.hpp"

namespace cavity {

namespace {

using Word = Graph::Word;

bool any(const std::vector<Word>& s) {
  for (Word w : s)
    if (w) return true;
  return false;
}

// Bit-parallel branch and bound: candidates are coloured greedily into
// independent sets; the colour of a candidate bounds the clique size
// reachable through it.
class CliqueSearch {
 public:
  CliqueSearch(const Graph& g, std::uint64_t budget) : g_(g), budget_(budget) {}

  CliqueResult run() {
    std::vector<Word> all(g_.words_per_row(), 0);
    for (std::uint32_t v = 0; v < g_.size(); ++v) all[v >> 6] |= Word{1} << (v & 63);
    expand(std::move(all));
    CliqueResult r;
    r.size = static_cast<std::uint32_t>(best_.size());
    r.witness = Configuration(best_);
    r.nodes = nodes_;
    return r;
  }

 private:
  void expand(std::vector<Word> cand) {
    if (++nodes_ > budget_) {
      throw BudgetExceeded("max_clique: node budget of " + std::to_string(budget_) +
                           " exceeded");
    }
    const std::size_t words = cand.size();
    std::vector<std::uint32_t> order;
    std::vector<std::uint32_t> colour;
    std::vector<Word> uncoloured = cand;
    std::vector<Word> klass(words);
    std::uint32_t c = 0;
    while (any(uncoloured)) {
      ++c;
      klass = uncoloured;
      for (std::size_t w = 0; w < words; ++w) {
        while (klass[w]) {
          const auto v = static_cast<std::uint32_t>(w * 64 + std::countr_zero(klass[w]));
          const Word bit = Word{1} << (v & 63);
          klass[w] &= ~bit;
          uncoloured[w] &= ~bit;
          const auto row = g_.row(v);
          for (std::size_t x = w; x < words; ++x) klass[x] &= ~row[x];
          order.push_back(v);
          colour.push_back(c);
        }
      }
    }
    for (std::size_t idx = order.size(); idx-- > 0;) {
      if (current_.size() + colour[idx] <= best_.size()) return;
      const std::uint32_t v = order[idx];
      current_.push_back(v);
      const auto row = g_.row(v);
      std::vector<Word> next(words);
      for (std::size_t w = 0; w < words; ++w) next[w] = cand[w] & row[w];
      if (any(next)) {
        expand(std::move(next));
      } else if (current_.size() > best_.size()) {
        best_ = current_;
      }
      current_.pop_back();
      cand[v >> 6] &= ~(Word{1} << (v & 63));
    }
  }

  const Graph& g_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::vector<std::uint32_t> current_;
  std::vector<std::uint32_t> best_;
};

}  // namespace

CliqueResult max_clique(const Graph& g, std::uint64_t node_budget) {
  if (g.size() == 0) return {};
  return CliqueSearch(g, node_budget).run();
}

}  // namespace cavity
