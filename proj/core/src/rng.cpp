#include "cavity/rng.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace cavity {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
  const std::uint64_t prod = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(prod >> 32);
  lo = static_cast<std::uint32_t>(prod);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
    mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kPhiloxW0;
    key[1] += kPhiloxW1;
  }
  return ctr;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(master ^ splitmix64(stream + 0x632BE59BD9B4E019ull));
}

CounterRng::result_type CounterRng::operator()() {
  if (cached_ == 0) {
    const std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(counter_),
        static_cast<std::uint32_t>(counter_ >> 32), 0u, 0u};
    const std::array<std::uint32_t, 2> key = {
        static_cast<std::uint32_t>(key_), static_cast<std::uint32_t>(key_ >> 32)};
    block_ = philox4x32_10(ctr, key);
    ++counter_;
    cached_ = 2;
  }
  const int w = 2 - cached_;
  --cached_;
  return (static_cast<std::uint64_t>(block_[2 * w + 1]) << 32) | block_[2 * w];
}

double CounterRng::uniform() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

__extension__ using u128 = unsigned __int128;

std::uint64_t CounterRng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("CounterRng::below: zero bound");
  u128 m = static_cast<u128>((*this)()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<u128>((*this)()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

std::vector<std::uint32_t> random_subset(CounterRng& rng, std::uint32_t n,
                                         std::uint32_t m) {
  if (m > n) throw std::invalid_argument("random_subset: m > n");
  std::vector<std::uint32_t> out;
  out.reserve(m);
  std::vector<char> taken(n, 0);
  for (std::uint32_t j = n - m; j < n; ++j) {
    const auto t = static_cast<std::uint32_t>(rng.below(std::uint64_t{j} + 1));
    const std::uint32_t pick = taken[t] ? j : t;
    taken[pick] = 1;
    out.push_back(pick);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace cavity
