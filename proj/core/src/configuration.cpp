#include "cavity/configuration.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>
#include <stdexcept>

#include "cavity/rng.hpp"

namespace cavity {

Configuration::Configuration(std::vector<std::uint32_t> vertices)
    : vertices_(std::move(vertices)) {
  std::sort(vertices_.begin(), vertices_.end());
  if (std::adjacent_find(vertices_.begin(), vertices_.end()) != vertices_.end()) {
    throw std::invalid_argument("Configuration: duplicate vertex");
  }
}

bool Configuration::contains(std::uint32_t v) const {
  return std::binary_search(vertices_.begin(), vertices_.end(), v);
}

void Configuration::validate(std::uint32_t n) const {
  if (!vertices_.empty() && vertices_.back() >= n) {
    throw std::invalid_argument("Configuration: vertex " +
                                std::to_string(vertices_.back() + 1) +
                                " out of range for n = " + std::to_string(n));
  }
}

std::size_t Configuration::overlap(const Configuration& other) const {
  std::size_t q = 0;
  auto a = vertices_.begin();
  auto b = other.vertices_.begin();
  while (a != vertices_.end() && b != other.vertices_.end()) {
    if (*a < *b) {
      ++a;
    } else if (*b < *a) {
      ++b;
    } else {
      ++q;
      ++a;
      ++b;
    }
  }
  return q;
}

std::uint64_t Configuration::hash() const {
  std::uint64_t h = splitmix64(vertices_.size());
  for (std::uint32_t v : vertices_) h = splitmix64(h ^ v);
  return h;
}

std::string Configuration::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (i) out.push_back(' ');
    out += std::to_string(vertices_[i] + 1);
  }
  return out;
}

Configuration Configuration::parse(std::string_view text) {
  std::vector<std::uint32_t> v;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    if (pos >= text.size() || text[pos] == '\n' || text[pos] == '\r') break;
    std::uint32_t x = 0;
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), x);
    if (ec != std::errc{} || x == 0) {
      throw std::invalid_argument("Configuration::parse: bad vertex in '" +
                                  std::string(text) + "'");
    }
    v.push_back(x - 1);
    pos = static_cast<std::size_t>(ptr - text.data());
  }
  return Configuration(std::move(v));
}

std::ostream& operator<<(std::ostream& os, const Configuration& c) {
  return os << c.to_string();
}

std::vector<Configuration> all_configurations(std::uint32_t n, std::uint32_t k) {
  std::vector<Configuration> out;
  for_each_subset(n, k, [&](std::span<const std::uint32_t> s) {
    out.emplace_back(std::vector<std::uint32_t>(s.begin(), s.end()));
  });
  return out;
}

}  // namespace cavity
