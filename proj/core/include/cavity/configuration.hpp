#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cavity {

/// A k-subset of the vertex set in canonical (sorted, duplicate free) form.
class Configuration {
 public:
  Configuration() = default;
  /// Sorts and validates; throws std::invalid_argument on duplicates.
  explicit Configuration(std::vector<std::uint32_t> vertices);

  std::span<const std::uint32_t> vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  bool empty() const { return vertices_.empty(); }
  std::uint32_t operator[](std::size_t i) const { return vertices_[i]; }
  auto begin() const { return vertices_.begin(); }
  auto end() const { return vertices_.end(); }

  bool contains(std::uint32_t v) const;

  /// Throws std::invalid_argument unless every vertex is < n.
  void validate(std::uint32_t n) const;

  /// |this ∩ other| by merge of the sorted lists.
  std::size_t overlap(const Configuration& other) const;

  std::uint64_t hash() const;

  /// Space separated, 1-based.
  std::string to_string() const;
  static Configuration parse(std::string_view text);

  bool operator==(const Configuration&) const = default;
  auto operator<=>(const Configuration&) const = default;

 private:
  std::vector<std::uint32_t> vertices_;
};

std::ostream& operator<<(std::ostream& os, const Configuration& c);

/// Visits every k-subset of {0..n-1} in lexicographic order.
template <typename Fn>
void for_each_subset(std::uint32_t n, std::uint32_t k, Fn&& fn) {
  std::vector<std::uint32_t> idx(k);
  for (std::uint32_t i = 0; i < k; ++i) idx[i] = i;
  if (k > n) return;
  while (true) {
    fn(std::span<const std::uint32_t>(idx));
    if (k == 0) return;
    std::int64_t i = static_cast<std::int64_t>(k) - 1;
    while (i >= 0 && idx[i] == n - k + static_cast<std::uint32_t>(i)) --i;
    if (i < 0) return;
    ++idx[i];
    for (std::uint32_t j = static_cast<std::uint32_t>(i) + 1; j < k; ++j)
      idx[j] = idx[j - 1] + 1;
  }
}

/// All k-subsets of {0..n-1} as configurations, lexicographic order.
std::vector<Configuration> all_configurations(std::uint32_t n, std::uint32_t k);

}  // namespace cavity
