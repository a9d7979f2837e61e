#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace cavity {

/// Parameters of the cavity dynamics on G(n, p) with k-subsets.
///
/// The graph size is carried as ln n so that the asymptotic regime
/// ln n = k ln(1/p) / c can be evaluated for k in the hundreds, where n
/// itself is far beyond any integer type. `n_exact` is set when the
/// parameters refer to an actual finite graph.
struct ModelParams {
  double log_n = 0.0;
  std::optional<std::int64_t> n_exact;
  int k = 1;
  double p = 0.5;
  double beta = 1.0;   ///< inverse temperature, may be +inf
  double htilde = 0.0; ///< h / k

  /// From an actual vertex count; c is derived.
  static ModelParams for_graph(std::int64_t n, int k, double p, double beta,
                               double htilde);
  /// From the ratio c = k ln(1/p) / ln n; n = exp(k ln(1/p) / c).
  static ModelParams for_ratio(double c, int k, double p, double beta,
                               double htilde);

  double n() const;
  /// Integer vertex count; throws std::logic_error if not set.
  std::int64_t n_int() const;
  double h() const { return htilde * k; }
  double c() const;
  double log_inv_p() const;
  /// ln(1/p) / c = ln n / k, the per-k entropy rate that appears everywhere.
  double entropy_rate() const;

  /// Throws std::invalid_argument on out-of-range fields.
  void validate() const;

  std::string describe() const;
};

}  // namespace cavity
