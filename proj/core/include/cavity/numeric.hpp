#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>

namespace cavity {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// ln(e^a + e^b) without overflow; either argument may be -inf.
double log_add(double a, double b);

/// Stable ln sum_i e^{x_i}; summation order is the span order.
double log_sum_exp(std::span<const double> xs);

/// Streaming log-sum-exp with a running maximum shift.
class LogAccumulator {
 public:
  void add(double x);
  double value() const;
  bool empty() const { return max_ == kNegInf && sum_ == 0.0; }

 private:
  double max_ = kNegInf;
  double sum_ = 0.0;
};

/// ln m!  (m >= 0).
double log_factorial(std::int64_t m);

/// ln C(n, m); -inf outside 0 <= m <= n.
double log_binomial(std::int64_t n, std::int64_t m);

/// ln C(n, m) for a real-valued population n = e^{log_n}. Exact product
/// form for small m, so that graphs with astronomically many vertices
/// (n ~ 1e40) keep full relative precision.
double log_binomial_real(double log_n, std::int64_t m);

/// ln (n! / (n-m)!) for n = e^{log_n}.
double log_falling_factorial_real(double log_n, std::int64_t m);

struct RootResult {
  double root;
  double residual;
  int iterations;
};

/// Bisection on a bracket [lo, hi] with f(lo), f(hi) of opposite sign.
/// Stops when hi - lo <= abs_tol. Throws NumericalFailure when the bracket
/// is invalid or max_iter is exhausted.
RootResult bisect(const std::function<double(double)>& f, double lo, double hi,
                  double abs_tol = 1e-13, int max_iter = 200);

/// x ln x + (1-x) ln(1-x) with the 0 ln 0 = 0 limits.
double binary_entropy_neg(double x);

}  // namespace cavity
