#include "cavity/numeric.hpp"

#include <algorithm>
#include <string>

#include "cavity/errors.hpp"

namespace cavity {

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

double log_sum_exp(std::span<const double> xs) {
  double m = kNegInf;
  for (double x : xs) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  if (m == kInf) return kInf;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

void LogAccumulator::add(double x) {
  if (x == kNegInf) return;
  if (x <= max_) {
    sum_ += std::exp(x - max_);
  } else {
    sum_ = sum_ * std::exp(max_ - x) + 1.0;
    max_ = x;
  }
}

double LogAccumulator::value() const {
  if (sum_ == 0.0) return kNegInf;
  return max_ + std::log(sum_);
}

double log_factorial(std::int64_t m) {
  if (m < 0) throw std::invalid_argument("log_factorial: negative argument");
  if (m < 2) return 0.0;
  return std::lgamma(static_cast<double>(m) + 1.0);
}

double log_binomial(std::int64_t n, std::int64_t m) {
  if (m < 0 || n < 0 || m > n) return kNegInf;
  m = std::min(m, n - m);
  if (m == 0) return 0.0;
  if (m <= 64) {
    // product form avoids the lgamma cancellation for large n
    double s = 0.0;
    for (std::int64_t i = 0; i < m; ++i) {
      s += std::log(static_cast<double>(n - i)) -
           std::log(static_cast<double>(i + 1));
    }
    return s;
  }
  return std::lgamma(static_cast<double>(n) + 1.0) -
         std::lgamma(static_cast<double>(m) + 1.0) -
         std::lgamma(static_cast<double>(n - m) + 1.0);
}

double log_falling_factorial_real(double log_n, std::int64_t m) {
  if (m < 0) throw std::invalid_argument("falling factorial: negative length");
  const double n = std::exp(log_n);
  if (static_cast<double>(m) > n + 1e-9) return kNegInf;
  double s = 0.0;
  for (std::int64_t i = 0; i < m; ++i) {
    const double frac = static_cast<double>(i) / n;
    if (frac >= 1.0) return kNegInf;
    s += log_n + std::log1p(-frac);
  }
  return s;
}

double log_binomial_real(double log_n, std::int64_t m) {
  if (m < 0) return kNegInf;
  const double ff = log_falling_factorial_real(log_n, m);
  if (ff == kNegInf) return kNegInf;
  return ff - log_factorial(m);
}

RootResult bisect(const std::function<double(double)>& f, double lo, double hi,
                  double abs_tol, int max_iter) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return {lo, 0.0, 0};
  if (fhi == 0.0) return {hi, 0.0, 0};
  if ((flo > 0) == (fhi > 0)) {
    throw NumericalFailure("bisect: bracket [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "] has no sign change");
  }
  for (int it = 1; it <= max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) return {mid, f(mid), it};
    const double fm = f(mid);
    if (fm == 0.0) return {mid, 0.0, it};
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    if (hi - lo <= abs_tol) {
      const double root = 0.5 * (lo + hi);
      return {root, f(root), it};
    }
  }
  throw NumericalFailure("bisect: no convergence after " +
                         std::to_string(max_iter) + " iterations");
}

double binary_entropy_neg(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return x * std::log(x) + (1.0 - x) * std::log1p(-x);
}

}  // namespace cavity
