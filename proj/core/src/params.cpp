#include "cavity/params.hpp"

#include <cmath>
#include <stdexcept>

#include "cavity/csv.hpp"

namespace cavity {

ModelParams ModelParams::for_graph(std::int64_t n, int k, double p, double beta,
                                   double htilde) {
  ModelParams m;
  m.log_n = std::log(static_cast<double>(n));
  m.n_exact = n;
  m.k = k;
  m.p = p;
  m.beta = beta;
  m.htilde = htilde;
  m.validate();
  return m;
}

ModelParams ModelParams::for_ratio(double c, int k, double p, double beta,
                                   double htilde) {
  if (!(c > 0.0)) throw std::invalid_argument("ModelParams: c must be positive");
  ModelParams m;
  m.k = k;
  m.p = p;
  m.beta = beta;
  m.htilde = htilde;
  m.log_n = static_cast<double>(k) * std::log(1.0 / p) / c;
  m.validate();
  return m;
}

double ModelParams::n() const {
  return n_exact ? static_cast<double>(*n_exact) : std::exp(log_n);
}

std::int64_t ModelParams::n_int() const {
  if (!n_exact) throw std::logic_error("ModelParams: no finite vertex count");
  return *n_exact;
}

double ModelParams::c() const { return k * log_inv_p() / log_n; }

double ModelParams::log_inv_p() const { return -std::log(p); }

double ModelParams::entropy_rate() const { return log_n / k; }

void ModelParams::validate() const {
  if (k < 1) throw std::invalid_argument("ModelParams: k must be >= 1");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("ModelParams: p must lie in (0,1)");
  if (!(beta >= 0.0)) throw std::invalid_argument("ModelParams: beta must be >= 0");
  if (!(htilde >= 0.0) || std::isinf(htilde))
    throw std::invalid_argument("ModelParams: htilde must be finite and >= 0");
  if (n_exact && (*n_exact < k)) throw std::invalid_argument("ModelParams: need k <= n");
  if (!(log_n > 0.0)) throw std::invalid_argument("ModelParams: need n > 1");
}

std::string ModelParams::describe() const {
  std::string s = "n=" + (n_exact ? std::to_string(*n_exact) : "exp(" + format_double(log_n) + ")");
  s += " k=" + std::to_string(k) + " p=" + format_double(p) +
       " beta=" + format_double(beta) + " htilde=" + format_double(htilde) +
       " c=" + format_double(c());
  return s;
}

}  // namespace cavity
