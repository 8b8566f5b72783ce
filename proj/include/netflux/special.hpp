#pragma once

#include <cmath>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

namespace netflux {

inline double poisson_pmf(std::size_t k, double lambda) {
  if (lambda <= 0.0)
    return k == 0 ? 1.0 : 0.0;
  const double kd = static_cast<double>(k);
  return std::exp(kd * std::log(lambda) - lambda - std::lgamma(kd + 1.0));
}

// gamma(a, x) / Gamma(a). For integer a this is P(X >= a), X ~ Poisson(x).
// Shape 0 is defined as 1, the limit that makes P(X >= 0) = 1.
inline double regularized_lower_gamma(double a, double x) {
  if (a <= 0.0)
    return 1.0;
  if (x <= 0.0)
    return 0.0;
  return boost::math::gamma_p(a, x);
}

// P(X > k) for X ~ Poisson(lambda).
inline double poisson_upper_tail(std::size_t k, double lambda) {
  return regularized_lower_gamma(static_cast<double>(k + 1), lambda);
}

// Smallest K with P(X > K) < tail.
inline std::size_t poisson_cutoff(double lambda, double tail = 1e-12) {
  std::size_t k = static_cast<std::size_t>(std::floor(lambda));
  while (poisson_upper_tail(k, lambda) >= tail)
    ++k;
  return k;
}

inline std::vector<double> binomial_pmf(std::size_t n, double p) {
  std::vector<double> pmf(n + 1, 0.0);
  if (p <= 0.0) {
    pmf[0] = 1.0;
    return pmf;
  }
  if (p >= 1.0) {
    pmf[n] = 1.0;
    return pmf;
  }
  const double lp = std::log(p), lq = std::log1p(-p);
  const double lgn = std::lgamma(static_cast<double>(n) + 1.0);
  for (std::size_t j = 0; j <= n; ++j) {
    const double jd = static_cast<double>(j);
    pmf[j] = std::exp(lgn - std::lgamma(jd + 1.0) - std::lgamma(static_cast<double>(n - j) + 1.0) +
                      jd * lp + static_cast<double>(n - j) * lq);
  }
  return pmf;
}

}  // namespace netflux
