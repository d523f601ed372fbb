#pragma once

// Mittag-Leffler and Kilbas-Saigo functions by direct series summation.
// These are validation oracles for desk-scale arguments, not production
// evaluators: there is no asymptotic expansion for large |z|.

#include <cmath>
#include <cstddef>

#include "qbessel/errors.hpp"
#include "qbessel/gamma.hpp"

namespace qbessel {

namespace detail {
inline constexpr long double series_tail_ratio = 1e-16L;
}

/// E_alpha(z) = sum_(n=0..N) z^n / Gamma(1 + alpha n).
inline double mittag_leffler(double alpha, double z, std::size_t n_terms) {
  if (!(alpha > 0.0)) throw precondition_error("mittag_leffler: alpha must be positive");
  long double sum = 1.0L;
  if (z == 0.0) return 1.0;
  const long double log_abs_z = std::log(std::fabs(static_cast<long double>(z)));
  for (std::size_t n = 1; n <= n_terms; ++n) {
    const detail::SignedLogGammaL g = detail::signed_lgamma(1.0L + static_cast<long double>(alpha) * n);
    long double term = std::exp(n * log_abs_z - g.log_abs);
    if (z < 0.0 && n % 2 == 1) term = -term;
    sum += term;
    if (std::fabs(term) < detail::series_tail_ratio * std::fabs(sum)) break;
  }
  return static_cast<double>(sum);
}

struct KilbasSaigoParams {
  double alpha = 1.0;
  double m = 1.0;
  double l = 0.0;
};

/// E_(alpha,m,l)(z) = sum_k c_k z^k with c_0 = 1 and
/// c_k = prod_(j<k) Gamma(alpha(jm+l)+1) / Gamma(alpha(jm+l+1)+1).
inline double kilbas_saigo(const KilbasSaigoParams& params, double z, std::size_t n_terms) {
  if (!(params.alpha > 0.0) || !(params.m > 0.0)) throw precondition_error("kilbas_saigo: alpha and m must be positive");
  const long double a = params.alpha;
  long double coefficient = 1.0L;
  long double power = 1.0L;
  long double sum = 1.0L;
  for (std::size_t k = 1; k <= n_terms; ++k) {
    const long double base = static_cast<long double>(k - 1) * params.m + params.l;
    if (detail::near_gamma_pole(a * base + 1.0L)) throw pole_error("kilbas_saigo: Gamma pole in a coefficient");
    coefficient *= detail::gamma_quotient(a * base + 1.0L, a * (base + 1.0L) + 1.0L);
    power *= z;
    const long double term = coefficient * power;
    sum += term;
    if (term == 0.0L || std::fabs(term) < detail::series_tail_ratio * std::fabs(sum)) break;
  }
  return static_cast<double>(sum);
}

}  // namespace qbessel
