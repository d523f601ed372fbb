#pragma once

// Signed log-Gamma and Gamma-function ratios.
//
// Every ratio Q(r, p) = Gamma(1+gamma+r) / Gamma(1+gamma+r-p) in the solver
// goes through gamma_ratio(). The kernel works in log space in extended
// precision and only rounds to double on return.

#include <cmath>
#include <numbers>

#include "qbessel/errors.hpp"

namespace qbessel {

/// Absolute distance to a nonpositive integer below which Gamma is treated as a pole.
inline constexpr double pole_tolerance = 1e-9;

enum class GammaSign { negative = -1, pole = 0, positive = 1 };

struct SignedLogGamma {
  double log_abs = 0.0;  // +inf at a pole
  GammaSign sign = GammaSign::positive;

  bool is_pole() const noexcept { return sign == GammaSign::pole; }
};

namespace detail {

struct SignedLogGammaL {
  long double log_abs;
  int sign;  // 0 at a pole
};

inline bool near_gamma_pole(long double x) {
  long double nearest = std::nearbyint(x);
  if (nearest > 0.0L) nearest = 0.0L;
  return std::fabs(x - nearest) < pole_tolerance;
}

inline SignedLogGammaL signed_lgamma(long double x) {
  if (!std::isfinite(x)) throw precondition_error("signed_log_gamma: argument is not finite");
  if (near_gamma_pole(x)) return {HUGE_VALL, 0};
  if (x > 0.0L) {
    int sign = 1;
    return {::lgammal_r(x, &sign), 1};
  }
  // Gamma(x) Gamma(1-x) = pi / sin(pi x), argument of sin reduced mod 2.
  constexpr long double pi = std::numbers::pi_v<long double>;
  const long double reduced = x - 2.0L * std::nearbyint(x / 2.0L);
  const long double sine = std::sin(pi * reduced);
  int unused = 1;
  const long double log_abs = std::log(pi) - std::log(std::fabs(sine)) - ::lgammal_r(1.0L - x, &unused);
  return {log_abs, sine > 0.0L ? 1 : -1};
}

/// Gamma(a) / Gamma(b); zero when b is exactly a pole, throws when a is.
/// Near (not on) a pole of b the reciprocal comes from reflection.
inline long double gamma_quotient(long double a, long double b) {
  const SignedLogGammaL top = signed_lgamma(a);
  if (top.sign == 0) throw pole_error("gamma ratio: numerator argument is a pole of Gamma");
  if (b <= 0.0L && b == std::nearbyint(b)) return 0.0L;
  if (near_gamma_pole(b)) {
    // 1/Gamma(b) = sin(pi b) Gamma(1-b) / pi
    constexpr long double pi = std::numbers::pi_v<long double>;
    const long double sine = std::sin(pi * (b - 2.0L * std::nearbyint(b / 2.0L)));
    int unused = 1;
    const long double log_abs = top.log_abs + ::lgammal_r(1.0L - b, &unused) + std::log(std::fabs(sine)) - std::log(pi);
    return static_cast<long double>(top.sign) * (sine > 0.0L ? 1.0L : -1.0L) * std::exp(log_abs);
  }
  const SignedLogGammaL bottom = signed_lgamma(b);
  if (a == b) return 1.0L;
  return static_cast<long double>(top.sign * bottom.sign) * std::exp(top.log_abs - bottom.log_abs);
}

}  // namespace detail

/// log|Gamma(x)| and the sign of Gamma(x); negative arguments via reflection.
inline SignedLogGamma signed_log_gamma(double x) {
  const detail::SignedLogGammaL v = detail::signed_lgamma(x);
  if (v.sign == 0) return {HUGE_VAL, GammaSign::pole};
  return {static_cast<double>(v.log_abs), v.sign > 0 ? GammaSign::positive : GammaSign::negative};
}

/// Q(r, p) = Gamma(1+gamma+r) / Gamma(1+gamma+r-p).
///
/// Exactly 0 when the denominator argument is a pole (1/Gamma is entire).
/// Throws pole_error when the numerator argument is a pole.
inline double gamma_ratio(double gamma, double r, double p) {
  const long double a = 1.0L + static_cast<long double>(gamma) + static_cast<long double>(r);
  return static_cast<double>(detail::gamma_quotient(a, a - static_cast<long double>(p)));
}

}  // namespace qbessel
