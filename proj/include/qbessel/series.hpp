#pragma once

// Fractional power series u(x) = sum_n c_n x^(gamma + s n).
//
// The coefficients follow from balancing like powers of x after substituting
// the series into the equation:
//
//   D_n c_n + c_(n - n_beta) + sum_(shifted i) d_i P_i(n - n_pi) c_(n - n_pi) = 0,
//   D_n = sum_(pure-Bessel j) d_j P_j(n) - nu^2,
//
// where P_i(k) is the power-rule coefficient of D^(alpha_i) x^(gamma + s k)
// and terms with a negative index are absent.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "qbessel/equation.hpp"
#include "qbessel/errors.hpp"
#include "qbessel/gamma.hpp"
#include "qbessel/step_plan.hpp"

namespace qbessel {

struct PowerDerivative {
  double coefficient = 0.0;
  double exponent = 0.0;

  bool is_zero() const noexcept { return coefficient == 0.0; }
};

/// D^alpha x^q = Gamma(q+1)/Gamma(q+1-alpha) x^(q-alpha).
///
/// Integer orders use the classical falling factorial for both kinds.
/// Caputo of non-integer order: zero for integer 0 <= q < ceil(alpha), defined
/// for q > ceil(alpha) - 1. Riemann-Liouville: defined for q > -1, zero when
/// q + 1 - alpha is a pole of Gamma.
inline PowerDerivative frac_derivative_power(DerivativeKind kind, double alpha, double q) {
  if (!std::isfinite(alpha) || alpha < 0.0 || !std::isfinite(q)) throw precondition_error("frac_derivative_power: bad arguments");
  const double new_exponent = q - alpha;

  if (is_integer_order(alpha)) {
    const auto n = static_cast<int>(std::nearbyint(alpha));
    long double c = 1.0L;
    for (int k = 0; k < n; ++k) {
      const long double factor = static_cast<long double>(q) - k;
      if (std::fabs(factor) < pole_tolerance) return {0.0, new_exponent};
      c *= factor;
    }
    return {static_cast<double>(c), new_exponent};
  }

  if (kind == DerivativeKind::caputo) {
    const int n = order_ceiling(alpha);
    const double nearest = std::nearbyint(q);
    if (nearest >= 0.0 && nearest < n && std::fabs(q - nearest) < pole_tolerance) return {0.0, new_exponent};
    if (q > n - 1) return {gamma_ratio(q, 0.0, alpha), new_exponent};
    throw derivative_undefined_error("Caputo derivative of order " + std::to_string(alpha) + " of x^" + std::to_string(q) +
                                     " does not exist");
  }

  if (q > -1.0 && !detail::near_gamma_pole(static_cast<long double>(q) + 1.0L)) {
    return {gamma_ratio(q, 0.0, alpha), new_exponent};
  }
  throw derivative_undefined_error("Riemann-Liouville derivative of x^" + std::to_string(q) + " needs q > -1");
}

/// Below this magnitude a recursion denominator is treated as vanishing.
inline double denominator_tolerance(double nu_squared) { return 1e-8 * (1.0 + nu_squared); }

struct Truncation {
  std::size_t terms_used = 0;  // N, the highest coefficient index kept
  double tail_estimate = 0.0;  // max over the last n_beta terms of |c_n| x_max^(gamma + s n)
  bool converged = false;
  bool diverged = false;  // stopped because a coefficient overflowed
  double x_max = 1.0;
};

struct SeriesSolution {
  double gamma = 0.0;
  StepPlan plan;
  double s = 0.0;
  std::vector<long double> coefficients;  // c_0 .. c_N
  double c0 = 1.0;
  Truncation truncation;

  double exponent(std::size_t n) const { return gamma + plan.offset(static_cast<std::int64_t>(n)); }
};

struct SeriesOptions {
  double c0 = 1.0;
  double x_max = 1.0;
  double eps_tail = 1e-14;
  std::size_t max_terms = 2000;
};

namespace detail {

/// Runs the recursion for the c0 = 1 sequence; power-rule coefficients are
/// memoized per (term, exponent index).
class CoefficientRecursion {
 public:
  CoefficientRecursion(const QuasiBesselEquation& eq, double gamma, const StepPlan& plan)
      : eq_(eq), gamma_(gamma), plan_(plan), memo_(eq.size()), values_{1.0L} {}

  double power_coefficient(std::size_t term, std::int64_t k) {
    std::vector<double>& row = memo_[term];
    const auto idx = static_cast<std::size_t>(k);
    if (row.size() <= idx) row.resize(idx + 1, std::numeric_limits<double>::quiet_NaN());
    if (std::isnan(row[idx])) {
      row[idx] = frac_derivative_power(eq_.kind(), eq_.terms()[term].alpha, gamma_ + plan_.offset(k)).coefficient;
    }
    return row[idx];
  }

  long double denominator(std::int64_t n) {
    long double sum = -static_cast<long double>(eq_.nu_squared());
    for (std::size_t j = 0; j < eq_.size(); ++j) {
      if (eq_.terms()[j].pure_bessel()) sum += static_cast<long double>(eq_.terms()[j].d) * power_coefficient(j, n);
    }
    return sum;
  }

  long double next() {
    const auto n = static_cast<std::int64_t>(values_.size());
    const long double den = denominator(n);
    if (std::fabs(den) < denominator_tolerance(eq_.nu_squared())) throw denominator_pole_error(n, static_cast<double>(den));

    long double num = 0.0L;
    if (n >= plan_.n_beta) num += values_[static_cast<std::size_t>(n - plan_.n_beta)];
    for (const auto& [term, shift] : plan_.n_p) {
      if (n < shift) continue;
      const long double prev = values_[static_cast<std::size_t>(n - shift)];
      if (prev != 0.0L) num += prev * eq_.terms()[term].d * power_coefficient(term, n - shift);
    }
    const long double value = -num / den;
    values_.push_back(value);
    return value;
  }

  const std::vector<long double>& values() const noexcept { return values_; }

 private:
  const QuasiBesselEquation& eq_;
  double gamma_;
  const StepPlan& plan_;
  std::vector<std::vector<double>> memo_;
  std::vector<long double> values_;
};

inline double tail_estimate(const SeriesSolution& sol, double x_max) {
  const std::size_t n_last = sol.coefficients.size() - 1;
  const auto window = static_cast<std::size_t>(std::max<std::int64_t>(sol.plan.n_beta, 1));
  const std::size_t first = n_last + 1 >= window ? n_last + 1 - window : 0;
  double out = 0.0;
  for (std::size_t n = first; n <= n_last; ++n) {
    out = std::max(out, static_cast<double>(std::fabs(sol.coefficients[n])) * std::pow(x_max, sol.exponent(n)));
  }
  return out;
}

}  // namespace detail

/// Builds exactly c_0 .. c_N with N = n_terms.
inline SeriesSolution build_coefficients(const QuasiBesselEquation& eq, double gamma, const StepPlan& plan, std::size_t n_terms,
                                         double c0 = 1.0, double x_max = 1.0, double eps_tail = 1e-14) {
  if (n_terms < 1) throw precondition_error("build_coefficients: n_terms must be >= 1");
  detail::CoefficientRecursion rec(eq, gamma, plan);
  SeriesSolution sol{gamma, plan, plan.step(), {c0}, c0, {}};
  sol.truncation.x_max = x_max;
  for (std::size_t n = 1; n <= n_terms; ++n) {
    const long double scaled = c0 * rec.next();
    if (!std::isfinite(scaled) || std::fabs(scaled) > std::numeric_limits<double>::max()) {
      sol.truncation.diverged = true;
      break;
    }
    sol.coefficients.push_back(scaled);
  }
  sol.truncation.terms_used = sol.coefficients.size() - 1;
  sol.truncation.tail_estimate = detail::tail_estimate(sol, x_max);
  sol.truncation.converged = !sol.truncation.diverged && sol.truncation.tail_estimate < eps_tail;
  return sol;
}

/// Builds coefficients until the last n_beta terms all satisfy
/// |c_n| x_max^(gamma + s n) < eps_tail, or max_terms is reached
/// (converged = false), or a coefficient overflows (diverged = true).
inline SeriesSolution build_series(const QuasiBesselEquation& eq, double gamma, const StepPlan& plan,
                                   const SeriesOptions& options = {}) {
  detail::CoefficientRecursion rec(eq, gamma, plan);
  SeriesSolution sol{gamma, plan, plan.step(), {options.c0}, options.c0, {}};
  sol.truncation.x_max = options.x_max;

  const auto window = static_cast<std::size_t>(std::max<std::int64_t>(plan.n_beta, 1));
  const auto warmup = static_cast<std::size_t>(plan.max_shift());
  const auto small = [&](std::size_t n) {
    return static_cast<double>(std::fabs(sol.coefficients[n])) * std::pow(options.x_max, sol.exponent(n)) < options.eps_tail;
  };

  std::size_t run = small(0) ? 1 : 0;  // consecutive small terms ending at the last index
  for (std::size_t n = 1; n <= options.max_terms; ++n) {
    const long double scaled = options.c0 * rec.next();
    if (!std::isfinite(scaled) || std::fabs(scaled) > std::numeric_limits<double>::max()) {
      sol.truncation.diverged = true;
      break;
    }
    sol.coefficients.push_back(scaled);
    run = small(n) ? run + 1 : 0;
    if (n >= warmup && run >= window) {
      sol.truncation.converged = true;
      break;
    }
  }
  sol.truncation.terms_used = sol.coefficients.size() - 1;
  sol.truncation.tail_estimate = detail::tail_estimate(sol, options.x_max);
  return sol;
}

/// Solves c0 Gamma(1+gamma)/Gamma(1+gamma-mu) = value, i.e. matches
/// D^mu u(0+) = value for the leading term of the series.
inline double c0_from_initial_condition(double gamma, double mu, double value) {
  const double ratio = gamma_ratio(gamma, 0.0, mu);
  if (ratio == 0.0) throw precondition_error("initial condition: D^mu x^gamma vanishes, c0 is not determined");
  return value / ratio;
}

struct Evaluation {
  std::vector<double> values;
  std::vector<double> unstable_x;  // points where a single term exceeded 1e15 |sum|
};

namespace detail {

inline double value_at_origin(const SeriesSolution& sol) {
  long double sum = 0.0L;
  for (std::size_t n = 0; n < sol.coefficients.size(); ++n) {
    if (sol.coefficients[n] == 0.0L) continue;
    const double e = sol.exponent(n);
    if (e < 0.0) throw precondition_error("evaluate: the series is singular at x = 0");
    if (e == 0.0) sum += sol.coefficients[n];
  }
  return static_cast<double>(sum);
}

}  // namespace detail

inline Evaluation evaluate_with_diagnostics(const SeriesSolution& sol, std::span<const double> xs) {
  Evaluation out;
  out.values.reserve(xs.size());
  std::vector<long double> terms(sol.coefficients.size());
  for (double x : xs) {
    if (x == 0.0) {
      out.values.push_back(detail::value_at_origin(sol));
      continue;
    }
    if (!(x > 0.0)) throw precondition_error("evaluate: x must be >= 0");
    const long double log_x = std::log(static_cast<long double>(x));
    for (std::size_t n = 0; n < sol.coefficients.size(); ++n) {
      const long double c = sol.coefficients[n];
      terms[n] = c == 0.0L ? 0.0L : std::copysign(std::exp(std::log(std::fabs(c)) + sol.exponent(n) * log_x), c);
    }
    std::vector<long double> sorted = terms;
    std::stable_sort(sorted.begin(), sorted.end(), [](long double a, long double b) { return std::fabs(a) > std::fabs(b); });
    long double sum = 0.0L;
    for (long double t : sorted) sum += t;
    if (!sorted.empty() && std::fabs(sorted.front()) > 1e15L * std::fabs(sum)) out.unstable_x.push_back(x);
    out.values.push_back(static_cast<double>(sum));
  }
  return out;
}

/// Truncated series sum_(n <= N) c_n x^(gamma + s n), largest terms first.
inline std::vector<double> evaluate(const SeriesSolution& sol, std::span<const double> xs) {
  return evaluate_with_diagnostics(sol, xs).values;
}

/// Pointwise value of sum_i d_i x^(alpha_i + p_i) D^(alpha_i) u_N + (x^beta - nu^2) u_N
/// for the truncated series u_N, using the exact power rule term by term.
/// Contributions are collected per power of x before summing.
inline std::vector<double> residual(const QuasiBesselEquation& eq, const SeriesSolution& sol, std::span<const double> xs) {
  const StepPlan& plan = sol.plan;
  const std::size_t count = sol.coefficients.size();
  std::vector<long double> buckets(count + static_cast<std::size_t>(plan.max_shift()), 0.0L);

  for (std::size_t n = 0; n < count; ++n) {
    const long double c = sol.coefficients[n];
    if (c == 0.0L) continue;
    const double q = sol.exponent(n);
    long double own = -static_cast<long double>(eq.nu_squared());
    for (std::size_t i = 0; i < eq.size(); ++i) {
      const Term& t = eq.terms()[i];
      const long double contribution = static_cast<long double>(t.d) * frac_derivative_power(eq.kind(), t.alpha, q).coefficient;
      if (t.pure_bessel()) {
        own += contribution;
      } else {
        buckets[n + static_cast<std::size_t>(plan.n_p.at(i))] += c * contribution;
      }
    }
    buckets[n] += c * own;
    buckets[n + static_cast<std::size_t>(plan.n_beta)] += c;
  }

  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) {
    if (!(x > 0.0)) throw precondition_error("residual: x must be positive");
    const long double log_x = std::log(static_cast<long double>(x));
    long double sum = 0.0L;
    for (std::size_t k = 0; k < buckets.size(); ++k) {
      if (buckets[k] != 0.0L) sum += buckets[k] * std::exp((sol.gamma + plan.offset(static_cast<std::int64_t>(k))) * log_x);
    }
    out.push_back(static_cast<double>(sum));
  }
  return out;
}

/// C with max|residual| <= C * tail_estimate on (0, x_max] for x_max >= 1.
///
/// Only the last n_beta coefficients feed powers beyond x^(gamma + s N), each
/// through x^beta or a shifted term d_i P_i x^(p_i), and each is bounded by
/// the tail estimate at x_max. Rounding in the coefficients is not included.
inline double residual_bound_constant(const QuasiBesselEquation& eq, const SeriesSolution& sol) {
  const StepPlan& plan = sol.plan;
  const double x_max = sol.truncation.x_max;
  const std::size_t n_last = sol.coefficients.size() - 1;
  const auto window = static_cast<std::size_t>(std::max<std::int64_t>(plan.n_beta, 1));
  const std::size_t first = n_last + 1 >= window ? n_last + 1 - window : 0;

  double per_term = std::pow(x_max, eq.beta_value());
  for (const auto& [term, shift] : plan.n_p) {
    const Term& t = eq.terms()[term];
    double largest = 0.0;
    for (std::size_t m = first; m <= n_last; ++m) {
      largest = std::max(largest, std::fabs(frac_derivative_power(eq.kind(), t.alpha, sol.exponent(m)).coefficient));
    }
    per_term += std::fabs(t.d) * largest * std::pow(x_max, eq.p_value(term));
  }
  return static_cast<double>(window) * per_term;
}

}  // namespace qbessel
