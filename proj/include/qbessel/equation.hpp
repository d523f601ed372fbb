#pragma once

// Problem model for fractional quasi-Bessel equations
//
//   sum_i d_i x^(alpha_i + p_i) D^(alpha_i) u + (x^beta - nu^2) u = 0,
//
// together with well-posedness checks, the existence threshold, the
// uniqueness bound, and the reductions of constant-coefficient and
// power-factor equations to quasi-Bessel form.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qbessel/errors.hpp"
#include "qbessel/gamma.hpp"
#include "qbessel/rational.hpp"

namespace qbessel {

enum class DerivativeKind { caputo, riemann_liouville };

inline std::string_view to_string(DerivativeKind kind) {
  return kind == DerivativeKind::caputo ? "caputo" : "riemann_liouville";
}

/// True when alpha is an integer derivative order.
inline bool is_integer_order(double alpha) { return std::fabs(alpha - std::nearbyint(alpha)) < pole_tolerance; }

/// Smallest integer n with alpha <= n; integer orders map to themselves.
inline int order_ceiling(double alpha) {
  return is_integer_order(alpha) ? static_cast<int>(std::nearbyint(alpha)) : static_cast<int>(std::ceil(alpha));
}

/// One term d x^(alpha + p) D^alpha u. `p` is stored in units of the common factor r.
struct Term {
  double d = 0.0;
  double alpha = 0.0;
  Rational p;

  bool pure_bessel() const noexcept { return p.is_zero(); }
};

class QuasiBesselEquation {
 public:
  /// Terms are reordered by descending alpha (ties: smaller shift first).
  /// `beta` is in units of `r`.
  QuasiBesselEquation(std::vector<Term> terms, Rational beta, double nu_squared, DerivativeKind kind, double r = 1.0)
      : terms_(std::move(terms)), beta_(beta), nu_squared_(nu_squared), r_(r), kind_(kind) {
    if (terms_.empty()) throw precondition_error("equation: at least one term is required");
    if (!std::isfinite(r_) || r_ <= 0.0) throw precondition_error("equation: r must be finite and positive");
    if (!std::isfinite(nu_squared_) || nu_squared_ < 0.0) throw precondition_error("equation: nu^2 must be finite and >= 0");
    if (beta_.sign() < 0) throw precondition_error("equation: beta must be >= 0");
    for (const Term& t : terms_) {
      if (!std::isfinite(t.d)) throw precondition_error("equation: coefficient d is not finite");
      if (!std::isfinite(t.alpha) || t.alpha < 0.0) throw precondition_error("equation: alpha must be finite and >= 0");
      if (t.p.sign() < 0) throw precondition_error("equation: negative shifting index p is not supported");
    }
    std::stable_sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) {
      if (a.alpha != b.alpha) return a.alpha > b.alpha;
      return a.p < b.p;
    });
  }

  const std::vector<Term>& terms() const noexcept { return terms_; }
  const Term& leading() const noexcept { return terms_.front(); }
  std::size_t size() const noexcept { return terms_.size(); }

  Rational beta() const noexcept { return beta_; }
  double beta_value() const noexcept { return static_cast<double>(beta_.to_long_double() * r_); }
  double p_value(std::size_t i) const { return static_cast<double>(terms_.at(i).p.to_long_double() * r_); }
  double nu_squared() const noexcept { return nu_squared_; }
  double r() const noexcept { return r_; }
  DerivativeKind kind() const noexcept { return kind_; }

  /// m1: number of terms with p = 0.
  std::size_t pure_bessel_count() const {
    return static_cast<std::size_t>(std::count_if(terms_.begin(), terms_.end(), [](const Term& t) { return t.pure_bessel(); }));
  }

  /// m0: number of pure-Bessel terms with non-integer alpha.
  std::size_t fractional_pure_bessel_count() const {
    return static_cast<std::size_t>(std::count_if(terms_.begin(), terms_.end(), [](const Term& t) {
      return t.pure_bessel() && !is_integer_order(t.alpha);
    }));
  }

  /// Largest ceiling over non-integer orders; 0 when every order is an integer.
  int n_max() const {
    int out = 0;
    for (const Term& t : terms_)
      if (!is_integer_order(t.alpha)) out = std::max(out, order_ceiling(t.alpha));
    return out;
  }

  /// Largest ceiling over non-integer pure-Bessel orders; 0 when there are none.
  int n_m0() const {
    int out = 0;
    for (const Term& t : terms_)
      if (t.pure_bessel() && !is_integer_order(t.alpha)) out = std::max(out, order_ceiling(t.alpha));
    return out;
  }

  /// Highest alpha among pure-Bessel terms.
  std::optional<double> alpha_star_max() const {
    for (const Term& t : terms_)
      if (t.pure_bessel()) return t.alpha;  // sorted by descending alpha
    return std::nullopt;
  }

 private:
  std::vector<Term> terms_;
  Rational beta_;
  double nu_squared_;
  double r_;
  DerivativeKind kind_;
};

// ---------------------------------------------------------------------------
// Validation

enum class Severity { warning, fatal };

enum class IssueCode {
  leading_term_shifted,                 // p1 != 0: the series diverges
  nonpositive_beta,                     // beta must be > 0 for a positive n_beta
  nonpositive_pure_bessel_coefficient,  // real characteristic roots no longer guaranteed
};

inline std::string_view code_name(IssueCode code) {
  switch (code) {
    case IssueCode::leading_term_shifted: return "leading_term_shifted";
    case IssueCode::nonpositive_beta: return "nonpositive_beta";
    case IssueCode::nonpositive_pure_bessel_coefficient: return "nonpositive_pure_bessel_coefficient";
  }
  return "unknown";
}

struct ValidationIssue {
  Severity severity;
  IssueCode code;
  std::size_t term;  // index into terms(), or the leading term for equation-wide issues
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool valid() const {
    return std::none_of(issues.begin(), issues.end(), [](const ValidationIssue& i) { return i.severity == Severity::fatal; });
  }

  bool has(IssueCode code) const {
    return std::any_of(issues.begin(), issues.end(), [code](const ValidationIssue& i) { return i.code == code; });
  }
};

inline ValidationReport validate(const QuasiBesselEquation& eq) {
  ValidationReport report;
  const Term& lead = eq.leading();
  if (!lead.pure_bessel()) {
    report.issues.push_back({Severity::fatal, IssueCode::leading_term_shifted, 0,
                             "highest-order term has shift p1 = " + lead.p.to_string() +
                                 " != 0; the power of x must match the highest derivative order, "
                                 "otherwise the fractional series diverges and no series solution exists"});
  }
  if (eq.beta().sign() <= 0) {
    report.issues.push_back({Severity::fatal, IssueCode::nonpositive_beta, 0, "beta must be positive"});
  }
  for (std::size_t i = 0; i < eq.size(); ++i) {
    const Term& t = eq.terms()[i];
    if (t.pure_bessel() && t.d <= 0.0) {
      report.issues.push_back({Severity::warning, IssueCode::nonpositive_pure_bessel_coefficient, i,
                               "pure-Bessel term " + std::to_string(i) +
                                   " has d <= 0; real roots of the characteristic equation are not guaranteed"});
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Threshold and uniqueness bound (Caputo)

/// Gamma(n_m0) * sum over pure-Bessel i of d_i / Gamma(n_max - alpha_i).
///
/// Equations with nu^2 at or above this value carry the existence guarantee.
/// Throws inapplicable_error for Riemann-Liouville equations, when there is no
/// fractional pure-Bessel term, when a pure-Bessel d_i <= 0, or when
/// n_max - alpha_i hits a pole of Gamma.
inline double nu_min_threshold(const QuasiBesselEquation& eq) {
  if (eq.kind() != DerivativeKind::caputo) throw inapplicable_error("threshold applies to Caputo equations only");
  if (eq.fractional_pure_bessel_count() == 0) throw inapplicable_error("threshold needs a fractional pure-Bessel term (m0 = 0)");
  const int n_max = eq.n_max();
  double sum = 0.0;
  for (const Term& t : eq.terms()) {
    if (!t.pure_bessel()) continue;
    if (t.d <= 0.0) throw inapplicable_error("threshold requires positive pure-Bessel coefficients");
    const SignedLogGamma g = signed_log_gamma(n_max - t.alpha);
    if (g.is_pole()) throw inapplicable_error("threshold: Gamma(n_max - alpha_i) is a pole");
    sum += t.d * static_cast<double>(g.sign) * std::exp(-g.log_abs);
  }
  return std::exp(signed_log_gamma(eq.n_m0()).log_abs) * sum;
}

/// b1^beta + sum_i q_i |d_i| b1^(n_i + p_i) with b1 = max(1, b).
///
/// The initial value problem on [0, b] has a unique solution when nu^2
/// exceeds this value.
inline double uniqueness_bound(const QuasiBesselEquation& eq, double b) {
  if (eq.kind() != DerivativeKind::caputo) throw precondition_error("uniqueness bound applies to Caputo equations only");
  if (!(b > 0.0)) throw precondition_error("uniqueness bound: b must be positive");
  const double b1 = std::max(1.0, b);
  double out = std::pow(b1, eq.beta_value());
  for (std::size_t i = 0; i < eq.size(); ++i) {
    const Term& t = eq.terms()[i];
    const int n = order_ceiling(t.alpha);
    double q = 1.0;
    if (!is_integer_order(t.alpha)) {
      const double gap = n - t.alpha;
      q = 1.0 / (std::exp(signed_log_gamma(gap).log_abs) * (gap + 1.0));
    }
    out += q * std::fabs(t.d) * std::pow(b1, n + eq.p_value(i));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reductions to quasi-Bessel form

/// d D^alpha u, alpha in units of r.
struct ConstantCoefficientTerm {
  double d = 0.0;
  Rational alpha;
};

/// d x^power D^alpha u, power and alpha in units of r.
struct PowerFactorTerm {
  double d = 0.0;
  Rational power;
  Rational alpha;
};

/// sum_i d_i x^(beta_i) D^(alpha_i) u + x^delta u = 0, multiplied through by
/// x^(alpha_1 - beta_1). Gives p_i = alpha_1 - beta_1 + beta_i - alpha_i,
/// beta = alpha_1 - beta_1 + delta and nu = 0.
inline QuasiBesselEquation from_power_factors(std::vector<PowerFactorTerm> terms, Rational delta, DerivativeKind kind,
                                              double r = 1.0) {
  if (terms.empty()) throw precondition_error("power-factor equation needs at least one term");
  std::stable_sort(terms.begin(), terms.end(), [](const PowerFactorTerm& a, const PowerFactorTerm& b) { return a.alpha > b.alpha; });
  const PowerFactorTerm& lead = terms.front();
  if (lead.alpha < lead.power) throw precondition_error("power-factor equation needs alpha_1 >= beta_1");
  const Rational lift = lead.alpha - lead.power;

  std::vector<Term> out;
  out.reserve(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const PowerFactorTerm& t = terms[i];
    if (t.alpha.sign() < 0) throw precondition_error("derivative orders must be >= 0");
    if (i > 0 && !(t.alpha < lead.alpha)) throw precondition_error("highest derivative order must be unique");
    if (t.alpha - t.power > lift) throw precondition_error("power-factor equation needs alpha_1 - beta_1 >= alpha_i - beta_i");
    out.push_back({t.d, static_cast<double>(t.alpha.to_long_double() * r), lift + t.power - t.alpha});
  }
  return {std::move(out), lift + delta, 0.0, kind, r};
}

/// sum_i d_i D^(alpha_i) u + u = 0, multiplied through by x^(alpha_1).
/// Gives p_i = alpha_1 - alpha_i, beta = alpha_1 and nu = 0.
inline QuasiBesselEquation from_constant_coefficients(const std::vector<ConstantCoefficientTerm>& terms, DerivativeKind kind,
                                                      double r = 1.0) {
  std::vector<PowerFactorTerm> lifted;
  lifted.reserve(terms.size());
  for (const ConstantCoefficientTerm& t : terms) lifted.push_back({t.d, Rational(0), t.alpha});
  return from_power_factors(std::move(lifted), Rational(0), kind, r);
}

}  // namespace qbessel
