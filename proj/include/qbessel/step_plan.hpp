#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "qbessel/equation.hpp"
#include "qbessel/rational.hpp"

namespace qbessel {

/// Largest step s such that x^beta and every x^(p_i) land on the lattice
/// gamma + s*n, with the corresponding integer shifts.
struct StepPlan {
  Rational s;                               // in units of r
  std::int64_t n_beta = 0;                  // beta / s
  std::map<std::size_t, std::int64_t> n_p;  // term index -> p_i / s, shifted terms only
  std::int64_t lcd = 1;                     // N_LCD
  std::int64_t gcf = 1;                     // N_gcf
  double r = 1.0;

  double step() const { return static_cast<double>(s.to_long_double() * r); }

  /// n*s with r applied.
  double offset(std::int64_t n) const {
    return static_cast<double>(static_cast<long double>(n) * s.numerator() / s.denominator() * r);
  }

  std::int64_t max_shift() const {
    std::int64_t out = n_beta;
    for (const auto& [term, shift] : n_p) out = std::max(out, shift);
    return out;
  }
};

inline StepPlan compute_step(const QuasiBesselEquation& eq) {
  if (eq.beta().sign() <= 0) throw precondition_error("compute_step: beta must be positive");

  std::vector<Rational> values{eq.beta()};
  std::vector<std::size_t> shifted;
  for (std::size_t i = 0; i < eq.size(); ++i) {
    if (!eq.terms()[i].pure_bessel()) {
      values.push_back(eq.terms()[i].p);
      shifted.push_back(i);
    }
  }

  StepPlan plan;
  plan.r = eq.r();
  plan.lcd = lcd(values);

  std::vector<std::int64_t> raw;  // n^0 = value / s^0
  raw.reserve(values.size());
  for (const Rational& v : values) raw.push_back(detail::checked_mul(v.numerator(), plan.lcd / v.denominator()));
  plan.gcf = gcf(raw);

  plan.s = Rational(plan.gcf, plan.lcd);
  plan.n_beta = raw.front() / plan.gcf;
  for (std::size_t k = 0; k < shifted.size(); ++k) plan.n_p[shifted[k]] = raw[k + 1] / plan.gcf;
  return plan;
}

}  // namespace qbessel
