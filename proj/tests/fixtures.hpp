#pragma once

#include <vector>

#include "qbessel/equation.hpp"
#include "qbessel/rational.hpp"

namespace qbessel::test {

inline Rational q(const char* text) { return parse_rational(text); }

/// 1.5 x^1.5 D^1.5 u - 1.2 x^1.9 D^1.1 u + 3 x D^0.5 u + (x^2 - nu^2) u = 0.
inline QuasiBesselEquation three_term_caputo(double nu_squared) {
  return {{{1.5, 1.5, q("0")}, {-1.2, 1.1, q("0.8")}, {3.0, 0.5, q("0.5")}}, q("2"), nu_squared, DerivativeKind::caputo};
}

/// x u' + x u = 0.
inline QuasiBesselEquation exponential_equation(DerivativeKind kind = DerivativeKind::caputo) {
  return from_constant_coefficients({{1.0, q("1")}}, kind);
}

/// sum_i D^(alpha_i) u = 0 lifted by x^(alpha_1).
inline QuasiBesselEquation constant_coefficients(std::vector<const char*> orders, DerivativeKind kind = DerivativeKind::riemann_liouville) {
  std::vector<ConstantCoefficientTerm> terms;
  for (const char* a : orders) terms.push_back({1.0, q(a)});
  return from_constant_coefficients(terms, kind);
}

/// x^1.5 D^1.5 u + x^0.7 D^0.5 u + x^1.2 u = 0 (RL); roots -0.5 and 0.5, s = 1/5.
inline QuasiBesselEquation colliding_rl() {
  return {{{1.0, 1.5, q("0")}, {1.0, 0.5, q("0.2")}}, q("1.2"), 0.0, DerivativeKind::riemann_liouville};
}

/// x^1.9 D^1.5 u + x^0.5 D^0.5 u + x u = 0 (RL): the highest-order term is shifted.
inline QuasiBesselEquation shifted_leading_rl() {
  return {{{1.0, 1.5, q("0.4")}, {1.0, 0.5, q("0")}}, q("1"), 0.0, DerivativeKind::riemann_liouville};
}

/// -0.5 x^1.7 D^1.7 u + x^1.7 u = 0 (RL); roots 0.7 and -0.3.
inline QuasiBesselEquation two_root_rl() { return from_constant_coefficients({{-0.5, q("1.7")}}, DerivativeKind::riemann_liouville); }

/// -(1/lambda) x^0.5 D^0.5 u + x^1.2 u = 0 (RL); root -0.5.
inline QuasiBesselEquation power_factor_rl(double lambda) {
  return from_power_factors({{-1.0 / lambda, q("0"), q("0.5")}}, q("0.7"), DerivativeKind::riemann_liouville);
}

}  // namespace qbessel::test
