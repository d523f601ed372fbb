#pragma once

// JSON equation specification read by the `qbessel solve` command.
//
// Exponent-like fields (alpha, p, beta, beta_i, delta) are exact decimal or
// "a/b" strings in units of r. Coefficients, nu, c0 and the domain may also
// be plain JSON numbers.

#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qbessel/equation.hpp"
#include "qbessel/errors.hpp"
#include "qbessel/rational.hpp"

namespace qbessel::cli {

enum class Form { quasi_bessel, constant_coefficients, power_factors };

struct TermSpec {
  double d = 0.0;
  Rational alpha;
  Rational p;      // quasi_bessel
  Rational power;  // power_factors (beta_i)
};

struct Domain {
  double x_min = 0.1;
  double x_max = 1.0;
  std::size_t n_points = 101;

  std::vector<double> grid() const {
    std::vector<double> xs;
    xs.reserve(n_points);
    for (std::size_t i = 0; i < n_points; ++i) {
      xs.push_back(n_points == 1 ? x_min : x_min + (x_max - x_min) * static_cast<double>(i) / static_cast<double>(n_points - 1));
    }
    return xs;
  }
};

struct SpecOptions {
  double c0 = 1.0;
  std::size_t n_terms_max = 2000;
  double eps_tail = 1e-14;
};

struct EquationSpec {
  DerivativeKind kind = DerivativeKind::riemann_liouville;
  Form form = Form::quasi_bessel;
  std::vector<TermSpec> terms;
  Rational beta;   // quasi_bessel
  Rational delta;  // power_factors
  Rational nu;
  double r = 1.0;
  Domain domain;
  SpecOptions options;
};

namespace detail {

using nlohmann::json;

inline Rational exact_field(const json& node, const std::string& name) {
  if (node.is_string()) return parse_rational(node.get<std::string>());
  if (node.is_number_integer()) return Rational(node.get<std::int64_t>());
  throw parse_error("field '" + name + "' must be a decimal string (got " + node.dump() + ")");
}

inline double real_field(const json& node, const std::string& name) {
  if (node.is_number()) return node.get<double>();
  if (!node.is_string()) throw parse_error("field '" + name + "' must be a number or numeric string");
  const std::string text = node.get<std::string>();
  try {
    return parse_rational(text).to_double();
  } catch (const error&) {
  }
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw parse_error("field '" + name + "' is not a finite number: '" + text + "'");
  }
  return value;
}

inline const json& required(const json& obj, const char* key) {
  if (!obj.contains(key)) throw parse_error(std::string("missing field '") + key + "'");
  return obj.at(key);
}

}  // namespace detail

inline EquationSpec parse_spec(const nlohmann::json& doc) {
  using detail::exact_field;
  using detail::real_field;
  using detail::required;
  if (!doc.is_object()) throw parse_error("equation spec must be a JSON object");

  EquationSpec spec;
  const std::string kind = required(doc, "kind").get<std::string>();
  if (kind == "caputo") {
    spec.kind = DerivativeKind::caputo;
  } else if (kind == "riemann_liouville") {
    spec.kind = DerivativeKind::riemann_liouville;
  } else {
    throw parse_error("unknown kind '" + kind + "'");
  }

  const std::string form = doc.value("form", std::string("quasi_bessel"));
  if (form == "quasi_bessel") {
    spec.form = Form::quasi_bessel;
  } else if (form == "constant_coefficients") {
    spec.form = Form::constant_coefficients;
  } else if (form == "power_factors") {
    spec.form = Form::power_factors;
  } else {
    throw parse_error("unknown form '" + form + "'");
  }

  const auto& terms = required(doc, "terms");
  if (!terms.is_array() || terms.empty()) throw parse_error("'terms' must be a non-empty array");
  for (const auto& t : terms) {
    TermSpec term;
    term.d = real_field(required(t, "d"), "d");
    term.alpha = exact_field(required(t, "alpha"), "alpha");
    if (spec.form == Form::quasi_bessel) term.p = t.contains("p") ? exact_field(t.at("p"), "p") : Rational(0);
    if (spec.form == Form::power_factors) term.power = exact_field(required(t, "beta_i"), "beta_i");
    spec.terms.push_back(term);
  }

  if (spec.form == Form::quasi_bessel) spec.beta = exact_field(required(doc, "beta"), "beta");
  if (spec.form == Form::power_factors) spec.delta = exact_field(required(doc, "delta"), "delta");
  if (doc.contains("nu")) spec.nu = exact_field(doc.at("nu"), "nu");
  if (spec.form != Form::quasi_bessel && !spec.nu.is_zero()) throw parse_error("nu must be 0 for " + form + " equations");
  if (doc.contains("r")) spec.r = real_field(doc.at("r"), "r");

  if (doc.contains("domain")) {
    const auto& d = doc.at("domain");
    if (d.contains("x_min")) spec.domain.x_min = real_field(d.at("x_min"), "x_min");
    if (d.contains("x_max")) spec.domain.x_max = real_field(d.at("x_max"), "x_max");
    if (d.contains("n_points")) spec.domain.n_points = d.at("n_points").get<std::size_t>();
  }
  if (!(spec.domain.x_min > 0.0)) throw parse_error("domain.x_min must be positive");
  if (spec.domain.x_max < spec.domain.x_min) throw parse_error("domain.x_max must be >= x_min");
  if (spec.domain.n_points == 0) throw parse_error("domain.n_points must be positive");

  if (doc.contains("options")) {
    const auto& o = doc.at("options");
    if (o.contains("c0")) spec.options.c0 = real_field(o.at("c0"), "c0");
    if (o.contains("n_terms_max")) spec.options.n_terms_max = o.at("n_terms_max").get<std::size_t>();
    if (o.contains("eps_tail")) spec.options.eps_tail = real_field(o.at("eps_tail"), "eps_tail");
  }
  return spec;
}

inline EquationSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot read spec file '" + path.string() + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw parse_error("invalid JSON in '" + path.string() + "': " + e.what());
  }
  try {
    return parse_spec(doc);
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(std::string("malformed spec: ") + e.what());
  }
}

inline QuasiBesselEquation build_equation(const EquationSpec& spec) {
  switch (spec.form) {
    case Form::quasi_bessel: {
      std::vector<Term> terms;
      for (const TermSpec& t : spec.terms) terms.push_back({t.d, static_cast<double>(t.alpha.to_long_double() * spec.r), t.p});
      return {std::move(terms), spec.beta, (spec.nu * spec.nu).to_double(), spec.kind, spec.r};
    }
    case Form::constant_coefficients: {
      std::vector<ConstantCoefficientTerm> terms;
      for (const TermSpec& t : spec.terms) terms.push_back({t.d, t.alpha});
      return from_constant_coefficients(terms, spec.kind, spec.r);
    }
    case Form::power_factors: {
      std::vector<PowerFactorTerm> terms;
      for (const TermSpec& t : spec.terms) terms.push_back({t.d, t.power, t.alpha});
      return from_power_factors(std::move(terms), spec.delta, spec.kind, spec.r);
    }
  }
  throw precondition_error("unknown equation form");
}

}  // namespace qbessel::cli
