#pragma once

// validate -> step -> roots -> screen -> coefficients -> evaluate -> residual,
// plus the CSV / report writers behind `qbessel solve`.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qbessel/characteristic.hpp"
#include "qbessel/cli/spec_file.hpp"
#include "qbessel/equation.hpp"
#include "qbessel/series.hpp"
#include "qbessel/specialfn.hpp"
#include "qbessel/step_plan.hpp"

namespace qbessel::cli {

enum ExitCode : int {
  exit_ok = 0,
  exit_validation_failure = 2,
  exit_no_valid_roots = 3,
  exit_numerical_failure = 4,
};

struct Flags {
  std::optional<std::size_t> root;
  bool oracle = false;
  std::optional<std::size_t> max_terms;
  std::optional<double> eps_tail;
};

struct Warning {
  std::string code;
  std::string message;
};

struct RootOutcome {
  CharacteristicRoot root;
  double g_value = 0.0;
  std::optional<SeriesSolution> solution;
  std::vector<double> u;
  std::vector<double> residual;
  std::optional<double> oracle_discrepancy;
};

struct SolveResult {
  int exit_code = exit_ok;
  std::string diagnostic;  // set for nonzero exits
  std::optional<QuasiBesselEquation> equation;
  std::optional<ValidationReport> validation;
  std::optional<StepPlan> plan;
  std::optional<double> threshold;
  std::string threshold_note;
  std::optional<double> uniqueness;
  double search_hi = 0.0;
  std::vector<double> xs;
  std::vector<RootOutcome> roots;
  std::vector<Warning> warnings;
};

inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

struct SingleTermOracle {
  KilbasSaigoParams params;
  double lambda = 0.0;
  double beta = 0.0;
};

/// d x^alpha D^alpha u + x^beta u = 0 with step s = beta has the closed form
/// c0 x^gamma E_(alpha, beta/alpha, (gamma+beta-alpha)/alpha)(-x^beta / d).
inline std::optional<SingleTermOracle> single_term_oracle(const QuasiBesselEquation& eq, const StepPlan& plan, double gamma) {
  if (eq.size() != 1 || !eq.leading().pure_bessel() || eq.nu_squared() != 0.0 || plan.n_beta != 1) return std::nullopt;
  const Term& t = eq.leading();
  if (t.alpha <= 0.0 || t.d == 0.0) return std::nullopt;
  const double beta = eq.beta_value();
  return SingleTermOracle{{t.alpha, beta / t.alpha, (gamma + beta - t.alpha) / t.alpha}, -1.0 / t.d, beta};
}

}  // namespace detail

/// Runs the full pipeline without touching the filesystem.
inline SolveResult run_pipeline(const EquationSpec& spec, const Flags& flags = {}) {
  SolveResult out;
  out.xs = spec.domain.grid();

  try {
    out.equation.emplace(build_equation(spec));
  } catch (const error& e) {
    out.exit_code = exit_validation_failure;
    out.diagnostic = std::string("invalid equation: ") + e.what();
    return out;
  }
  const QuasiBesselEquation& eq = *out.equation;

  out.validation = validate(eq);
  for (const ValidationIssue& issue : out.validation->issues) {
    if (issue.severity == Severity::warning) out.warnings.push_back({std::string(code_name(issue.code)), issue.message});
  }
  if (!out.validation->valid()) {
    out.exit_code = exit_validation_failure;
    for (const ValidationIssue& issue : out.validation->issues) {
      if (issue.severity == Severity::fatal) out.diagnostic += "validation failed [" + std::string(code_name(issue.code)) + "]: " + issue.message + "\n";
    }
    return out;
  }

  try {
    out.plan = compute_step(eq);
  } catch (const overflow_error& e) {
    out.exit_code = exit_numerical_failure;
    out.diagnostic = std::string("step computation failed: ") + e.what();
    return out;
  }
  const StepPlan& plan = *out.plan;

  if (eq.kind() == DerivativeKind::caputo) {
    try {
      out.threshold = nu_min_threshold(eq);
      if (eq.nu_squared() < *out.threshold) {
        out.warnings.push_back({"threshold_not_met", "nu^2 = " + format_real(eq.nu_squared()) + " is below nu^2_min = " +
                                                         format_real(*out.threshold) + "; convergence is not guaranteed"});
      }
    } catch (const inapplicable_error& e) {
      out.threshold_note = e.what();
    }
    out.uniqueness = uniqueness_bound(eq, spec.domain.x_max);
  }

  RootSearchOptions search;
  search.include_caputo_integer_roots = spec.form == Form::constant_coefficients && eq.kind() == DerivativeKind::caputo;
  RootSearch found = find_roots(eq, search);
  out.search_hi = found.search_hi;
  for (const std::string& d : found.diagnostics) out.warnings.push_back({"no_sign_change", d});
  const std::vector<CharacteristicRoot> screened = screen_collisions(found.roots, plan);

  for (const CharacteristicRoot& root : screened) {
    RootOutcome outcome;
    outcome.root = root;
    try {
      outcome.g_value = root.origin == RootOrigin::caputo_integer ? 0.0 : characteristic_value(eq, root.gamma);
    } catch (const error&) {
      outcome.g_value = std::nan("");
    }
    if (root.status == RootStatus::below_caputo_floor) {
      out.warnings.push_back({"below_caputo_floor", "root " + format_real(root.gamma) + " violates gamma > n_max - 1 for Caputo derivatives"});
    } else if (root.status == RootStatus::collision_invalid) {
      out.warnings.push_back({"collision_invalid", "root " + format_real(root.gamma) + " reaches a larger root after n = " +
                                                       std::to_string(*root.collision_step) + " steps"});
    }
    out.roots.push_back(outcome);
  }

  if (flags.root && *flags.root >= out.roots.size()) {
    out.exit_code = exit_no_valid_roots;
    out.diagnostic = "--root " + std::to_string(*flags.root) + " is out of range (" + std::to_string(out.roots.size()) + " roots)";
    return out;
  }

  SeriesOptions series;
  series.c0 = spec.options.c0;
  series.x_max = spec.domain.x_max;
  series.eps_tail = flags.eps_tail.value_or(spec.options.eps_tail);
  series.max_terms = flags.max_terms.value_or(spec.options.n_terms_max);

  std::size_t attempted = 0;
  std::size_t converged = 0;
  for (std::size_t k = 0; k < out.roots.size(); ++k) {
    RootOutcome& outcome = out.roots[k];
    if (flags.root && *flags.root != k) continue;
    if (outcome.root.status != RootStatus::valid) continue;
    ++attempted;
    try {
      outcome.solution = build_series(eq, outcome.root.gamma, plan, series);
    } catch (const denominator_pole_error& e) {
      outcome.root.status = RootStatus::denominator_pole;
      out.warnings.push_back({"denominator_pole", "root " + format_real(outcome.root.gamma) + ": " + e.what()});
      continue;
    } catch (const derivative_undefined_error& e) {
      out.warnings.push_back({"derivative_undefined", "root " + format_real(outcome.root.gamma) + ": " + e.what()});
      continue;
    }
    const SeriesSolution& sol = *outcome.solution;
    if (sol.truncation.diverged) {
      out.warnings.push_back({"diverged", "root " + format_real(sol.gamma) + ": coefficients overflow after n = " +
                                              std::to_string(sol.truncation.terms_used)});
    } else if (!sol.truncation.converged) {
      out.warnings.push_back({"not_converged", "root " + format_real(sol.gamma) + ": tail estimate " +
                                                   format_real(sol.truncation.tail_estimate) + " after " +
                                                   std::to_string(sol.truncation.terms_used) + " terms"});
    } else {
      ++converged;
    }
    const Evaluation ev = evaluate_with_diagnostics(sol, out.xs);
    outcome.u = ev.values;
    if (!ev.unstable_x.empty()) {
      out.warnings.push_back({"unstable_evaluation", "root " + format_real(sol.gamma) + ": cancellation at " +
                                                         std::to_string(ev.unstable_x.size()) + " points, first x = " +
                                                         format_real(ev.unstable_x.front())});
    }
    try {
      outcome.residual = residual(eq, sol, out.xs);
    } catch (const derivative_undefined_error& e) {
      out.warnings.push_back({"derivative_undefined", "residual for root " + format_real(sol.gamma) + ": " + e.what()});
    }

    if (flags.oracle) {
      if (const auto oracle = detail::single_term_oracle(eq, plan, sol.gamma)) {
        double worst = 0.0;
        for (std::size_t i = 0; i < out.xs.size(); ++i) {
          const double x = out.xs[i];
          const double expected = sol.c0 * std::pow(x, sol.gamma) * kilbas_saigo(oracle->params, oracle->lambda * std::pow(x, oracle->beta), 4000);
          worst = std::max(worst, std::fabs(outcome.u[i] - expected) / std::max(1.0, std::fabs(expected)));
        }
        outcome.oracle_discrepancy = worst;
        if (worst > 1e-8) {
          out.warnings.push_back({"oracle_mismatch", "root " + format_real(sol.gamma) + ": relative discrepancy " + format_real(worst)});
        }
      }
    }
  }

  if (attempted == 0) {
    out.exit_code = exit_no_valid_roots;
    out.diagnostic = flags.root ? "root " + std::to_string(*flags.root) + " is not a valid root" : "no valid characteristic roots";
  } else if (converged == 0) {
    out.exit_code = exit_numerical_failure;
    out.diagnostic = "no valid root produced a converged series";
  }
  return out;
}

inline std::string render_report(const SolveResult& r) {
  std::ostringstream os;
  if (r.equation) {
    const QuasiBesselEquation& eq = *r.equation;
    os << "equation: kind=" << to_string(eq.kind()) << " beta=" << eq.beta() << " (" << format_real(eq.beta_value())
       << ") nu^2=" << format_real(eq.nu_squared()) << " r=" << format_real(eq.r()) << "\n";
    for (std::size_t i = 0; i < eq.size(); ++i) {
      const Term& t = eq.terms()[i];
      os << "  term " << i << ": d=" << format_real(t.d) << " alpha=" << format_real(t.alpha) << " p=" << t.p
         << (t.pure_bessel() ? " (pure-Bessel)" : "") << "\n";
    }
  }
  if (r.validation) {
    os << "validation: " << (r.validation->valid() ? "ok" : "FAILED") << "\n";
    for (const ValidationIssue& issue : r.validation->issues) {
      os << "  " << (issue.severity == Severity::fatal ? "fatal" : "warning") << "[" << code_name(issue.code) << "]: " << issue.message << "\n";
    }
  }
  if (r.plan) {
    const StepPlan& p = *r.plan;
    os << "step plan: s=" << p.s << " (" << format_real(p.step()) << ") n_beta=" << p.n_beta << " n_p={";
    bool first = true;
    for (const auto& [term, shift] : p.n_p) {
      os << (first ? "" : ", ") << term << ":" << shift;
      first = false;
    }
    os << "} N_LCD=" << p.lcd << " N_gcf=" << p.gcf << "\n";
  }
  if (r.equation && r.equation->kind() == DerivativeKind::caputo) {
    if (r.threshold) {
      os << "threshold: nu^2_min=" << format_real(*r.threshold) << " satisfied=" << (r.equation->nu_squared() >= *r.threshold ? "yes" : "no") << "\n";
    } else if (!r.threshold_note.empty()) {
      os << "threshold: inapplicable (" << r.threshold_note << ")\n";
    }
    if (r.uniqueness) {
      os << "uniqueness bound at b=x_max: " << format_real(*r.uniqueness)
         << " satisfied=" << (r.equation->nu_squared() > *r.uniqueness ? "yes" : "no") << "\n";
    }
  } else if (r.equation) {
    os << "threshold: not required (Riemann-Liouville)\n";
  }
  if (r.plan) {
    os << "roots (search_hi=" << format_real(r.search_hi) << "):\n";
    for (std::size_t k = 0; k < r.roots.size(); ++k) {
      const RootOutcome& o = r.roots[k];
      os << "  root " << k << ": gamma=" << format_real(o.root.gamma) << " status=" << to_string(o.root.status);
      if (o.root.collision_step) os << " collision_step=" << *o.root.collision_step;
      os << " G=" << format_real(o.g_value) << "\n";
      if (o.solution) {
        const Truncation& t = o.solution->truncation;
        os << "    series: N=" << t.terms_used << " tail_estimate=" << format_real(t.tail_estimate)
           << " converged=" << (t.converged ? "yes" : "no") << (t.diverged ? " diverged=yes" : "");
        if (!o.residual.empty()) {
          double worst = 0.0;
          for (double v : o.residual) worst = std::max(worst, std::fabs(v));
          os << " max|residual|=" << format_real(worst)
             << " residual_bound=" << format_real(residual_bound_constant(*r.equation, *o.solution) * t.tail_estimate);
        }
        os << "\n";
      }
      if (o.oracle_discrepancy) os << "    oracle: max relative discrepancy=" << format_real(*o.oracle_discrepancy) << "\n";
    }
  }
  os << "warnings:" << (r.warnings.empty() ? " none" : "") << "\n";
  for (const Warning& w : r.warnings) os << "  warning[" << w.code << "]: " << w.message << "\n";
  if (!r.diagnostic.empty()) os << "error: " << r.diagnostic << (r.diagnostic.back() == '\n' ? "" : "\n");
  os << "exit status: " << r.exit_code << "\n";
  return os.str();
}

inline void write_outputs(const SolveResult& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto open = [&dir](const std::string& name) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw error("cannot write '" + (dir / name).string() + "'");
    return f;
  };

  if (r.plan) {
    std::ofstream roots = open("roots.csv");
    roots << "gamma,status,collision_step,g_value\n";
    for (const RootOutcome& o : r.roots) {
      roots << format_real(o.root.gamma) << "," << to_string(o.root.status) << ","
            << (o.root.collision_step ? std::to_string(*o.root.collision_step) : "") << "," << format_real(o.g_value) << "\n";
    }
  }
  for (std::size_t k = 0; k < r.roots.size(); ++k) {
    const RootOutcome& o = r.roots[k];
    if (!o.solution) continue;
    const SeriesSolution& sol = *o.solution;
    std::ofstream coeffs = open("coefficients_" + std::to_string(k) + ".csv");
    coeffs << "n,c_n,exponent\n";
    for (std::size_t n = 0; n < sol.coefficients.size(); ++n) {
      coeffs << n << "," << format_real(sol.coefficients[n]) << "," << format_real(sol.exponent(n)) << "\n";
    }
    std::ofstream solution = open("solution_" + std::to_string(k) + ".csv");
    solution << "x,u\n";
    for (std::size_t i = 0; i < o.u.size(); ++i) solution << format_real(r.xs[i]) << "," << format_real(o.u[i]) << "\n";
    if (!o.residual.empty()) {
      std::ofstream res = open("residual_" + std::to_string(k) + ".csv");
      res << "x,residual\n";
      for (std::size_t i = 0; i < o.residual.size(); ++i) res << format_real(r.xs[i]) << "," << format_real(o.residual[i]) << "\n";
    }
  }
  std::ofstream report = open("report.txt");
  report << render_report(r);
}

/// Loads the spec, runs the pipeline, writes every output file and returns
/// the process exit status. Diagnostics for nonzero exits go to `err`.
inline int solve_command(const std::filesystem::path& spec_path, const std::filesystem::path& output_dir, const Flags& flags,
                         std::ostream& err) {
  EquationSpec spec;
  try {
    spec = load_spec(spec_path);
  } catch (const error& e) {
    err << "qbessel: " << e.what() << "\n";
    return exit_validation_failure;
  }
  const SolveResult result = run_pipeline(spec, flags);
  try {
    write_outputs(result, output_dir);
  } catch (const error& e) {
    err << "qbessel: " << e.what() << "\n";
    return exit_numerical_failure;
  }
  if (result.exit_code != exit_ok) err << "qbessel: " << result.diagnostic << (result.diagnostic.ends_with('\n') ? "" : "\n");
  return result.exit_code;
}

}  // namespace qbessel::cli
