#pragma once

// Characteristic function
//
//   G(gamma) = sum over pure-Bessel i of d_i Gamma(1+gamma)/Gamma(1+gamma-alpha_i) - nu^2
//
// whose real roots are the admissible leading exponents of the series, and the
// screening rules that decide which roots generate a solution.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qbessel/equation.hpp"
#include "qbessel/gamma.hpp"
#include "qbessel/step_plan.hpp"

namespace qbessel {

/// Two roots closer than this after n steps count as a collision.
inline constexpr double collision_tolerance = 1e-6;

enum class RootStatus { valid, below_caputo_floor, collision_invalid, denominator_pole };

enum class RootOrigin {
  scanned,         // sign change on the grid, refined by bisection
  analytic,        // gamma = alpha_1 - k for a single pure-Bessel term with nu = 0
  caputo_integer,  // nonnegative integer annihilated by every Caputo pure-Bessel term
};

inline std::string_view to_string(RootStatus status) {
  switch (status) {
    case RootStatus::valid: return "valid";
    case RootStatus::below_caputo_floor: return "below_caputo_floor";
    case RootStatus::collision_invalid: return "collision_invalid";
    case RootStatus::denominator_pole: return "denominator_pole";
  }
  return "unknown";
}

struct CharacteristicRoot {
  double gamma = 0.0;
  RootStatus status = RootStatus::valid;
  std::optional<std::int64_t> collision_step;  // set iff status == collision_invalid
  RootOrigin origin = RootOrigin::scanned;
};

inline double characteristic_value(const QuasiBesselEquation& eq, double gamma) {
  long double sum = 0.0L;
  for (const Term& t : eq.terms()) {
    if (t.pure_bessel()) sum += static_cast<long double>(t.d) * gamma_ratio(gamma, 0.0, t.alpha);
  }
  return static_cast<double>(sum - eq.nu_squared());
}

/// max(n_max, 4) + (nu^2)^(1/alpha_1) + 10.
inline double default_search_hi(const QuasiBesselEquation& eq) {
  const double base = std::max(eq.n_max(), 4) + 10.0;
  const double alpha1 = eq.leading().alpha;
  if (alpha1 <= 0.0 || eq.nu_squared() == 0.0) return base;
  return base + std::pow(eq.nu_squared(), 1.0 / alpha1);
}

struct RootSearchOptions {
  std::optional<double> search_hi;  // default_search_hi() with doubling when unset
  std::size_t grid_points = 10000;
  int max_doublings = 3;
  bool include_caputo_integer_roots = false;
};

struct RootSearch {
  std::vector<CharacteristicRoot> roots;  // ascending gamma
  double search_hi = 0.0;
  std::vector<std::string> diagnostics;
};

/// Nonnegative integers j with D_C^(alpha_i) x^j = 0 for every pure-Bessel
/// term. Only produced when nu = 0.
inline std::vector<CharacteristicRoot> caputo_integer_roots(const QuasiBesselEquation& eq) {
  std::vector<CharacteristicRoot> out;
  if (eq.kind() != DerivativeKind::caputo || eq.nu_squared() != 0.0 || eq.pure_bessel_count() == 0) return out;
  for (int j = 0;; ++j) {
    const bool annihilated = std::all_of(eq.terms().begin(), eq.terms().end(), [j](const Term& t) {
      return !t.pure_bessel() || j < order_ceiling(t.alpha);
    });
    if (!annihilated) break;
    out.push_back({static_cast<double>(j), RootStatus::valid, std::nullopt, RootOrigin::caputo_integer});
  }
  return out;
}

namespace detail {

template <class F>
double bisect_root(const F& f, double lo, double hi, double f_lo) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return std::fabs(f(lo)) <= std::fabs(f(hi)) ? lo : hi;
}

inline std::vector<double> scan_sign_changes(const QuasiBesselEquation& eq, double lo, double hi, std::size_t points,
                                             double& top_value, double& below_top_value) {
  const auto g = [&eq](double gamma) { return characteristic_value(eq, gamma); };
  std::vector<double> roots;
  double prev_x = lo;
  std::optional<double> prev_f;
  for (std::size_t k = 1; k <= points; ++k) {
    const double x = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points);
    const double f = g(x);
    if (f == 0.0) {
      roots.push_back(x);
    } else if (prev_f && *prev_f != 0.0 && (f < 0.0) != (*prev_f < 0.0)) {
      roots.push_back(bisect_root(g, prev_x, x, *prev_f));
    }
    if (k == points) {
      top_value = f;
      below_top_value = prev_f.value_or(f);
    }
    prev_x = x;
    prev_f = f;
  }
  return roots;
}

}  // namespace detail

/// All sign-change roots of G on (-1 + pole_tolerance, search_hi].
///
/// A single pure-Bessel term with nu = 0 has the exact root family
/// alpha - k, k = 1, 2, ... (> -1), emitted without scanning. Caputo roots
/// with gamma <= n_max - 1 are kept but flagged below_caputo_floor.
inline RootSearch find_roots(const QuasiBesselEquation& eq, const RootSearchOptions& options = {}) {
  const double floor = -1.0 + pole_tolerance;
  RootSearch result;

  const Term* single = nullptr;
  if (eq.pure_bessel_count() == 1 && eq.nu_squared() == 0.0) {
    for (const Term& t : eq.terms())
      if (t.pure_bessel()) single = &t;
  }

  if (single != nullptr && single->d != 0.0) {
    result.search_hi = single->alpha;
    for (int k = 1; single->alpha - k > floor; ++k) {
      result.roots.push_back({single->alpha - k, RootStatus::valid, std::nullopt, RootOrigin::analytic});
    }
  } else {
    double hi = options.search_hi.value_or(default_search_hi(eq));
    if (!(hi > floor)) throw precondition_error("find_roots: search_hi must exceed -1");
    const int attempts = options.search_hi ? 1 : options.max_doublings + 1;
    for (int attempt = 0; attempt < attempts; ++attempt) {
      double top = 0.0;
      double below_top = 0.0;
      std::vector<double> found = detail::scan_sign_changes(eq, floor, hi, options.grid_points, top, below_top);
      result.search_hi = hi;
      result.roots.clear();
      for (double gamma : found) result.roots.push_back({gamma, RootStatus::valid, std::nullopt, RootOrigin::scanned});
      if (top > 0.0 && top >= below_top) break;
      if (attempt + 1 < attempts) hi *= 2.0;
    }
  }

  if (options.include_caputo_integer_roots) {
    for (const CharacteristicRoot& extra : caputo_integer_roots(eq)) {
      const bool duplicate = std::any_of(result.roots.begin(), result.roots.end(), [&](const CharacteristicRoot& r) {
        return std::fabs(r.gamma - extra.gamma) < pole_tolerance;
      });
      if (!duplicate) result.roots.push_back(extra);
    }
  }

  std::sort(result.roots.begin(), result.roots.end(),
            [](const CharacteristicRoot& a, const CharacteristicRoot& b) { return a.gamma < b.gamma; });

  if (eq.kind() == DerivativeKind::caputo) {
    const double caputo_floor = eq.n_max() - 1.0;
    for (CharacteristicRoot& root : result.roots) {
      if (root.origin != RootOrigin::caputo_integer && root.gamma <= caputo_floor) root.status = RootStatus::below_caputo_floor;
    }
  }
  if (result.roots.empty()) {
    result.diagnostics.push_back("no sign change of the characteristic function on (" + std::to_string(floor) + ", " +
                                 std::to_string(result.search_hi) + "]");
  }
  return result;
}

/// Marks every root gamma_a that reaches a larger root after n >= 1 steps
/// (|gamma_b - (gamma_a + s n)| < collision_tolerance) as collision_invalid.
/// The smallest such n is recorded. The largest root is never invalidated.
inline std::vector<CharacteristicRoot> screen_collisions(std::vector<CharacteristicRoot> roots, const StepPlan& plan) {
  std::sort(roots.begin(), roots.end(), [](const CharacteristicRoot& a, const CharacteristicRoot& b) { return a.gamma < b.gamma; });
  const double s = plan.step();
  for (std::size_t a = 0; a < roots.size(); ++a) {
    if (roots[a].status != RootStatus::valid && roots[a].status != RootStatus::collision_invalid) continue;
    std::optional<std::int64_t> first;
    for (std::size_t b = a + 1; b < roots.size(); ++b) {
      const double gap = roots[b].gamma - roots[a].gamma;
      const auto n = static_cast<std::int64_t>(std::llround(gap / s));
      if (n < 1 || std::fabs(roots[b].gamma - (roots[a].gamma + plan.offset(n))) >= collision_tolerance) continue;
      if (!first || n < *first) first = n;
    }
    if (first) {
      roots[a].status = RootStatus::collision_invalid;
      roots[a].collision_step = first;
    }
  }
  return roots;
}

}  // namespace qbessel
