#pragma once

// Exact rational numbers over 64-bit integers with overflow detection.
//
// Shifting indices, beta and the series step are all carried as Rational so
// that the lattice condition (every power of x lands on gamma + s*n) can be
// decided exactly.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>

#include "qbessel/errors.hpp"

namespace qbessel {

namespace detail {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw overflow_error("rational: integer overflow in addition");
  return out;
}

inline std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_sub_overflow(a, b, &out)) throw overflow_error("rational: integer overflow in subtraction");
  return out;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw overflow_error("rational: integer overflow in multiplication");
  return out;
}

inline std::int64_t checked_abs(std::int64_t a) {
  if (a == INT64_MIN) throw overflow_error("rational: integer overflow in abs");
  return a < 0 ? -a : a;
}

inline std::int64_t checked_lcm(std::int64_t a, std::int64_t b) {
  if (a == 0 || b == 0) return 0;
  const std::int64_t g = std::gcd(a, b);
  return checked_abs(checked_mul(a / g, b));
}

}  // namespace detail

class Rational {
 public:
  constexpr Rational() = default;

  // NOLINTNEXTLINE(google-explicit-constructor)
  Rational(std::int64_t value) : num_(value), den_(1) {}

  Rational(std::int64_t numerator, std::int64_t denominator) {
    if (denominator == 0) throw precondition_error("rational: zero denominator");
    if (denominator < 0) {
      numerator = detail::checked_sub(0, numerator);
      denominator = detail::checked_sub(0, denominator);
    }
    const std::int64_t g = std::gcd(numerator, denominator);
    num_ = numerator / g;
    den_ = denominator / g;
  }

  std::int64_t numerator() const noexcept { return num_; }
  std::int64_t denominator() const noexcept { return den_; }

  bool is_zero() const noexcept { return num_ == 0; }
  bool is_integer() const noexcept { return den_ == 1; }
  int sign() const noexcept { return (num_ > 0) - (num_ < 0); }

  double to_double() const noexcept { return static_cast<double>(static_cast<long double>(num_) / den_); }
  long double to_long_double() const noexcept { return static_cast<long double>(num_) / den_; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    const std::int64_t l = detail::checked_lcm(a.den_, b.den_);
    return {detail::checked_add(detail::checked_mul(a.num_, l / a.den_), detail::checked_mul(b.num_, l / b.den_)), l};
  }

  friend Rational operator-(const Rational& a) { return {detail::checked_sub(0, a.num_), a.den_}; }

  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

  friend Rational operator*(const Rational& a, const Rational& b) {
    // cross-reduce first to keep intermediates small
    const std::int64_t g1 = std::gcd(a.num_, b.den_);
    const std::int64_t g2 = std::gcd(b.num_, a.den_);
    return {detail::checked_mul(a.num_ / g1, b.num_ / g2), detail::checked_mul(a.den_ / g2, b.den_ / g1)};
  }

  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw precondition_error("rational: division by zero");
    return a * Rational(b.den_, b.num_);
  }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }

  friend bool operator==(const Rational& a, const Rational& b) noexcept = default;

  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    __extension__ using wide = __int128;
    const wide lhs = static_cast<wide>(a.num_) * b.den_;
    const wide rhs = static_cast<wide>(b.num_) * a.den_;
    return lhs <=> rhs;
  }

  /// Decimal expansion when the denominator has only factors 2 and 5.
  std::optional<std::string> to_decimal_string() const;

  std::string to_string() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// Parses `[+-]digits[.digits]` exactly, e.g. "0.8" -> 4/5.
inline Rational parse_decimal(std::string_view text) {
  const std::string shown(text);
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  std::int64_t num = 0;
  std::int64_t den = 1;
  std::size_t int_digits = 0;
  for (; pos < text.size() && text[pos] >= '0' && text[pos] <= '9'; ++pos, ++int_digits) {
    num = detail::checked_add(detail::checked_mul(num, 10), text[pos] - '0');
  }
  if (int_digits == 0) throw parse_error("malformed decimal '" + shown + "'");
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    std::size_t frac_digits = 0;
    for (; pos < text.size() && text[pos] >= '0' && text[pos] <= '9'; ++pos, ++frac_digits) {
      num = detail::checked_add(detail::checked_mul(num, 10), text[pos] - '0');
      den = detail::checked_mul(den, 10);
    }
    if (frac_digits == 0) throw parse_error("malformed decimal '" + shown + "'");
  }
  if (pos != text.size()) throw parse_error("malformed decimal '" + shown + "'");
  return {negative ? -num : num, den};
}

/// Accepts either a finite decimal or an explicit "numerator/denominator" pair.
inline Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text);
  const Rational num = parse_decimal(text.substr(0, slash));
  const Rational den = parse_decimal(text.substr(slash + 1));
  if (!num.is_integer() || !den.is_integer() || den.is_zero() || text.substr(slash + 1).find('-') != std::string_view::npos) {
    throw parse_error("malformed fraction '" + std::string(text) + "'");
  }
  return {num.numerator(), den.numerator()};
}

inline std::optional<std::string> Rational::to_decimal_string() const {
  std::int64_t twos = 0;
  std::int64_t fives = 0;
  std::int64_t d = den_;
  while (d % 2 == 0) d /= 2, ++twos;
  while (d % 5 == 0) d /= 5, ++fives;
  if (d != 1) return std::nullopt;

  const std::int64_t digits = std::max(twos, fives);
  std::int64_t scale = 1;  // 10^digits / den_
  for (std::int64_t i = 0; i < digits - twos; ++i) scale = detail::checked_mul(scale, 2);
  for (std::int64_t i = 0; i < digits - fives; ++i) scale = detail::checked_mul(scale, 5);
  const std::int64_t scaled = detail::checked_abs(detail::checked_mul(num_, scale));

  std::string body = std::to_string(scaled);
  if (digits > 0) {
    if (static_cast<std::int64_t>(body.size()) <= digits) body.insert(0, static_cast<std::size_t>(digits) + 1 - body.size(), '0');
    body.insert(body.size() - static_cast<std::size_t>(digits), ".");
  }
  return (num_ < 0 ? "-" : "") + body;
}

/// Least common multiple of the denominators.
inline std::int64_t lcd(std::span<const Rational> values) {
  if (values.empty()) throw precondition_error("lcd: empty list");
  std::int64_t out = 1;
  for (const Rational& v : values) out = detail::checked_lcm(out, v.denominator());
  return out;
}

/// Greatest common divisor of positive integers.
inline std::int64_t gcf(std::span<const std::int64_t> values) {
  if (values.empty()) throw precondition_error("gcf: empty list");
  std::int64_t out = 0;
  for (std::int64_t v : values) {
    if (v <= 0) throw precondition_error("gcf: values must be positive");
    out = std::gcd(out, v);
  }
  return out;
}

}  // namespace qbessel
