#pragma once

/** \file
 * \brief Exact rationals and canonical numeric labels.
 *
 * Numeric table entries become labels in reduced "p/q" form ("p" for
 * integers), so "1.50", "3/2" and "1.5e0" all name the same value.
 */

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <optional>
#include <string>
#include <string_view>

#include "ultrasim/error.hpp"

namespace ultrasim {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline std::string to_string(const Rational& q) {
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

namespace detail {

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline BigInt pow10(unsigned e) {
  BigInt r = 1;
  for (unsigned i = 0; i < e; ++i) r *= 10;
  return r;
}

// Parses [sign] digits [. digits] [e|E [sign] digits]; at least one digit
// before or after the point.
inline std::optional<Rational> parse_decimal(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  std::string_view mantissa = s, exponent;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    mantissa = s.substr(0, e);
    exponent = s.substr(e + 1);
    if (exponent.empty()) return std::nullopt;
  }
  std::string_view whole = mantissa, frac;
  if (auto dot = mantissa.find('.'); dot != std::string_view::npos) {
    whole = mantissa.substr(0, dot);
    frac = mantissa.substr(dot + 1);
    if (!frac.empty() && !all_digits(frac)) return std::nullopt;
  }
  if (whole.empty() && frac.empty()) return std::nullopt;
  if (!whole.empty() && !all_digits(whole)) return std::nullopt;

  long exp = 0;
  if (!exponent.empty()) {
    bool exp_negative = false;
    if (exponent.front() == '+' || exponent.front() == '-') {
      exp_negative = exponent.front() == '-';
      exponent.remove_prefix(1);
    }
    if (!all_digits(exponent) || exponent.size() > 4) return std::nullopt;
    exp = std::stol(std::string(exponent));
    if (exp_negative) exp = -exp;
  }
  BigInt digits(std::string(whole.empty() ? "0" : whole) + std::string(frac));
  exp -= static_cast<long>(frac.size());
  Rational value = exp >= 0 ? Rational(digits * pow10(static_cast<unsigned>(exp)))
                            : Rational(digits, pow10(static_cast<unsigned>(-exp)));
  return negative ? Rational(-value) : value;
}

}  // namespace detail

/// Parses an integer, decimal (optionally with exponent) or "p/q" fraction.
/// nullopt for anything else.
inline std::optional<Rational> parse_rational(std::string_view text) {
  const std::string_view s = detail::trim(text);
  if (s.empty()) return std::nullopt;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    std::string_view num = detail::trim(s.substr(0, slash));
    std::string_view den = detail::trim(s.substr(slash + 1));
    bool negative = false;
    if (!num.empty() && (num.front() == '-' || num.front() == '+')) {
      negative = num.front() == '-';
      num.remove_prefix(1);
    }
    if (!detail::all_digits(num) || !detail::all_digits(den)) return std::nullopt;
    BigInt d{std::string(den)};
    if (d == 0) return std::nullopt;
    Rational q(BigInt{std::string(num)}, d);
    return negative ? Rational(-q) : q;
  }
  return detail::parse_decimal(s);
}

/// Canonical label for a table entry: numbers in reduced form, anything
/// else unchanged apart from surrounding whitespace.
inline std::string canonical_label(std::string_view text) {
  if (auto q = parse_rational(text)) return to_string(*q);
  return std::string(detail::trim(text));
}

}  // namespace ultrasim
