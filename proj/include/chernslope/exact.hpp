#pragma once

// Exact integer and rational carriers used by every module.

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

#include "chernslope/errors.hpp"

namespace chernslope {

using exact_int = boost::multiprecision::cpp_int;
using exact_rational = boost::multiprecision::cpp_rational;

inline exact_int numerator_of(const exact_rational& x) { return boost::multiprecision::numerator(x); }
inline exact_int denominator_of(const exact_rational& x) { return boost::multiprecision::denominator(x); }

inline exact_rational ratio(const exact_int& num, const exact_int& den) {
  if (den == 0) throw degenerate_error("zero denominator");
  return exact_rational(num, den);
}

inline exact_rational abs_of(const exact_rational& x) { return x < 0 ? exact_rational(-x) : x; }

inline bool is_integer(const exact_rational& x) { return denominator_of(x) == 1; }

/// Floor division of integers (rounds toward negative infinity).
inline exact_int floor_div(const exact_int& n, const exact_int& d) {
  exact_int q = n / d;
  if ((n % d != 0) && ((n < 0) != (d < 0))) q -= 1;
  return q;
}

inline exact_int floor_of(const exact_rational& x) { return floor_div(numerator_of(x), denominator_of(x)); }

inline exact_int ipow(std::int64_t base, std::int64_t exponent) {
  return boost::multiprecision::pow(exact_int(base), static_cast<unsigned>(exponent));
}

inline std::int64_t isqrt(std::int64_t n) {
  if (n < 0) throw domain_error("isqrt of negative");
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && static_cast<__int128>(r) * r > n) --r;
  while (static_cast<__int128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

inline std::int64_t ceil_sqrt(std::int64_t n) {
  std::int64_t r = isqrt(n);
  return r * r == n ? r : r + 1;
}

/// Exact test of  value <= k * sqrt(q) + b  with k >= 0.
inline bool le_affine_sqrt(const exact_rational& value, const exact_rational& k, const exact_rational& b,
                           std::int64_t q) {
  exact_rational t = value - b;
  if (t <= 0) return true;
  return t * t <= k * k * q;
}

inline double to_double(const exact_rational& x) { return x.convert_to<double>(); }
inline long double to_long_double(const exact_rational& x) { return x.convert_to<long double>(); }

inline std::int64_t to_int64(const exact_int& x) {
  if (x > std::numeric_limits<std::int64_t>::max() || x < std::numeric_limits<std::int64_t>::min())
    throw cap_exceeded("integer does not fit in 64 bits: " + x.str());
  return static_cast<std::int64_t>(x);
}

/// Parses "7", "-3/4", "3.14159", "1e-2", "2.5E+3" into an exact rational.
/// Decimal input is taken literally: "0.1" is 1/10.
inline exact_rational parse_rational(std::string_view text) {
  auto fail = [&] { return domain_error("not a rational literal: '" + std::string(text) + "'"); };
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s.empty()) throw fail();

  if (auto slash = s.find('/'); slash != std::string::npos) {
    exact_rational n = parse_rational(s.substr(0, slash));
    exact_rational d = parse_rational(s.substr(slash + 1));
    if (d == 0) throw fail();
    return n / d;
  }

  std::size_t pos = 0;
  bool negative = false;
  if (s[pos] == '+' || s[pos] == '-') negative = s[pos++] == '-';
  exact_int digits = 0;
  std::int64_t scale = 0;
  bool seen_digit = false, seen_point = false;
  for (; pos < s.size(); ++pos) {
    char ch = s[pos];
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      digits = digits * 10 + (ch - '0');
      seen_digit = true;
      if (seen_point) ++scale;
    } else if (ch == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) throw fail();
  std::int64_t exponent = 0;
  if (pos < s.size()) {
    if (s[pos] != 'e' && s[pos] != 'E') throw fail();
    ++pos;
    try {
      std::size_t used = 0;
      exponent = std::stoll(s.substr(pos), &used);
      if (pos + used != s.size()) throw fail();
    } catch (const std::logic_error&) {
      throw fail();
    }
  }
  exponent -= scale;
  exact_rational value = digits;
  if (exponent > 0) value *= ipow(10, exponent);
  if (exponent < 0) value /= ipow(10, -exponent);
  return negative ? exact_rational(-value) : value;
}

inline std::string to_string(const exact_rational& x) {
  if (is_integer(x)) return numerator_of(x).str();
  return numerator_of(x).str() + "/" + denominator_of(x).str();
}

}  // namespace chernslope
