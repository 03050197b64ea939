#pragma once

// Hirzebruch-Jung continued fractions and Dedekind sums of cyclic quotient
// singularities 1/q(1,a).

#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "chernslope/errors.hpp"
#include "chernslope/exact.hpp"

namespace chernslope {

/// q/a = [e_1, ..., e_s] as a negative-regular continued fraction.
struct hj_expansion {
  std::int64_t q = 0;
  std::int64_t a = 0;
  std::vector<std::int64_t> digits;

  std::int64_t length() const { return static_cast<std::int64_t>(digits.size()); }
};

struct dedekind_data {
  std::int64_t q = 0;
  std::int64_t a = 0;
  exact_rational s;  // Dedekind sum s(a,q)
  std::int64_t l = 0;  // length of the HJ expansion of q/a
  exact_rational c;  // 12 s + l

  bool operator==(const dedekind_data&) const = default;
};

namespace detail {

inline void require_coprime_pair(std::int64_t q, std::int64_t a) {
  require(q > 1, "q must exceed 1, got " + std::to_string(q));
  require(a > 0 && a < q, "a must lie in (0, q), got a=" + std::to_string(a) + " q=" + std::to_string(q));
  require(std::gcd(a, q) == 1, "gcd(a, q) must be 1, got a=" + std::to_string(a) + " q=" + std::to_string(q));
}

}  // namespace detail

inline hj_expansion hj_expand(std::int64_t q, std::int64_t a) {
  detail::require_coprime_pair(q, a);
  hj_expansion out{q, a, {}};
  std::int64_t num = q, den = a;
  while (den != 0) {
    std::int64_t digit = (num + den - 1) / den;
    out.digits.push_back(digit);
    std::int64_t next = digit * den - num;
    num = den;
    den = next;
  }
  return out;
}

/// Exact value of e_1 - 1/(e_2 - 1/(... - 1/e_s)).
inline exact_rational hj_evaluate(std::span<const std::int64_t> digits) {
  if (digits.empty()) throw domain_error("empty continued fraction");
  exact_rational value = digits.back();
  for (auto it = digits.rbegin() + 1; it != digits.rend(); ++it) {
    if (value == 0) throw degenerate_error("continued fraction hits a zero tail");
    value = exact_rational(*it) - 1 / value;
  }
  return value;
}

inline std::int64_t hj_length(std::int64_t q, std::int64_t a) {
  detail::require_coprime_pair(q, a);
  std::int64_t num = q, den = a, n = 0;
  while (den != 0) {
    std::int64_t digit = (num + den - 1) / den;
    std::int64_t next = digit * den - num;
    num = den;
    den = next;
    ++n;
  }
  return n;
}

/// Sawtooth ((x)) = x - floor(x) - 1/2, and 0 at integers.
inline exact_rational sawtooth(const exact_rational& x) {
  if (is_integer(x)) return 0;
  return x - exact_rational(floor_of(x)) - exact_rational(1, 2);
}

/// s(a,q) via the reciprocity law
///   s(a,q) + s(q,a) = -1/4 + (a/q + q/a + 1/(aq))/12,
/// unrolled along the Euclidean algorithm.
inline exact_rational dedekind_sum(std::int64_t q, std::int64_t a) {
  detail::require_coprime_pair(q, a);
  exact_rational total = 0;
  int sign = 1;
  std::int64_t num = a, den = q;
  while (num != 0) {
    // s(num, den) = R(num, den) - s(den mod num, num)
    exact_int n = num, d = den;
    exact_rational term(n * n + d * d + 1 - 3 * n * d, 12 * n * d);
    if (sign > 0)
      total += term;
    else
      total -= term;
    sign = -sign;
    std::int64_t next = den % num;
    den = num;
    num = next;
  }
  return total;
}

inline exact_rational c_value(std::int64_t q, std::int64_t a) { return 12 * dedekind_sum(q, a) + hj_length(q, a); }

inline dedekind_data dedekind(std::int64_t q, std::int64_t a) {
  dedekind_data out;
  out.q = q;
  out.a = a;
  out.s = dedekind_sum(q, a);
  out.l = hj_length(q, a);
  out.c = 12 * out.s + out.l;
  return out;
}

}  // namespace chernslope
