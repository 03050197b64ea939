#pragma once

// Farey neighbourhoods and the bad residue set F for a prime q, together with
// an exhaustive check of the Girstmair bounds on F^c.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "chernslope/errors.hpp"
#include "chernslope/exact.hpp"
#include "chernslope/numtheory.hpp"
#include "chernslope/primes.hpp"

namespace chernslope {

struct farey_point {
  std::int64_t c = 0;
  std::int64_t d = 1;

  exact_rational value(std::int64_t q) const { return exact_rational(exact_int(q) * c, d); }
};

/// All q*c/d with 1 <= d <= floor(sqrt q), 0 <= c <= d, gcd(c,d) = 1.
inline std::vector<farey_point> farey_points(std::int64_t q) {
  std::vector<farey_point> points;
  const std::int64_t d_max = isqrt(q);
  for (std::int64_t d = 1; d <= d_max; ++d)
    for (std::int64_t c = 0; c <= d; ++c)
      if (std::gcd(c, d) == 1) points.push_back({c, d});
  return points;
}

/// |x - q c/d| <= C sqrt(q)/d^2, squared out:  (x d - q c)^2 d^2 <= C^2 q.
inline bool in_neighbourhood(std::int64_t x, std::int64_t q, const farey_point& point, const exact_rational& C) {
  exact_int offset = exact_int(x) * point.d - exact_int(q) * point.c;
  exact_int lhs = offset * offset * point.d * point.d;
  return lhs * denominator_of(C) * denominator_of(C) <= numerator_of(C) * numerator_of(C) * q;
}

struct bad_set {
  std::int64_t q = 0;
  exact_rational C = 1;
  std::vector<std::int64_t> members;  // sorted
  std::vector<char> mask;             // mask[a] != 0 iff a in F, size q

  bool contains(std::int64_t a) const { return a > 0 && a < q && mask[static_cast<std::size_t>(a)] != 0; }
  bool is_good(std::int64_t a) const { return a > 0 && a < q && mask[static_cast<std::size_t>(a)] == 0; }

  std::vector<std::int64_t> complement() const {
    std::vector<std::int64_t> good;
    for (std::int64_t a = 1; a < q; ++a)
      if (!mask[static_cast<std::size_t>(a)]) good.push_back(a);
    return good;
  }
};

inline bad_set make_bad_set(std::int64_t q, const exact_rational& C = 1) {
  detail::require(is_prime(q), "bad set needs a prime q, got " + std::to_string(q));
  detail::require(C > 0, "the neighbourhood constant C must be positive");

  bad_set out;
  out.q = q;
  out.C = C;
  out.mask.assign(static_cast<std::size_t>(q), 0);
  const long double radius_scale = to_long_double(C) * std::sqrt(static_cast<long double>(q));
  for (const farey_point& point : farey_points(q)) {
    const long double centre = static_cast<long double>(q) * point.c / point.d;
    const long double radius = radius_scale / (static_cast<long double>(point.d) * point.d);
    // Floating bounds only choose candidates; membership is decided exactly.
    auto lo = static_cast<std::int64_t>(std::floor(centre - radius)) - 1;
    auto hi = static_cast<std::int64_t>(std::ceil(centre + radius)) + 1;
    lo = std::max<std::int64_t>(lo, 1);
    hi = std::min<std::int64_t>(hi, q - 1);
    for (std::int64_t a = lo; a <= hi; ++a)
      if (!out.mask[static_cast<std::size_t>(a)] && in_neighbourhood(a, q, point, C))
        out.mask[static_cast<std::size_t>(a)] = 1;
  }
  for (std::int64_t a = 1; a < q; ++a)
    if (out.mask[static_cast<std::size_t>(a)]) out.members.push_back(a);
  return out;
}

struct girstmair_report {
  std::int64_t q = 0;
  exact_rational C = 1;
  std::int64_t bad_count = 0;
  long double bad_count_bound = 0;  // C sqrt(q) (log q + 2 log 2)
  bool cardinality_ok = false;

  std::int64_t worst_length_residue = 0;
  std::int64_t worst_length = 0;
  bool length_ok = true;  // l(a,q) <= (2 + 1/C) sqrt(q) + 2 on F^c

  std::int64_t worst_sum_residue = 0;
  exact_rational worst_sum = 0;  // max 12|s(a,q)| on F^c
  bool sum_ok = true;            // 12|s(a,q)| <= (2 + 1/C) sqrt(q) + 5 on F^c

  bool all_ok() const { return cardinality_ok && length_ok && sum_ok; }
};

inline girstmair_report verify_girstmair(std::int64_t q, const exact_rational& C = 1) {
  detail::require(q >= 17, "the Girstmair bounds need q >= 17, got " + std::to_string(q));
  const bad_set bad = make_bad_set(q, C);

  girstmair_report report;
  report.q = q;
  report.C = C;
  report.bad_count = static_cast<std::int64_t>(bad.members.size());
  // log is transcendental; this single comparison runs in long double.
  report.bad_count_bound = to_long_double(C) * std::sqrt(static_cast<long double>(q)) *
                           (std::log(static_cast<long double>(q)) + 2 * std::log(2.0L));
  report.cardinality_ok = static_cast<long double>(report.bad_count) <= report.bad_count_bound;

  const exact_rational slope = 2 + 1 / C;
  for (std::int64_t a = 1; a < q; ++a) {
    if (bad.contains(a)) continue;
    const std::int64_t l = hj_length(q, a);
    const exact_rational twelve_s = abs_of(12 * dedekind_sum(q, a));
    if (l > report.worst_length) {
      report.worst_length = l;
      report.worst_length_residue = a;
    }
    if (twelve_s > report.worst_sum || report.worst_sum_residue == 0) {
      report.worst_sum = twelve_s;
      report.worst_sum_residue = a;
    }
    if (!le_affine_sqrt(l, slope, 2, q)) report.length_ok = false;
    if (!le_affine_sqrt(twelve_s, slope, 5, q)) report.sum_ok = false;
  }
  return report;
}

}  // namespace chernslope
