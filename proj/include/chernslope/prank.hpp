#pragma once

// Genus and p-rank upper bounds for cyclic degree-q covers of the projective
// line branched with multiplicities a_1..a_r.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "chernslope/errors.hpp"
#include "chernslope/primes.hpp"

namespace chernslope {

struct cyclic_cover_data {
  std::int64_t q = 0;
  std::int64_t p = 0;
  std::vector<std::int64_t> mults;
  std::int64_t l_branch = 0;  // sum of mults / q

  static cyclic_cover_data make(std::int64_t q, std::int64_t p, std::vector<std::int64_t> mults) {
    detail::require(q >= 2, "q must be at least 2");
    detail::require(is_prime(p), "p must be prime, got " + std::to_string(p));
    detail::require(std::gcd(p, q) == 1, "q must be coprime to p");
    detail::require(!mults.empty(), "at least one branch point is needed");
    std::int64_t sum = 0, common = q;
    for (std::int64_t a : mults) {
      detail::require(a > 0 && a < q, "multiplicities must lie in (0, q), got " + std::to_string(a));
      sum += a;
      common = std::gcd(common, a);
    }
    detail::require(sum % q == 0, "multiplicities must sum to a multiple of q, got " + std::to_string(sum));
    detail::require(common == 1, "gcd of the multiplicities and q must be 1");
    return {q, p, std::move(mults), sum / q};
  }

  /// {a_1, q-a_1, ..., a_l, q-a_l}.
  static cyclic_cover_data symmetric(std::int64_t q, std::int64_t p, const std::vector<std::int64_t>& halves) {
    std::vector<std::int64_t> mults;
    for (std::int64_t a : halves) {
      mults.push_back(a);
      mults.push_back(q - a);
    }
    return make(q, p, std::move(mults));
  }
};

/// dim H^1(P^1, (L^{(i)})^{-1}) = max(0, i l - sum floor(a_j i / q) - 1).
inline std::int64_t h1_dim(std::int64_t i, const cyclic_cover_data& data) {
  detail::require(i >= 1 && i <= data.q - 1, "i must lie in [1, q-1], got " + std::to_string(i));
  std::int64_t degree = i * data.l_branch;
  for (std::int64_t a : data.mults) degree -= (a * i) / data.q;
  return std::max<std::int64_t>(0, degree - 1);
}

/// Riemann-Hurwitz: 2g - 2 = -2q + sum (q - gcd(a_j, q)).
inline std::int64_t genus(const cyclic_cover_data& data) {
  std::int64_t twice = -2 * data.q + 2;
  for (std::int64_t a : data.mults) twice += data.q - std::gcd(a, data.q);
  if (twice % 2 != 0 || twice < 0) throw degenerate_error("Riemann-Hurwitz gives a non-integral genus");
  return twice / 2;
}

/// Orbits of (Z/q) \ {0} under multiplication by p, each listed from its least element.
inline std::vector<std::vector<std::int64_t>> frobenius_orbits(std::int64_t q, std::int64_t p) {
  detail::require(q >= 2 && std::gcd(p, q) == 1, "p must be a unit mod q");
  std::vector<char> seen(static_cast<std::size_t>(q), 0);
  std::vector<std::vector<std::int64_t>> orbits;
  for (std::int64_t i = 1; i < q; ++i) {
    if (seen[static_cast<std::size_t>(i)]) continue;
    std::vector<std::int64_t> orbit;
    for (std::int64_t j = i; !seen[static_cast<std::size_t>(j)]; j = mod(j * p, q)) {
      seen[static_cast<std::size_t>(j)] = 1;
      orbit.push_back(j);
    }
    orbits.push_back(std::move(orbit));
  }
  return orbits;
}

/// B(a, 0) = sum_i min_k h1_dim(i p^k mod q), computed orbit by orbit.
inline std::int64_t prank_upper_bound(const cyclic_cover_data& data) {
  std::int64_t total = 0;
  for (const auto& orbit : frobenius_orbits(data.q, data.p)) {
    std::int64_t least = h1_dim(orbit.front(), data);
    for (std::int64_t i : orbit) least = std::min(least, h1_dim(i, data));
    total += least * static_cast<std::int64_t>(orbit.size());
  }
  return total;
}

inline bool is_primitive_root(std::int64_t p, std::int64_t q) {
  detail::require(is_prime(q), "q must be prime, got " + std::to_string(q));
  detail::require(mod(p, q) != 0, "p must be coprime to q");
  std::int64_t order = 1;
  for (std::int64_t x = mod(p, q); x != 1; x = mod(x * p, q)) ++order;
  return order == q - 1;
}

}  // namespace chernslope
