#pragma once

// Parameter solvers: given a target slope x >= 2 and a tolerance, find
// arrangement parameters whose limiting cover slope lies within tolerance.
//
// Family A: the limit is 2 + p^r (delta - e(d-1) - ue) / ((d-1)(2(g-1)+delta) + Upsilon).
//   As r grows this tends to ((d-1)(d-2) - 2u)/(u(u-1) + 2ud)
//     = lambda(u/v) - 1/u - 1/v + 3/(4uv),   v = 2d - 1 + u,
//   so (u, v) is chosen with lambda(u/v) close to alpha = x - 2 first.
// Family APRIME: the limit is 2 + p^r l e (2l-5) / ((2l-2)(el(2l-1)-2) + l e p^r),
//   which tends to p^z / (2x') along l = x' p^y, r = z + y.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chernslope/errors.hpp"
#include "chernslope/exact.hpp"
#include "chernslope/geometry.hpp"
#include "chernslope/primes.hpp"

namespace chernslope {

/// lambda(x) = x/4 + 1/(4x) - 1/2.
inline exact_rational lambda_fn(const exact_rational& x) {
  detail::require(x > 0, "lambda needs a positive argument");
  return x / 4 + 1 / (4 * x) - exact_rational(1, 2);
}

/// The root x >= 1 of lambda(x) = alpha, i.e. 2 alpha + 1 + 2 sqrt(alpha^2 + alpha).
inline long double lambda_root(long double alpha) { return 2 * alpha + 1 + 2 * std::sqrt(alpha * alpha + alpha); }

struct uv_choice {
  std::int64_t u = 0;
  std::int64_t v = 0;
  std::int64_t d = 0;
  exact_rational lambda_gap;  // |lambda(u/v) - alpha|
};

/// u < v with v - u odd and >= 5, |lambda(u/v) - alpha| < eps/5 and
/// 1/u, 1/v, 3/(4uv) < eps/5.  d = (v + 1 - u)/2.
inline uv_choice find_uv(const exact_rational& alpha, const exact_rational& epsilon, std::int64_t max_doublings = 48) {
  detail::require(alpha >= 0, "alpha must be non-negative");
  detail::require(epsilon > 0, "epsilon must be positive");
  const exact_rational fifth = epsilon / 5;
  const long double ratio = 1 / lambda_root(to_long_double(alpha));

  std::int64_t v = 16;
  for (std::int64_t k = 0; k < max_doublings; ++k, v *= 2) {
    const auto centre = static_cast<std::int64_t>(std::llround(ratio * static_cast<long double>(v)));
    std::optional<uv_choice> best;
    for (std::int64_t shift : {0, -1, 1, -2, 2}) {
      const std::int64_t u = std::min(centre + shift, v - 5);
      if (u < 1 || v - u < 5 || (v - u) % 2 == 0) continue;
      const exact_rational gap = abs_of(lambda_fn(exact_rational(u, v)) - alpha);
      if (!(gap < fifth)) continue;
      if (!(exact_rational(1, u) < fifth && exact_rational(1, v) < fifth)) continue;
      if (!(exact_rational(3, 4 * exact_int(u) * v) < fifth)) continue;
      if (!best || gap < best->lambda_gap) best = uv_choice{u, v, (v + 1 - u) / 2, gap};
    }
    if (best) return *best;
  }
  throw cap_exceeded("no (u, v) found below v = " + std::to_string(v));
}

struct density_target {
  exact_rational x = 3;
  exact_rational epsilon = exact_rational(1, 100);
  std::int64_t p = 2;
  std::int64_t g = 0;  // family A only
  std::int64_t e = 1;  // family A only
  std::int64_t w = 1;  // family A only

  exact_rational alpha() const { return x - 2; }
};

struct solver_caps {
  std::int64_t r_max = 62;
  std::int64_t x_max = 1 << 16;  // APRIME auxiliary multiplier
  std::int64_t y_max = 40;
  std::int64_t e_max = 16;
  std::int64_t finer_rungs = 3;  // tolerance ladder starts at eps / 2^finer_rungs
};

struct solved_params {
  bool ok = false;
  arrangement_params params;
  exact_rational limit;  // limiting slope, 2 + fraction
  exact_rational error;  // |limit - x|
  exact_rational internal_alpha;
  exact_rational internal_epsilon;
  /// Named terms whose sum bounds the error (family A) or the auxiliary
  /// choices (APRIME); all exact.
  std::vector<std::pair<std::string, exact_rational>> ledger;
  std::string note;
};

namespace detail {

inline void check_target(const density_target& target) {
  require(target.x >= 2, "target slope must be at least 2, got " + to_string(target.x));
  require(target.epsilon > 0, "epsilon must be positive");
  require(is_prime(target.p), "p must be prime, got " + std::to_string(target.p));
}

/// Slope 2 exactly is never attained; aim for the midpoint of (2, 2 + eps).
inline std::pair<exact_rational, exact_rational> effective_goal(const density_target& target) {
  if (target.x == 2) return {target.epsilon / 2, target.epsilon / 2};
  return {target.alpha(), target.epsilon};
}

}  // namespace detail

/// p^r (delta - e(d-1) - ue) / ((d-1)(2(g-1)+delta) + Upsilon).
inline exact_rational family_a_fraction(const arrangement_params& params) {
  const exact_int P = params.frobenius_degree();
  const exact_int delta = params.delta();
  const exact_int numerator = P * (delta - exact_int(params.e) * (params.d - 1) - exact_int(params.u) * params.e);
  const exact_int denominator = exact_int(params.d - 1) * (2 * exact_int(params.g - 1) + delta) + params.upsilon();
  if (denominator == 0) throw degenerate_error("family A slope denominator vanishes");
  return exact_rational(numerator, denominator);
}

/// p^r l e (2l-5) / ((2l-2)(el(2l-1)-2) + l e p^r).
inline exact_rational family_aprime_fraction(const arrangement_params& params) {
  const exact_int P = params.frobenius_degree();
  const exact_int l = params.half_d(), e = params.e;
  const exact_int denominator = (2 * l - 2) * (e * l * (2 * l - 1) - 2) + l * e * P;
  if (denominator == 0) throw degenerate_error("APRIME slope denominator vanishes");
  return exact_rational(P * l * e * (2 * l - 5), denominator);
}

/// First r that works for the (u, v) chosen at this tolerance.
inline solved_params first_found_family_A(const density_target& target, const solver_caps& caps = {}) {
  detail::check_target(target);
  detail::require(target.g >= 0 && target.e >= 1 && target.w >= 0, "invalid fixed inputs g, e, w");
  const auto [alpha, epsilon] = detail::effective_goal(target);
  const uv_choice uv = find_uv(alpha, epsilon);

  solved_params out;
  out.internal_alpha = alpha;
  out.internal_epsilon = epsilon;
  const exact_rational fifth = epsilon / 5;
  const exact_rational limit_fraction =
      exact_rational(exact_int(uv.d - 1) * (uv.d - 2) - 2 * exact_int(uv.u),
                     exact_int(uv.u) * (uv.u - 1) + 2 * exact_int(uv.u) * uv.d);

  std::optional<exact_rational> best_gap;
  for (std::int64_t r = 1; r <= caps.r_max; ++r) {
    const auto params = arrangement_params::a(target.p, r, target.e, uv.d, target.g, uv.u, target.w);
    if (ipow(target.p, r) > exact_int(std::numeric_limits<std::int64_t>::max()) / 4) break;
    const exact_rational fraction = family_a_fraction(params);
    const exact_rational gap = abs_of(fraction - limit_fraction);
    if (!best_gap || gap < *best_gap) {
      best_gap = gap;
      out.params = params;
      out.limit = 2 + fraction;
    }
    if (gap < fifth && abs_of(fraction - alpha) < epsilon) {
      out.ok = true;
      break;
    }
  }
  out.error = abs_of(out.limit - target.x);
  out.ok = out.ok && out.error < target.epsilon;
  out.ledger = {
      {"lambda_gap", uv.lambda_gap},
      {"inv_u", exact_rational(1, uv.u)},
      {"inv_v", exact_rational(1, uv.v)},
      {"cross_term", exact_rational(3, 4 * exact_int(uv.u) * uv.v)},
      {"r_gap", best_gap.value_or(exact_rational(-1))},
      {"u", exact_rational(uv.u)},
      {"v", exact_rational(uv.v)},
  };
  if (!out.ok) out.note = "cap hit: no r <= " + std::to_string(caps.r_max) + " brings the slope within tolerance";
  return out;
}

/// First (x, z, y, e) in scan order that works at this tolerance.
inline solved_params first_found_family_Aprime(const density_target& target, const solver_caps& caps = {}) {
  detail::check_target(target);
  const auto [alpha, epsilon] = detail::effective_goal(target);
  const exact_rational third = epsilon / 3;

  solved_params out;
  out.internal_alpha = alpha;
  out.internal_epsilon = epsilon;
  std::optional<exact_rational> best_error;
  auto consider = [&](const arrangement_params& params) {
    const exact_rational fraction = family_aprime_fraction(params);
    const exact_rational error = abs_of(fraction - alpha);
    if (!best_error || error < *best_error) {
      best_error = error;
      out.params = params;
      out.limit = 2 + fraction;
    }
    return error < epsilon;
  };

  for (std::int64_t x = 1; x <= caps.x_max && !out.ok; ++x) {
    // p^z / (2x) within eps/3 of alpha, i.e. x beta <= p^z <= x gamma.
    const exact_rational lo = x * (2 * alpha - 2 * third), hi = x * (2 * alpha + 2 * third);
    std::int64_t z = 0;
    exact_int pz = 1;
    while (pz < lo && z < caps.r_max) {
      pz *= target.p;
      ++z;
    }
    if (!(pz >= lo && pz <= hi)) continue;
    for (std::int64_t y = 0; y <= caps.y_max && z + y <= caps.r_max && !out.ok; ++y) {
      const exact_int l = exact_int(x) * ipow(target.p, y);
      if (l < 3 || z + y < 1) continue;
      if (l > 1'000'000'000) break;
      for (std::int64_t e = 1; e <= caps.e_max; ++e) {
        const auto params = arrangement_params::aprime(target.p, z + y, e, to_int64(l));
        if (consider(params)) {
          out.ok = true;
          out.ledger = {{"x", exact_rational(x)}, {"y", exact_rational(y)}, {"z", exact_rational(z)},
                        {"pz_over_2x", exact_rational(pz, 2 * x)}};
          break;
        }
      }
    }
  }
  if (!best_error) {
    out.note = "cap hit: no admissible (x, z) below x = " + std::to_string(caps.x_max);
    out.ok = false;
    return out;
  }
  out.error = abs_of(out.limit - target.x);
  out.ok = out.ok && out.error < target.epsilon;
  if (!out.ok) out.note = "cap hit: best candidate misses the tolerance";
  return out;
}

namespace detail {

/// A candidate found at a coarser tolerance still answers `target` when its
/// error and (family A) each of the five ledger terms meet the finer bound.
inline bool meets(const solved_params& candidate, const density_target& target, family fam) {
  if (!candidate.ok || !(candidate.error < target.epsilon)) return false;
  if (fam != family::A) return true;
  const exact_rational fifth = effective_goal(target).second / 5;
  for (std::size_t i = 0; i < 5 && i < candidate.ledger.size(); ++i)
    if (!(candidate.ledger[i].second >= 0 && candidate.ledger[i].second < fifth)) return false;
  return true;
}

/// Best first-found answer over the tolerances eps 2^k, -finer_rungs <= k,
/// eps 2^k <= max(eps, 1), among those that also meet eps itself.
template <class FirstFound>
solved_params ladder_solve(const density_target& target, family fam, const solver_caps& caps, FirstFound first_found) {
  std::optional<solved_params> best;
  density_target rung = target;
  rung.epsilon = target.epsilon / (std::int64_t{1} << caps.finer_rungs);
  for (; rung.epsilon <= target.epsilon || rung.epsilon <= 1; rung.epsilon *= 2) {
    solved_params candidate = first_found(rung, caps);
    if (!meets(candidate, target, fam)) continue;
    if (!best || candidate.error < best->error) best = std::move(candidate);
  }
  if (!best) return first_found(target, caps);
  return *best;
}

}  // namespace detail

inline solved_params solve_family_A(const density_target& target, const solver_caps& caps = {}) {
  return detail::ladder_solve(target, family::A, caps, first_found_family_A);
}

inline solved_params solve_family_Aprime(const density_target& target, const solver_caps& caps = {}) {
  return detail::ladder_solve(target, family::APRIME, caps, first_found_family_Aprime);
}

inline solved_params solve(const density_target& target, family fam, const solver_caps& caps = {}) {
  switch (fam) {
    case family::A: return solve_family_A(target, caps);
    case family::APRIME: return solve_family_Aprime(target, caps);
    case family::A0: break;
  }
  throw domain_error("density solvers exist for families A and APRIME only");
}

}  // namespace chernslope
