#pragma once

// Chern numbers of the resolved q-th root cover X -> Y branched along
// D = sum nu_i D_i, where D_red is a resolved configuration.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chernslope/errors.hpp"
#include "chernslope/exact.hpp"
#include "chernslope/geometry.hpp"
#include "chernslope/numtheory.hpp"
#include "chernslope/primes.hpp"

namespace chernslope {

/// The unique 0 < a < q with nu_i a + nu_j = 0 (mod q).
inline std::int64_t node_residue(std::int64_t nu_i, std::int64_t nu_j, std::int64_t q) {
  detail::require(q >= 2, "q must be at least 2");
  detail::require(mod(nu_i, q) != 0 && mod(nu_j, q) != 0, "multiplicities must be nonzero mod q");
  return mod(-mod(nu_j, q) * mod_inverse(nu_i, q), q);
}

/// Multiplicities of every resolved component, normalized into [1, q-1].
struct branch_assignment {
  std::int64_t q = 0;
  std::vector<std::int64_t> nus;

  static branch_assignment make(std::int64_t q, std::vector<std::int64_t> raw) {
    detail::require(is_prime(q), "q must be prime, got " + std::to_string(q));
    for (std::size_t i = 0; i < raw.size(); ++i) {
      raw[i] = mod(raw[i], q);
      if (raw[i] == 0)
        throw domain_error("multiplicity of component " + std::to_string(i) + " vanishes mod q");
    }
    return {q, std::move(raw)};
  }

  std::int64_t residue(const node& n) const {
    return node_residue(nus[static_cast<std::size_t>(n.first)], nus[static_cast<std::size_t>(n.second)], q);
  }

  bool operator==(const branch_assignment&) const = default;
};

struct singularity {
  std::int64_t node = 0;  // index into the configuration's node list
  std::int64_t a = 0;     // type 1/q(1,a)
  std::int64_t count = 1;
  std::vector<std::int64_t> hj_digits;
  exact_rational c;
  std::int64_t l = 0;
};

struct cover_invariants {
  std::int64_t q = 0;
  exact_int c1sq_bar;
  exact_int c2_bar;
  exact_rational c1sq_X;
  exact_rational c2_X;
  exact_rational chi;
  exact_rational slope;
  exact_rational defect_sum;  // sum over nodes of c(a_ij, q)
  exact_int length_sum;       // sum over nodes of l(a_ij, q)
  std::optional<exact_int> defect_bound;  // present for q >= 17
  std::vector<singularity> singularities;

  bool noether_integral() const { return is_integer(chi); }
};

/// (6 ceil(sqrt q) + 7) t2.  Rounding sqrt q up only loosens the bound.
inline exact_int defect_bound(std::int64_t q, std::int64_t t2) {
  detail::require(q >= 17, "the defect bound needs q >= 17, got " + std::to_string(q));
  detail::require(t2 >= 0, "node count must be non-negative");
  return exact_int(6 * ceil_sqrt(q) + 7) * t2;
}

inline cover_invariants chern_of_cover(const resolved_configuration& config, const branch_assignment& assign) {
  detail::require(assign.nus.size() == config.components.size(),
                  "assignment has " + std::to_string(assign.nus.size()) + " multiplicities for " +
                      std::to_string(config.components.size()) + " components");
  const std::int64_t q = assign.q;
  const log_chern_numbers bar = log_chern_pair(config);

  cover_invariants out;
  out.q = q;
  out.c1sq_bar = bar.c1sq;
  out.c2_bar = bar.c2;

  std::map<std::int64_t, dedekind_data> cache;
  for (std::size_t i = 0; i < config.nodes.size(); ++i) {
    const node& n = config.nodes[i];
    if (n.first == n.second) throw domain_error("self-intersecting node in configuration");
    const std::int64_t a = assign.residue(n);
    auto it = cache.find(a);
    if (it == cache.end()) it = cache.emplace(a, dedekind(q, a)).first;
    const dedekind_data& data = it->second;
    out.defect_sum += data.c * n.count;
    out.length_sum += exact_int(data.l) * n.count;
    out.singularities.push_back({static_cast<std::int64_t>(i), a, n.count, hj_expand(q, a).digits, data.c, data.l});
  }

  const exact_int c1 = config.c1sq_Y, c2 = config.c2_Y;
  out.c1sq_X = exact_rational(bar.c1sq * q + 2 * (c2 - bar.c2)) +
               exact_rational(c1 - bar.c1sq + 2 * bar.c2 - 2 * c2, q) - out.defect_sum;
  out.c2_X = exact_rational(bar.c2 * q + (c2 - bar.c2) + out.length_sum);
  out.chi = (out.c1sq_X + out.c2_X) / 12;
  if (out.c2_X == 0) throw degenerate_error("c2(X) vanishes; slope undefined");
  out.slope = out.c1sq_X / out.c2_X;
  if (q >= 17) out.defect_bound = defect_bound(q, config.t2());
  return out;
}

}  // namespace chernslope
