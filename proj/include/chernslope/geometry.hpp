#pragma once

// Combinatorial model of the section/fiber arrangements on a ruled surface,
// their minimal simple-normal-crossings resolution, and log Chern numbers.
//
// Conventions: E := e p^r.  At each of the delta tangency points two sections
// S_a, S_b meet with contact order p^r; p^r successive blowups produce the
// chain G_1 - G_2 - ... - G_{p^r}, where G_1 is the first exceptional curve
// (it meets the fiber F through the point) and G_{p^r} is the last (-1)-curve
// (it meets S_a and S_b).  All other G_k are (-2)-curves.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chernslope/errors.hpp"
#include "chernslope/exact.hpp"
#include "chernslope/primes.hpp"

namespace chernslope {

enum class family { A0, A, APRIME };

inline std::string to_string(family f) {
  switch (f) {
    case family::A0: return "A0";
    case family::A: return "A";
    case family::APRIME: return "APRIME";
  }
  return "?";
}

inline family parse_family(const std::string& name) {
  if (name == "A0") return family::A0;
  if (name == "A") return family::A;
  if (name == "APRIME" || name == "A'" || name == "Aprime") return family::APRIME;
  throw domain_error("unknown family '" + name + "' (expected A0, A or APRIME)");
}

struct arrangement_params {
  family fam = family::A0;
  std::int64_t p = 2;  // characteristic
  std::int64_t r = 1;  // Frobenius iterations
  std::int64_t e = 1;  // degree of the twisting sheaf
  std::int64_t d = 3;  // tangent sections (d = 2l for APRIME)
  std::int64_t g = 0;  // genus of the base curve
  std::int64_t u = 0;  // extra sections H_i
  std::int64_t w = 0;  // extra general fibers R_i

  static arrangement_params a0(std::int64_t p, std::int64_t r, std::int64_t e, std::int64_t d, std::int64_t g) {
    return {family::A0, p, r, e, d, g, 0, 0};
  }
  static arrangement_params a(std::int64_t p, std::int64_t r, std::int64_t e, std::int64_t d, std::int64_t g,
                              std::int64_t u, std::int64_t w) {
    return {family::A, p, r, e, d, g, u, w};
  }
  static arrangement_params aprime(std::int64_t p, std::int64_t r, std::int64_t e, std::int64_t l) {
    return {family::APRIME, p, r, e, 2 * l, 0, 0, 0};
  }

  exact_int frobenius_degree() const { return ipow(p, r); }
  exact_int section_degree() const { return e * frobenius_degree(); }
  exact_int delta() const { return exact_int(e) * d * (d - 1) / 2; }
  std::int64_t half_d() const { return d / 2; }
  bool has_negative_section() const { return fam != family::APRIME; }

  /// Extra log Chern contribution of the H_i and R_i (zero unless family A).
  exact_int upsilon() const {
    if (fam != family::A) return 0;
    const exact_int E = section_degree();
    return exact_int(u) * (u - 1) * E / 2 + exact_int(u) * d * E + u * delta() + 2 * exact_int(g - 1) * u +
           exact_int(w) * (u + d - 1);
  }

  bool operator==(const arrangement_params&) const = default;
};

inline std::string describe(const arrangement_params& params) {
  return to_string(params.fam) + "(p=" + std::to_string(params.p) + " r=" + std::to_string(params.r) +
         " e=" + std::to_string(params.e) + " d=" + std::to_string(params.d) + " g=" + std::to_string(params.g) +
         " u=" + std::to_string(params.u) + " w=" + std::to_string(params.w) + ")";
}

inline void validate(const arrangement_params& params) {
  using detail::require;
  require(is_prime(params.p), "p must be prime, got " + std::to_string(params.p));
  require(params.r >= 1, "r must be positive");
  require(params.e >= 1, "e must be positive");
  require(params.d >= 3, "d must be at least 3");
  require(params.g >= 0, "g must be non-negative");
  require(params.u >= 0 && params.w >= 0, "u and w must be non-negative");
  require(params.r <= 62, "r is unreasonably large");
  switch (params.fam) {
    case family::A0:
      require(params.u == 0 && params.w == 0, "family A0 carries no extra sections or fibers");
      break;
    case family::A:
      break;
    case family::APRIME:
      require(params.d % 2 == 0 && params.d >= 4, "family APRIME needs d = 2l with l >= 2");
      require(params.g == 0, "family APRIME lives on a Hirzebruch surface (g = 0)");
      require(params.u == 0 && params.w == 0, "family APRIME carries no extra sections or fibers");
      break;
  }
}

enum class component_kind { section, negative_section, fiber, general_fiber, exceptional };

inline std::string to_string(component_kind kind) {
  switch (kind) {
    case component_kind::section: return "section";
    case component_kind::negative_section: return "negative_section";
    case component_kind::fiber: return "fiber";
    case component_kind::general_fiber: return "general_fiber";
    case component_kind::exceptional: return "exceptional";
  }
  return "?";
}

struct component {
  std::int64_t id = 0;
  component_kind kind = component_kind::section;
  std::string label;
  std::int64_t self_intersection = 0;
  std::int64_t genus = 0;

  bool operator==(const component&) const = default;
};

/// `count` transverse intersection points between two distinct components.
struct node {
  std::int64_t first = 0;
  std::int64_t second = 0;
  std::int64_t count = 1;

  bool operator==(const node&) const = default;
};

struct tangency {
  std::int64_t section_a = 0;  // component ids
  std::int64_t section_b = 0;
  std::int64_t fiber = 0;
  std::vector<std::int64_t> chain;  // G_1 .. G_{p^r}

  bool operator==(const tangency&) const = default;
};

struct resolved_configuration {
  arrangement_params params;
  std::vector<component> components;
  std::vector<node> nodes;
  std::int64_t c1sq_Y = 0;
  std::int64_t c2_Y = 0;

  std::vector<std::int64_t> sections;  // S_1 .. S_d
  std::optional<std::int64_t> negative_section;  // S_{d+1}
  std::vector<std::int64_t> extra_sections;  // H_i
  std::vector<std::int64_t> fibers;  // F_j
  std::vector<std::int64_t> general_fibers;  // R_i
  std::vector<tangency> tangencies;

  std::int64_t t2() const {
    std::int64_t total = 0;
    for (const node& n : nodes) total += n.count;
    return total;
  }

  bool operator==(const resolved_configuration&) const = default;
};

/// Number of components build_resolution would create.
inline exact_int resolution_size(const arrangement_params& params) {
  const exact_int delta = params.delta();
  return params.d + (params.has_negative_section() ? 1 : 0) + params.u + delta + params.w +
         delta * params.frobenius_degree();
}

inline resolved_configuration build_resolution(const arrangement_params& params,
                                               std::int64_t max_components = 4'000'000) {
  validate(params);
  if (resolution_size(params) > max_components)
    throw cap_exceeded("resolution would have " + resolution_size(params).str() + " components (cap " +
                       std::to_string(max_components) + ")");

  const std::int64_t P = to_int64(params.frobenius_degree());
  const std::int64_t E = to_int64(params.section_degree());
  const std::int64_t delta = to_int64(params.delta());
  const std::int64_t d = params.d;
  const std::int64_t g = params.g;

  resolved_configuration config;
  config.params = params;
  auto add = [&](component_kind kind, std::string label, std::int64_t self, std::int64_t genus) {
    const auto id = static_cast<std::int64_t>(config.components.size());
    config.components.push_back({id, kind, std::move(label), self, genus});
    return id;
  };
  auto join = [&](std::int64_t a, std::int64_t b, std::int64_t count) {
    if (count > 0) config.nodes.push_back({a, b, count});
  };

  for (std::int64_t i = 1; i <= d; ++i)
    config.sections.push_back(add(component_kind::section, "S" + std::to_string(i), E * (2 - d), g));
  if (params.has_negative_section())
    config.negative_section = add(component_kind::negative_section, "S" + std::to_string(d + 1), -E, g);
  for (std::int64_t i = 1; i <= params.u; ++i)
    config.extra_sections.push_back(add(component_kind::section, "H" + std::to_string(i), E, g));
  for (std::int64_t j = 1; j <= delta; ++j)
    config.fibers.push_back(add(component_kind::fiber, "F" + std::to_string(j), -1, 0));
  for (std::int64_t i = 1; i <= params.w; ++i)
    config.general_fibers.push_back(add(component_kind::general_fiber, "R" + std::to_string(i), 0, 0));

  // Tangency points: e points for each pair of the d sections.
  std::int64_t point = 0;
  for (std::int64_t a = 0; a < d; ++a) {
    for (std::int64_t b = a + 1; b < d; ++b) {
      for (std::int64_t copy = 0; copy < params.e; ++copy, ++point) {
        tangency t;
        t.section_a = config.sections[static_cast<std::size_t>(a)];
        t.section_b = config.sections[static_cast<std::size_t>(b)];
        t.fiber = config.fibers[static_cast<std::size_t>(point)];
        const std::string stem = "G" + std::to_string(point + 1) + "_";
        for (std::int64_t k = 1; k <= P; ++k)
          t.chain.push_back(add(component_kind::exceptional, stem + std::to_string(k), k < P ? -2 : -1, 0));
        config.tangencies.push_back(std::move(t));
      }
    }
  }

  for (const tangency& t : config.tangencies) {
    join(t.section_a, t.chain.back(), 1);
    join(t.section_b, t.chain.back(), 1);
    join(t.fiber, t.chain.front(), 1);
    for (std::size_t k = 0; k + 1 < t.chain.size(); ++k) join(t.chain[k], t.chain[k + 1], 1);
    for (std::int64_t s : config.sections)
      if (s != t.section_a && s != t.section_b) join(t.fiber, s, 1);
    if (config.negative_section) join(t.fiber, *config.negative_section, 1);
    for (std::int64_t h : config.extra_sections) join(t.fiber, h, 1);
  }
  for (std::size_t i = 0; i < config.extra_sections.size(); ++i) {
    const std::int64_t h = config.extra_sections[i];
    for (std::int64_t s : config.sections) join(h, s, E);
    for (std::size_t j = i + 1; j < config.extra_sections.size(); ++j) join(h, config.extra_sections[j], E);
  }
  for (std::int64_t rr : config.general_fibers) {
    for (std::int64_t s : config.sections) join(rr, s, 1);
    if (config.negative_section) join(rr, *config.negative_section, 1);
    for (std::int64_t h : config.extra_sections) join(rr, h, 1);
  }

  const std::int64_t blowups = delta * P;
  config.c1sq_Y = 8 * (1 - g) - blowups;
  config.c2_Y = 4 * (1 - g) + blowups;
  return config;
}

struct log_chern_numbers {
  exact_int c1sq;
  exact_int c2;

  bool operator==(const log_chern_numbers&) const = default;
};

/// Log Chern numbers of (Y, D) from self-intersections, genera and the node count.
inline log_chern_numbers log_chern_pair(const resolved_configuration& config) {
  exact_int self_sum = 0, genus_defect = 0;
  for (const component& c : config.components) {
    self_sum += c.self_intersection;
    genus_defect += c.genus - 1;
  }
  exact_int t2 = 0;
  for (const node& n : config.nodes) {
    if (n.first == n.second) throw domain_error("a component cannot meet itself in a normal crossings divisor");
    t2 += n.count;
  }
  return {config.c1sq_Y - self_sum + 2 * t2 + 4 * genus_defect, config.c2_Y + t2 + 2 * genus_defect};
}

struct closed_log_chern {
  exact_int c1sq;
  exact_int c2;
  /// Limiting Chern slope of the covers: c1sq / (c2 + a_chain_nodes).
  exact_rational slope;
  /// A_{q-1} nodes counted into c2 in the limit (APRIME only).
  exact_int a_chain_nodes = 0;
};

inline closed_log_chern log_chern_closed(const arrangement_params& params) {
  validate(params);
  const exact_int P = params.frobenius_degree();
  const exact_int E = params.section_degree();
  const exact_int delta = params.delta();
  const exact_int d = params.d;
  const exact_int g = params.g;

  closed_log_chern out;
  const exact_int c1_a0 = (d - 1) * (2 * delta + 4 * (g - 1) - E) + P * delta;
  const exact_int c2_a0 = (d - 1) * (2 * (g - 1) + delta);
  switch (params.fam) {
    case family::A0:
      out.c1sq = c1_a0;
      out.c2 = c2_a0;
      break;
    case family::A:
      out.c1sq = c1_a0 - E * params.u + 2 * params.upsilon();
      out.c2 = c2_a0 + params.upsilon();
      break;
    case family::APRIME:
      // A0 on the Hirzebruch surface with S_{d+1} removed.
      out.c1sq = c1_a0 - E - 2 * delta + 4;
      out.c2 = (d - 2) * (delta - 2);
      out.a_chain_nodes = exact_int(params.e) * params.half_d() * P;
      break;
  }
  const exact_int denominator = out.c2 + out.a_chain_nodes;
  if (denominator == 0) throw degenerate_error("log Chern number c2 vanishes; slope undefined");
  out.slope = exact_rational(out.c1sq, denominator);
  return out;
}

/// 2 + p^r e(d-2) / (e d(d-1) + 4(g-1)), the A0 slope.
inline exact_rational a0_slope_formula(const arrangement_params& params) {
  const exact_int denominator = exact_int(params.e) * params.d * (params.d - 1) + 4 * exact_int(params.g - 1);
  if (denominator == 0) throw degenerate_error("A0 slope denominator vanishes");
  return 2 + exact_rational(params.frobenius_degree() * params.e * (params.d - 2), denominator);
}

}  // namespace chernslope
