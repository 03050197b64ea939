#pragma once

// Intersection numbers K_W . Gamma on the singular cover W -> Y, for the
// curves supporting qK_W.  With Pi(Gamma) := (qK_Y + (q-1)D_red) . Gamma,
//   K_W . Gamma_bar = Pi(Gamma)/q   for components of D_red,
//   K_W . Gamma_bar = Pi(Gamma)     for curves outside D_red (pulled back whole).
// Entries come from closed forms, and again from the resolved configuration
// through adjunction when the configuration is small enough to build.

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "chernslope/errors.hpp"
#include "chernslope/exact.hpp"
#include "chernslope/geometry.hpp"
#include "chernslope/primes.hpp"

namespace chernslope {

struct nef_entry {
  std::string curve_class;
  exact_rational pairing;  // (qK_Y + (q-1)D_red) . Gamma
  exact_rational value;    // K_W . Gamma_bar
  std::vector<exact_rational> config_pairings;  // distinct values over the members of the class
  bool in_branch_locus = true;

  bool agrees() const {
    for (const auto& v : config_pairings)
      if (v != pairing) return false;
    return true;
  }
};

struct nef_report {
  arrangement_params params;
  std::int64_t q = 0;
  std::vector<nef_entry> entries;
  exact_rational t_value;
  bool all_nef = false;
  bool config_checked = false;
  std::vector<std::string> unmatched_classes;  // derived from the configuration but not listed

  bool consistent() const {
    if (!unmatched_classes.empty()) return false;
    for (const auto& entry : entries)
      if (!entry.agrees()) return false;
    return true;
  }
};

namespace detail {

/// Pi(Gamma) for a component of D_red, by adjunction.
inline exact_int branch_pairing(std::int64_t q, std::int64_t self, std::int64_t genus, std::int64_t nodes_on) {
  return exact_int(q) * (2 * genus - 2 - self) + exact_int(q - 1) * (self + nodes_on);
}

/// Distinct configuration-derived pairings per curve class.
inline std::map<std::string, std::vector<exact_int>> config_pairings(const resolved_configuration& config, std::int64_t q) {
  std::vector<std::int64_t> incident(config.components.size(), 0);
  for (const node& n : config.nodes) {
    incident[static_cast<std::size_t>(n.first)] += n.count;
    incident[static_cast<std::size_t>(n.second)] += n.count;
  }
  const std::int64_t P = to_int64(config.params.frobenius_degree());
  std::map<std::string, std::vector<exact_int>> out;
  auto record = [&](const std::string& label, const exact_int& value) {
    auto& values = out[label];
    if (std::find(values.begin(), values.end(), value) == values.end()) values.push_back(value);
  };
  for (const component& c : config.components) {
    std::string label;
    switch (c.kind) {
      case component_kind::section: label = c.label[0] == 'H' ? "H_i" : "S_i"; break;
      case component_kind::negative_section: label = "S_{d+1}"; break;
      case component_kind::fiber: label = "F_j"; break;
      case component_kind::general_fiber: label = "R_i"; break;
      case component_kind::exceptional: {
        const auto k = std::stoll(c.label.substr(c.label.find('_') + 1));
        label = k == P ? "G_{i,p^r}" : (k == 1 ? "G_{i,1}" : "G_{i,j}");
        break;
      }
    }
    record(label, branch_pairing(q, c.self_intersection, c.genus, incident[static_cast<std::size_t>(c.id)]));
  }
  // A general fiber misses the tangency points and meets every section once.
  std::int64_t sections_in_d = 0;
  for (const component& c : config.components)
    if (c.kind == component_kind::section || c.kind == component_kind::negative_section) ++sections_in_d;
  record("F", exact_int(q) * -2 + exact_int(q - 1) * sections_in_d);
  if (config.params.fam == family::APRIME) {
    // S_{d+1} lies outside D_red: disjoint from the S_i, one point on each F_j.
    const exact_int E = config.params.section_degree();
    record("S_{d+1}", exact_int(q) * (E - 2) + exact_int(q - 1) * static_cast<std::int64_t>(config.fibers.size()));
  }
  return out;
}

}  // namespace detail

inline nef_report make_nef_report(const arrangement_params& params, std::int64_t q,
                                  std::int64_t max_components = 200'000) {
  validate(params);
  detail::require(is_prime(q), "q must be prime, got " + std::to_string(q));
  detail::require(q != params.p, "q must differ from the characteristic p");

  const exact_int E = params.section_degree();
  const exact_int P = params.frobenius_degree();
  const exact_int delta = params.delta();
  const exact_int d = params.d, g = params.g, u = params.u, w = params.w;
  const exact_int Q = q;

  nef_report report;
  report.params = params;
  report.q = q;
  auto add = [&](std::string label, const exact_rational& pairing, bool branch) {
    report.entries.push_back({std::move(label), pairing, branch ? pairing / q : pairing, {}, branch});
  };

  if (params.fam == family::APRIME) {
    const exact_int l = params.half_d();
    report.t_value = (Q - 1) * (delta + l * E) - Q * (2 + E);
    add("S_i", -2 * Q + E * (d - 2) + (Q - 1) * delta, true);
    add("S_{d+1}", Q * (E - 2) + delta * (Q - 1), false);
    add("F_j", -Q + (Q - 1) * (d - 2), true);
    add("F", (d - 2) * Q - d, false);
  } else {
    report.t_value = (exact_rational(delta + w) + exact_rational(d * E, 2)) * (Q - 1) - Q * (2 - 2 * g + E);
    add("S_i", exact_rational(-(Q - 1) * (d - 2) * E, 2) + E * (d - 1) + report.t_value + (Q - 1) * u * E, true);
    add("S_{d+1}", Q * (2 * g - 2) + E + (delta + w) * (Q - 1), true);
    add("F_j", -Q + (Q - 1) * (d + u - 1), true);
    add("F", (d - 1) * Q - (d + 1) + (Q - 1) * u, false);
    if (params.u > 0) add("H_i", exact_rational((Q - 1) * d * E, 2) + report.t_value + (Q - 1) * u * E, true);
    if (params.w > 0) add("R_i", -2 * Q + (Q - 1) * (d + 1 + u), true);
  }
  if (P >= 2) {
    add("G_{i,1}", 0, true);
    if (P >= 3) add("G_{i,j}", 0, true);
  }
  add("G_{i,p^r}", Q - 2, true);

  if (resolution_size(params) <= max_components) {
    const auto derived = detail::config_pairings(build_resolution(params, max_components), q);
    for (const auto& [label, values] : derived) {
      auto entry = std::find_if(report.entries.begin(), report.entries.end(),
                                [&](const nef_entry& e) { return e.curve_class == label; });
      if (entry == report.entries.end()) {
        report.unmatched_classes.push_back(label);
        continue;
      }
      for (const exact_int& v : values) entry->config_pairings.emplace_back(v);
    }
    report.config_checked = true;
  }

  report.all_nef = true;
  for (const auto& entry : report.entries)
    if (entry.value < 0) report.all_nef = false;
  return report;
}

/// Smallest prime q >= 17 (q != p) at which every listed value is >= 0.
inline std::int64_t min_nef_q(const arrangement_params& params, std::int64_t q_max = 1'000'003) {
  validate(params);
  for (std::int64_t q = next_prime(17); q <= q_max; q = next_prime(q + 1)) {
    if (q == params.p) continue;
    if (make_nef_report(params, q, 0).all_nef) return q;
  }
  throw cap_exceeded("no prime q <= " + std::to_string(q_max) + " makes every listed value non-negative");
}

}  // namespace chernslope
