#pragma once

// JSON encodings.  Exact numbers are strings: integers as "123", rationals
// as {"num": "...", "den": "..."} in lowest terms.  Floating values appear
// only under keys ending in "approx".

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "chernslope/errors.hpp"
#include "chernslope/exact.hpp"
#include "chernslope/geometry.hpp"
#include "chernslope/girstmair.hpp"
#include "chernslope/nefcheck.hpp"
#include "chernslope/numtheory.hpp"
#include "chernslope/partitions.hpp"
#include "chernslope/prank.hpp"
#include "chernslope/rootcover.hpp"

namespace chernslope {

using json = nlohmann::json;

inline json rational_json(const exact_rational& x) {
  return json{{"num", numerator_of(x).str()}, {"den", denominator_of(x).str()}};
}

inline exact_rational rational_from_json(const json& j) {
  try {
    if (j.is_object()) {
      const exact_int num(j.at("num").get<std::string>());
      const exact_int den(j.at("den").get<std::string>());
      if (den <= 0) throw domain_error("rational denominator must be positive");
      return exact_rational(num, den);
    }
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return exact_rational(j.get<std::int64_t>());
  } catch (const json::exception& e) {
    throw domain_error(std::string("malformed rational: ") + e.what());
  } catch (const std::runtime_error& e) {
    throw domain_error(std::string("malformed rational: ") + e.what());
  }
  throw domain_error("malformed rational: " + j.dump());
}

inline json int_json(const exact_int& x) { return x.str(); }

inline exact_int int_from_json(const json& j) {
  if (j.is_number_integer()) return exact_int(j.get<std::int64_t>());
  if (j.is_string()) {
    const exact_rational value = parse_rational(j.get<std::string>());
    if (!is_integer(value)) throw domain_error("expected an integer, got " + j.dump());
    return numerator_of(value);
  }
  throw domain_error("expected an integer, got " + j.dump());
}

inline json params_json(const arrangement_params& params) {
  return json{{"family", to_string(params.fam)}, {"p", params.p}, {"r", params.r}, {"e", params.e},
              {"d", params.d},  {"g", params.g},  {"u", params.u}, {"w", params.w}};
}

inline arrangement_params params_from_json(const json& j) {
  try {
    arrangement_params params;
    params.fam = parse_family(j.at("family").get<std::string>());
    params.p = j.at("p").get<std::int64_t>();
    params.r = j.at("r").get<std::int64_t>();
    params.e = j.at("e").get<std::int64_t>();
    if (params.fam == family::APRIME && !j.contains("d") && j.contains("l"))
      params.d = 2 * j.at("l").get<std::int64_t>();
    else
      params.d = j.at("d").get<std::int64_t>();
    params.g = j.value("g", std::int64_t{0});
    params.u = j.value("u", std::int64_t{0});
    params.w = j.value("w", std::int64_t{0});
    validate(params);
    return params;
  } catch (const json::exception& e) {
    throw domain_error(std::string("malformed parameters: ") + e.what());
  }
}

inline json dedekind_json(const dedekind_data& data, const hj_expansion& hj) {
  return json{{"q", data.q}, {"a", data.a}, {"s", rational_json(data.s)}, {"l", data.l},
              {"c", rational_json(data.c)}, {"hj_digits", hj.digits}};
}

inline json badset_json(const bad_set& bad, bool include_members) {
  json out{{"q", bad.q}, {"C", rational_json(bad.C)}, {"bad_count", bad.members.size()},
           {"good_count", static_cast<std::int64_t>(bad.q - 1) - static_cast<std::int64_t>(bad.members.size())}};
  if (include_members) {
    out["bad"] = bad.members;
    out["good"] = bad.complement();
  }
  return out;
}

inline json girstmair_json(const girstmair_report& r) {
  return json{{"q", r.q},
              {"bad_count", r.bad_count},
              {"bad_count_bound_approx", static_cast<double>(r.bad_count_bound)},
              {"cardinality_ok", r.cardinality_ok},
              {"worst_length", r.worst_length},
              {"worst_length_residue", r.worst_length_residue},
              {"length_ok", r.length_ok},
              {"worst_twelve_abs_s", rational_json(r.worst_sum)},
              {"worst_sum_residue", r.worst_sum_residue},
              {"sum_ok", r.sum_ok},
              {"all_ok", r.all_ok()}};
}

inline json configuration_json(const resolved_configuration& config, bool include_lists) {
  const log_chern_numbers pair = log_chern_pair(config);
  const closed_log_chern closed = log_chern_closed(config.params);
  json out{{"params", params_json(config.params)},
           {"components", config.components.size()},
           {"node_points", config.t2()},
           {"c1sq_Y", config.c1sq_Y},
           {"c2_Y", config.c2_Y},
           {"log_c1sq", int_json(pair.c1sq)},
           {"log_c2", int_json(pair.c2)},
           {"closed_log_c1sq", int_json(closed.c1sq)},
           {"closed_log_c2", int_json(closed.c2)},
           {"a_chain_nodes", int_json(closed.a_chain_nodes)},
           {"limit_slope", rational_json(closed.slope)},
           {"limit_slope_approx", to_double(closed.slope)},
           {"closed_form_agrees", pair.c1sq == closed.c1sq && pair.c2 == closed.c2}};
  if (include_lists) {
    json comps = json::array();
    for (const component& c : config.components)
      comps.push_back({{"id", c.id}, {"label", c.label}, {"kind", to_string(c.kind)},
                       {"self_intersection", c.self_intersection}, {"genus", c.genus}});
    json nodes = json::array();
    for (const node& n : config.nodes) nodes.push_back({{"first", n.first}, {"second", n.second}, {"count", n.count}});
    out["component_list"] = std::move(comps);
    out["node_list"] = std::move(nodes);
  }
  return out;
}

inline json cover_json(const cover_invariants& cover, bool include_singularities) {
  json out{{"q", cover.q},
           {"log_c1sq", int_json(cover.c1sq_bar)},
           {"log_c2", int_json(cover.c2_bar)},
           {"c1sq_X", rational_json(cover.c1sq_X)},
           {"c2_X", rational_json(cover.c2_X)},
           {"chi", rational_json(cover.chi)},
           {"noether_integral", cover.noether_integral()},
           {"slope", rational_json(cover.slope)},
           {"slope_approx", to_double(cover.slope)},
           {"defect_sum", rational_json(cover.defect_sum)},
           {"length_sum", int_json(cover.length_sum)}};
  out["defect_bound"] = cover.defect_bound ? json(int_json(*cover.defect_bound)) : json(nullptr);
  if (include_singularities) {
    json list = json::array();
    for (const singularity& s : cover.singularities)
      list.push_back({{"node", s.node}, {"a", s.a}, {"count", s.count}, {"hj_digits", s.hj_digits},
                      {"c", rational_json(s.c)}, {"l", s.l}});
    out["singularities"] = std::move(list);
  }
  return out;
}

inline json search_json(const search_result& result, const resolved_configuration& config) {
  json out{{"found", result.found()},
           {"tries", result.tries},
           {"zero_multiplicity_tries", result.zero_multiplicity_tries},
           {"near_misses", result.near_misses},
           {"fewest_bad_nodes", result.fewest_bad_nodes}};
  if (result.worst_node) {
    const node& n = config.nodes[static_cast<std::size_t>(*result.worst_node)];
    out["worst_node"] = {{"index", *result.worst_node},
                         {"between", {config.components[static_cast<std::size_t>(n.first)].label,
                                      config.components[static_cast<std::size_t>(n.second)].label}},
                         {"failures", result.worst_node_failures}};
  }
  if (result.solution) {
    out["section_parts"] = result.solution->section_parts;
    out["fiber_parts"] = result.solution->fiber_parts;
  }
  if (result.assignment) out["multiplicities"] = result.assignment->nus;
  return out;
}

inline json nef_json(const nef_report& report) {
  json entries = json::array();
  for (const nef_entry& e : report.entries) {
    json item{{"curve_class", e.curve_class},
              {"pairing", rational_json(e.pairing)},
              {"value", rational_json(e.value)},
              {"in_branch_locus", e.in_branch_locus},
              {"agrees_with_configuration", e.agrees()}};
    item["configuration_checked"] = !e.config_pairings.empty();
    entries.push_back(std::move(item));
  }
  return json{{"params", params_json(report.params)}, {"q", report.q},
              {"entries", std::move(entries)},      {"t_value", rational_json(report.t_value)},
              {"all_nef", report.all_nef},          {"configuration_checked", report.config_checked},
              {"consistent", report.consistent()}};
}

inline json prank_json(const cyclic_cover_data& data) {
  const auto orbits = frobenius_orbits(data.q, data.p);
  json orbit_list = json::array();
  for (const auto& orbit : orbits) orbit_list.push_back(orbit);
  json out{{"q", data.q},
           {"p", data.p},
           {"mults", data.mults},
           {"l_branch", data.l_branch},
           {"genus", genus(data)},
           {"B", prank_upper_bound(data)},
           {"orbits", std::move(orbit_list)}};
  out["primitive_root"] = is_prime(data.q) ? json(is_primitive_root(data.p, data.q)) : json(nullptr);
  return out;
}

}  // namespace chernslope
