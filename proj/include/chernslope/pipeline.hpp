#pragma once

// Target slope -> parameters -> multiplicities -> cover invariants, and the
// per-q sweep behind the CSV output.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "chernslope/density.hpp"
#include "chernslope/errors.hpp"
#include "chernslope/exact.hpp"
#include "chernslope/geometry.hpp"
#include "chernslope/girstmair.hpp"
#include "chernslope/nefcheck.hpp"
#include "chernslope/partitions.hpp"
#include "chernslope/rootcover.hpp"
#include "chernslope/serialize.hpp"

namespace chernslope {

enum class report_status { ok, cap_hit, not_found };

inline std::string to_string(report_status s) {
  switch (s) {
    case report_status::ok: return "ok";
    case report_status::cap_hit: return "cap_hit";
    case report_status::not_found: return "not_found";
  }
  return "?";
}

inline report_status parse_status(const std::string& s) {
  if (s == "ok") return report_status::ok;
  if (s == "cap_hit") return report_status::cap_hit;
  if (s == "not_found") return report_status::not_found;
  throw domain_error("unknown status '" + s + "'");
}

struct pipeline_options {
  std::int64_t max_tries = 100'000;
  std::int64_t max_components = 200'000;
  std::int64_t q_max = 20'000'000;
  solver_caps caps{.finer_rungs = 0};  // first-found sizes, no finer tolerance rungs
};

struct sampled_cover {
  std::int64_t q = 0;
  std::uint64_t seed = 0;
  std::int64_t tries = 0;
  exact_rational c1sq_X, c2_X, chi, slope;
  exact_rational defect_sum;
  exact_int defect_bound;
  bool nef_all = false;
  bool nef_consistent = false;

  bool operator==(const sampled_cover&) const = default;
};

struct slope_report {
  exact_rational target;
  exact_rational epsilon;
  std::int64_t p = 2;
  family fam = family::A;
  std::optional<std::int64_t> q_hint;
  std::uint64_t seed = 0;
  std::optional<arrangement_params> params;
  std::optional<exact_rational> limit_slope;
  std::optional<exact_rational> error;
  std::optional<sampled_cover> sampled;
  report_status status = report_status::cap_hit;
  std::vector<std::string> diagnostics;

  bool operator==(const slope_report&) const = default;
};

/// Smallest q >= 17 at which positive solutions of the partition equations exist.
inline std::int64_t feasibility_floor(const arrangement_params& params) {
  const exact_int delta = params.delta();
  exact_int floor = 17;
  if (params.fam == family::APRIME)
    floor = std::max<exact_int>(floor, std::max<exact_int>(params.half_d() + 1, delta));
  else
    floor = std::max<exact_int>(floor, params.section_degree() * (params.d + params.u) + delta + params.w);
  return to_int64(floor);
}

/// Prime q above the feasibility and nef thresholds with t2 log q <= 2 sqrt q,
/// so that all node residues are good with non-negligible probability.
inline std::int64_t auto_q(const resolved_configuration& config, std::int64_t q_max) {
  std::int64_t q = std::max(feasibility_floor(config.params), min_nef_q(config.params, q_max));
  const auto t2 = static_cast<long double>(config.t2());
  while (t2 * std::log(static_cast<long double>(q)) > 2 * std::sqrt(static_cast<long double>(q))) {
    if (q > q_max / 2) throw cap_exceeded("automatic q exceeds " + std::to_string(q_max));
    q *= 2;
  }
  q = next_prime(q);
  if (q == config.params.p) q = next_prime(q + 1);
  if (q > q_max) throw cap_exceeded("automatic q exceeds " + std::to_string(q_max));
  return q;
}

inline slope_report run_pipeline(const exact_rational& target, const exact_rational& epsilon, std::int64_t p,
                                 family fam, std::optional<std::int64_t> q_hint, std::uint64_t seed,
                                 const pipeline_options& options = {}) {
  detail::require(target >= 2, "target slope must be at least 2, got " + to_string(target));
  detail::require(epsilon > 0, "epsilon must be positive");
  detail::require(is_prime(p), "p must be prime, got " + std::to_string(p));
  detail::require(fam == family::A || fam == family::APRIME, "pipeline families are A and APRIME");
  if (q_hint) {
    detail::require(is_prime(*q_hint), "q must be prime, got " + std::to_string(*q_hint));
    detail::require(*q_hint != p, "q must differ from p");
  }

  slope_report report;
  report.target = target;
  report.epsilon = epsilon;
  report.p = p;
  report.fam = fam;
  report.q_hint = q_hint;
  report.seed = seed;

  density_target goal;
  goal.x = target;
  goal.epsilon = epsilon;
  goal.p = p;
  const solved_params solved = solve(goal, fam, options.caps);
  if (solved.limit != 0) {
    report.params = solved.params;
    report.limit_slope = solved.limit;
    report.error = solved.error;
  }
  if (!solved.ok) {
    report.status = report_status::cap_hit;
    report.diagnostics.push_back(solved.note);
    return report;
  }
  if (log_chern_closed(solved.params).slope != solved.limit)
    throw std::logic_error("solver limit disagrees with the closed-form log Chern slope");

  if (q_hint) {
    try {
      check_feasible({solved.params, *q_hint});
    } catch (const domain_error& e) {
      report.status = report_status::not_found;
      report.diagnostics.push_back(std::string("infeasible partition: ") + e.what());
      return report;
    }
  }

  const exact_int size = resolution_size(solved.params);
  if (size > options.max_components) {
    report.status = report_status::cap_hit;
    report.diagnostics.push_back("configuration has " + size.str() + " components (cap " +
                                 std::to_string(options.max_components) + "); no cover sampled");
    return report;
  }
  const resolved_configuration config = build_resolution(solved.params, options.max_components);

  std::int64_t q = 0;
  if (q_hint) {
    q = *q_hint;
  } else {
    try {
      q = auto_q(config, options.q_max);
    } catch (const cap_exceeded& e) {
      report.status = report_status::cap_hit;
      report.diagnostics.push_back(e.what());
      return report;
    }
  }

  const partition_problem problem{solved.params, q};
  const search_result found = sample_assignment(config, problem, make_bad_set(q, 1), seed, options.max_tries);
  if (!found.found()) {
    report.status = report_status::not_found;
    std::ostringstream msg;
    msg << "no asymptotic assignment at q = " << q << " after " << found.tries << " tries (" << found.near_misses
        << " near misses, fewest bad nodes " << found.fewest_bad_nodes << ")";
    if (found.worst_node) {
      const node& n = config.nodes[static_cast<std::size_t>(*found.worst_node)];
      msg << "; worst node " << config.components[static_cast<std::size_t>(n.first)].label << "-"
          << config.components[static_cast<std::size_t>(n.second)].label;
    }
    report.diagnostics.push_back(msg.str());
    return report;
  }

  const cover_invariants cover = chern_of_cover(config, *found.assignment);
  if (!cover.noether_integral()) throw std::logic_error("cover violates Noether divisibility");
  const nef_report nef = make_nef_report(solved.params, q, options.max_components);

  sampled_cover s;
  s.q = q;
  s.seed = seed;
  s.tries = found.tries;
  s.c1sq_X = cover.c1sq_X;
  s.c2_X = cover.c2_X;
  s.chi = cover.chi;
  s.slope = cover.slope;
  s.defect_sum = cover.defect_sum;
  s.defect_bound = cover.defect_bound.value_or(0);
  s.nef_all = nef.all_nef;
  s.nef_consistent = nef.consistent();
  report.sampled = s;
  report.status = report_status::ok;
  return report;
}

inline json report_json(const slope_report& r) {
  json out{{"target", rational_json(r.target)},
           {"epsilon", rational_json(r.epsilon)},
           {"target_approx", to_double(r.target)},
           {"p", r.p},
           {"family", to_string(r.fam)},
           {"seed", std::to_string(r.seed)},
           {"status", to_string(r.status)},
           {"diagnostics", r.diagnostics}};
  out["q_hint"] = r.q_hint ? json(*r.q_hint) : json("auto");
  out["params"] = r.params ? params_json(*r.params) : json(nullptr);
  out["limit_slope"] = r.limit_slope ? rational_json(*r.limit_slope) : json(nullptr);
  out["limit_slope_approx"] = r.limit_slope ? json(to_double(*r.limit_slope)) : json(nullptr);
  out["error"] = r.error ? rational_json(*r.error) : json(nullptr);
  if (r.sampled) {
    const sampled_cover& s = *r.sampled;
    out["sampled"] = {{"q", s.q},
                      {"seed", std::to_string(s.seed)},
                      {"tries", s.tries},
                      {"c1sq_X", rational_json(s.c1sq_X)},
                      {"c2_X", rational_json(s.c2_X)},
                      {"chi", rational_json(s.chi)},
                      {"slope", rational_json(s.slope)},
                      {"slope_approx", to_double(s.slope)},
                      {"defect_sum", rational_json(s.defect_sum)},
                      {"defect_bound", int_json(s.defect_bound)},
                      {"nef", {{"all_nef", s.nef_all}, {"consistent", s.nef_consistent}}}};
  } else {
    out["sampled"] = nullptr;
  }
  return out;
}

inline slope_report report_from_json(const json& j) {
  try {
    slope_report r;
    r.target = rational_from_json(j.at("target"));
    r.epsilon = rational_from_json(j.at("epsilon"));
    r.p = j.at("p").get<std::int64_t>();
    r.fam = parse_family(j.at("family").get<std::string>());
    r.seed = std::stoull(j.at("seed").get<std::string>());
    r.status = parse_status(j.at("status").get<std::string>());
    r.diagnostics = j.at("diagnostics").get<std::vector<std::string>>();
    if (j.at("q_hint").is_number_integer()) r.q_hint = j.at("q_hint").get<std::int64_t>();
    if (!j.at("params").is_null()) r.params = params_from_json(j.at("params"));
    if (!j.at("limit_slope").is_null()) r.limit_slope = rational_from_json(j.at("limit_slope"));
    if (!j.at("error").is_null()) r.error = rational_from_json(j.at("error"));
    if (!j.at("sampled").is_null()) {
      const json& s = j.at("sampled");
      sampled_cover c;
      c.q = s.at("q").get<std::int64_t>();
      c.seed = std::stoull(s.at("seed").get<std::string>());
      c.tries = s.at("tries").get<std::int64_t>();
      c.c1sq_X = rational_from_json(s.at("c1sq_X"));
      c.c2_X = rational_from_json(s.at("c2_X"));
      c.chi = rational_from_json(s.at("chi"));
      c.slope = rational_from_json(s.at("slope"));
      c.defect_sum = rational_from_json(s.at("defect_sum"));
      c.defect_bound = int_from_json(s.at("defect_bound"));
      c.nef_all = s.at("nef").at("all_nef").get<bool>();
      c.nef_consistent = s.at("nef").at("consistent").get<bool>();
      r.sampled = c;
    }
    return r;
  } catch (const json::exception& e) {
    throw domain_error(std::string("malformed slope report: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Sweeps: one cover computation per prime q, each with its own seed.

struct sweep_row {
  std::int64_t q = 0;
  bool found = false;
  std::int64_t tries = 0;
  exact_rational c1sq_X, c2_X, chi, slope, defect_sum;
  exact_int defect_bound;
  exact_rational limit;
};

inline sweep_row sweep_one(const resolved_configuration& config, std::int64_t q, std::uint64_t master_seed,
                           std::int64_t max_tries) {
  sweep_row row;
  row.q = q;
  row.limit = log_chern_closed(config.params).slope;
  const partition_problem problem{config.params, q};
  const auto found =
      sample_assignment(config, problem, make_bad_set(q, 1), derive_seed(master_seed, static_cast<std::uint64_t>(q)), max_tries);
  row.tries = found.tries;
  if (!found.found()) return row;
  const cover_invariants cover = chern_of_cover(config, *found.assignment);
  row.found = true;
  row.c1sq_X = cover.c1sq_X;
  row.c2_X = cover.c2_X;
  row.chi = cover.chi;
  row.slope = cover.slope;
  row.defect_sum = cover.defect_sum;
  row.defect_bound = cover.defect_bound.value_or(0);
  return row;
}

/// Rows for the primes in [q_lo, q_hi] (feasible ones only), sorted by q.
inline std::vector<sweep_row> sweep(const arrangement_params& params, std::int64_t q_lo, std::int64_t q_hi,
                                    std::uint64_t master_seed, std::int64_t max_tries, unsigned workers) {
  const resolved_configuration config = build_resolution(params);
  std::vector<std::int64_t> qs;
  for (std::int64_t q : primes_in(std::max(q_lo, feasibility_floor(params)), q_hi))
    if (q != params.p) qs.push_back(q);

  std::vector<sweep_row> rows(qs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_lock;
  auto work = [&] {
    for (std::size_t i = next++; i < qs.size(); i = next++) {
      try {
        rows[i] = sweep_one(config, qs[i], master_seed, max_tries);
      } catch (...) {
        std::lock_guard<std::mutex> guard(failure_lock);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  workers = std::max(1u, workers);
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  std::sort(rows.begin(), rows.end(), [](const sweep_row& a, const sweep_row& b) { return a.q < b.q; });
  return rows;
}

inline std::string sweep_csv(const std::vector<sweep_row>& rows) {
  std::ostringstream out;
  out << "q,found,tries,c1sq_X,c2_X,chi,slope,slope_approx,limit_approx,abs_error_approx,defect_sum,defect_bound\n";
  for (const sweep_row& r : rows) {
    out << r.q << ',' << (r.found ? 1 : 0) << ',' << r.tries << ',';
    if (r.found) {
      const double slope = to_double(r.slope), limit = to_double(r.limit);
      out << to_string(r.c1sq_X) << ',' << to_string(r.c2_X) << ',' << to_string(r.chi) << ',' << to_string(r.slope)
          << ',' << slope << ',' << limit << ',' << std::fabs(slope - limit) << ',' << to_string(r.defect_sum) << ','
          << r.defect_bound.str() << '\n';
    } else {
      out << ",,,,," << to_double(r.limit) << ",,,\n";
    }
  }
  return out.str();
}

}  // namespace chernslope
