#pragma once

// Random multiplicity assignments solving the weighted partition equations of
// the arrangement families, filtered so that every node residue is good
// (lies outside the Farey bad set with C = 1).
//
// Family A / A0:  sum_{i<=d+u} E x_i + sum_{j<=delta+w} y_j = q,  x_i, y_j >= 1,
//                 and S_{d+1} gets x = q - sum x_i.
// Family APRIME:  a_1 + ... + a_l = q  and  y_1 + ... + y_delta = q, with
//                 S_{2i-1}, S_{2i} carrying a_i and q - a_i.
// Exceptional curves inherit pullback multiplicities: over a tangency of
// sections with nu_a, nu_b and fiber nu_F, G_k gets k (nu_a + nu_b) + nu_F.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "chernslope/errors.hpp"
#include "chernslope/exact.hpp"
#include "chernslope/geometry.hpp"
#include "chernslope/girstmair.hpp"
#include "chernslope/primes.hpp"
#include "chernslope/rootcover.hpp"

namespace chernslope {

// ---------------------------------------------------------------------------
// Seeded randomness.  Each try owns a generator seeded from (seed, try index),
// so any subset of tries can be replayed independently of the others.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

class try_rng {
 public:
  explicit try_rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw domain_error("empty range");
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const auto product = static_cast<unsigned __int128>(engine_()) * bound;
      if (static_cast<std::uint64_t>(product) >= threshold) return static_cast<std::uint64_t>(product >> 64);
    }
  }

  /// Uniform in [0, 1) with 53 random bits.
  long double unit() { return static_cast<long double>(engine_() >> 11) * 0x1.0p-53L; }

 private:
  std::mt19937_64 engine_;
};

/// Uniformly random composition of `total` into `parts` non-negative integers.
inline std::vector<std::int64_t> random_composition(try_rng& rng, std::int64_t total, std::int64_t parts) {
  if (parts <= 0) throw domain_error("composition needs at least one part");
  if (total < 0) throw domain_error("composition of a negative total");
  // Choose parts-1 bar positions among total+parts-1 slots (Floyd's sampler).
  const std::int64_t slots = total + parts - 1;
  const std::int64_t bars = parts - 1;
  std::vector<std::int64_t> chosen;
  chosen.reserve(static_cast<std::size_t>(bars));
  for (std::int64_t j = slots - bars; j < slots; ++j) {
    auto t = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(j + 1)));
    if (std::find(chosen.begin(), chosen.end(), t) != chosen.end())
      chosen.push_back(j);
    else
      chosen.push_back(t);
  }
  std::sort(chosen.begin(), chosen.end());
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(parts));
  std::int64_t previous = -1;
  for (std::int64_t bar : chosen) {
    out.push_back(bar - previous - 1);
    previous = bar;
  }
  out.push_back(slots - previous - 1);
  return out;
}

// ---------------------------------------------------------------------------

struct partition_problem {
  arrangement_params params;
  std::int64_t q = 0;
};

struct partition_solution {
  std::vector<std::int64_t> section_parts;  // x_1..x_{d+u} (A) or a_1..a_l (APRIME)
  std::vector<std::int64_t> fiber_parts;    // y_1..y_{delta+w} (A) or y_1..y_delta (APRIME)

  bool operator==(const partition_solution&) const = default;
};

namespace detail {

struct problem_shape {
  std::int64_t E = 0;
  std::int64_t weighted = 0;  // unknowns carrying weight E (family A)
  std::int64_t plain = 0;     // unknowns of weight 1
  std::int64_t slack = 0;     // q minus the all-ones solution
};

inline problem_shape shape_of(const partition_problem& problem) {
  const arrangement_params& params = problem.params;
  problem_shape s;
  s.E = to_int64(params.section_degree());
  const std::int64_t delta = to_int64(params.delta());
  if (params.fam == family::APRIME) {
    s.weighted = params.half_d();
    s.plain = delta;
  } else {
    s.weighted = params.d + params.u;
    s.plain = delta + params.w;
    s.slack = problem.q - s.E * s.weighted - s.plain;
  }
  return s;
}

}  // namespace detail

/// Throws unless positive solutions of the partition equations exist at q.
inline void check_feasible(const partition_problem& problem) {
  validate(problem.params);
  detail::require(is_prime(problem.q), "q must be prime, got " + std::to_string(problem.q));
  detail::require(problem.q != problem.params.p, "q must differ from the characteristic p");
  const auto s = detail::shape_of(problem);
  if (problem.params.fam == family::APRIME) {
    detail::require(problem.q > s.weighted && problem.q >= s.plain,
                    "q = " + std::to_string(problem.q) + " too small: need q > l = " + std::to_string(s.weighted) +
                        " and q >= delta = " + std::to_string(s.plain));
  } else {
    detail::require(s.slack >= 0, "q = " + std::to_string(problem.q) + " too small: need q >= e p^r (d+u) + delta + w = " +
                                      std::to_string(problem.q - s.slack));
  }
}

/// Leading term q^{n-1} / ((n-1)! weight^{weighted}) of the number of positive
/// solutions of  weight * (x_1 + .. + x_weighted) + y_1 + .. + y_plain = q,
/// with n = weighted + plain.
inline long double weighted_partition_leading_term(long double q, std::int64_t weighted, long double weight,
                                                   std::int64_t plain) {
  const std::int64_t n = weighted + plain;
  if (n < 1) throw domain_error("need at least one unknown");
  const long double log_value = (n - 1) * std::log(q) - std::lgamma(static_cast<long double>(n)) -
                                weighted * std::log(weight);
  return std::exp(log_value);
}

/// Leading-order number of solutions of the partition equations.
inline long double count_estimate(const partition_problem& problem) {
  validate(problem.params);
  const auto s = detail::shape_of(problem);
  const auto q = static_cast<long double>(problem.q);
  if (problem.params.fam == family::APRIME) {
    // Two independent plain partitions of q.
    return weighted_partition_leading_term(q, 0, 1, s.weighted) * weighted_partition_leading_term(q, 0, 1, s.plain);
  }
  return weighted_partition_leading_term(q, s.weighted, static_cast<long double>(s.E), s.plain);
}

/// Multiplicities on every resolved component induced by a solution, or
/// nullopt when some exceptional multiplicity vanishes mod q.
inline std::optional<std::vector<std::int64_t>> induced_multiplicities(const resolved_configuration& config,
                                                                       const partition_problem& problem,
                                                                       const partition_solution& solution) {
  const std::int64_t q = problem.q;
  std::vector<std::int64_t> nus(config.components.size(), 0);
  auto set = [&](std::int64_t id, std::int64_t value) { nus[static_cast<std::size_t>(id)] = mod(value, q); };

  if (config.params.fam == family::APRIME) {
    for (std::size_t i = 0; i < solution.section_parts.size(); ++i) {
      set(config.sections[2 * i], solution.section_parts[i]);
      set(config.sections[2 * i + 1], q - solution.section_parts[i]);
    }
  } else {
    std::int64_t sum = 0;
    for (std::size_t i = 0; i < config.sections.size(); ++i) set(config.sections[i], solution.section_parts[i]);
    for (std::size_t i = 0; i < config.extra_sections.size(); ++i)
      set(config.extra_sections[i], solution.section_parts[config.sections.size() + i]);
    for (std::int64_t x : solution.section_parts) sum += x;
    set(*config.negative_section, q - sum);
    for (std::size_t i = 0; i < config.general_fibers.size(); ++i)
      set(config.general_fibers[i], solution.fiber_parts[config.fibers.size() + i]);
  }
  for (std::size_t j = 0; j < config.fibers.size(); ++j) set(config.fibers[j], solution.fiber_parts[j]);

  for (const tangency& t : config.tangencies) {
    const std::int64_t step = mod(nus[static_cast<std::size_t>(t.section_a)] + nus[static_cast<std::size_t>(t.section_b)], q);
    std::int64_t value = nus[static_cast<std::size_t>(t.fiber)];
    for (std::int64_t g : t.chain) {
      value = mod(value + step, q);
      nus[static_cast<std::size_t>(g)] = value;
    }
  }
  for (std::int64_t nu : nus)
    if (nu == 0) return std::nullopt;
  return nus;
}

/// Nodes lying on the A_{q-1} chains of family APRIME: the chains over the
/// tangency points of the paired sections S_{2i-1}, S_{2i}.
inline std::vector<char> paired_chain_nodes(const resolved_configuration& config) {
  std::vector<char> flags(config.nodes.size(), 0);
  if (config.params.fam != family::APRIME) return flags;
  std::map<std::int64_t, std::size_t> owner;
  for (std::size_t t = 0; t < config.tangencies.size(); ++t) {
    const tangency& tan = config.tangencies[t];
    const std::int64_t a = tan.section_a, b = tan.section_b;  // section ids equal positions 0..d-1
    if (!(a % 2 == 0 && b == a + 1)) continue;
    owner[tan.fiber] = t;
    for (std::int64_t g : tan.chain) owner[g] = t;
  }
  for (std::size_t i = 0; i < config.nodes.size(); ++i) {
    auto x = owner.find(config.nodes[i].first), y = owner.find(config.nodes[i].second);
    if (x != owner.end() && y != owner.end() && x->second == y->second) flags[i] = 1;
  }
  return flags;
}

struct asymptotic_report {
  bool ok = true;
  std::vector<std::int64_t> bad_nodes;  // node indices with residue in F
  std::int64_t a_chain_nodes = 0;       // exempt A_{q-1} nodes, with multiplicity
};

inline asymptotic_report verify_asymptotic(const resolved_configuration& config, const branch_assignment& assign,
                                           const bad_set& bad) {
  detail::require(bad.q == assign.q, "bad set and assignment use different q");
  const auto exempt = paired_chain_nodes(config);
  asymptotic_report report;
  for (std::size_t i = 0; i < config.nodes.size(); ++i) {
    const std::int64_t a = assign.residue(config.nodes[i]);
    if (exempt[i] && a == assign.q - 1) {
      report.a_chain_nodes += config.nodes[i].count;
      continue;
    }
    if (bad.contains(a)) {
      report.ok = false;
      report.bad_nodes.push_back(static_cast<std::int64_t>(i));
    }
  }
  return report;
}

inline asymptotic_report verify_asymptotic(const resolved_configuration& config, const branch_assignment& assign,
                                           const exact_rational& C = 1) {
  return verify_asymptotic(config, assign, make_bad_set(assign.q, C));
}

struct search_result {
  std::optional<branch_assignment> assignment;
  std::optional<partition_solution> solution;
  std::int64_t tries = 0;  // tries consumed, including the successful one
  std::int64_t zero_multiplicity_tries = 0;
  std::int64_t near_misses = 0;  // tries with exactly one bad node
  std::int64_t fewest_bad_nodes = -1;
  std::optional<std::int64_t> worst_node;  // node most often bad across tries
  std::int64_t worst_node_failures = 0;

  bool found() const { return assignment.has_value(); }
};

/// Draws one solution of the partition equations for try `index`.
inline partition_solution draw_solution(const partition_problem& problem, std::uint64_t seed, std::int64_t index) {
  const auto s = detail::shape_of(problem);
  try_rng rng(derive_seed(seed, static_cast<std::uint64_t>(index)));
  partition_solution out;
  auto shift = [](std::vector<std::int64_t> parts) {
    for (auto& v : parts) v += 1;
    return parts;
  };
  if (problem.params.fam == family::APRIME) {
    out.section_parts = shift(random_composition(rng, problem.q - s.weighted, s.weighted));
    out.fiber_parts = shift(random_composition(rng, problem.q - s.plain, s.plain));
    return out;
  }
  // Split the slack between weighted and plain unknowns with probability
  // proportional to the number of completions, then compose each side
  // uniformly: the result is uniform over all positive solutions.
  const std::int64_t max_weighted = s.slack / s.E;
  std::vector<long double> log_weights;
  log_weights.reserve(static_cast<std::size_t>(max_weighted + 1));
  auto log_binomial = [](long double n, long double k) {
    return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
  };
  long double peak = -INFINITY;
  for (std::int64_t X = 0; X <= max_weighted; ++X) {
    const long double lw = log_binomial(X + s.weighted - 1, s.weighted - 1) +
                           log_binomial(s.slack - s.E * X + s.plain - 1, s.plain - 1);
    log_weights.push_back(lw);
    peak = std::max(peak, lw);
  }
  long double total = 0;
  for (auto& lw : log_weights) total += (lw = std::exp(lw - peak));
  long double target = rng.unit() * total;
  std::int64_t X = 0;
  for (; X < max_weighted; ++X) {
    target -= log_weights[static_cast<std::size_t>(X)];
    if (target < 0) break;
  }
  out.section_parts = shift(random_composition(rng, X, s.weighted));
  out.fiber_parts = shift(random_composition(rng, s.slack - s.E * X, s.plain));
  return out;
}

inline search_result sample_assignment(const resolved_configuration& config, const partition_problem& problem,
                                       const bad_set& bad, std::uint64_t seed, std::int64_t max_tries) {
  check_feasible(problem);
  detail::require(config.params == problem.params, "configuration was built for different parameters");
  detail::require(bad.q == problem.q, "bad set computed for a different q");
  detail::require(max_tries >= 1, "max_tries must be positive");

  const std::int64_t q = problem.q;
  std::vector<std::int64_t> inverse(static_cast<std::size_t>(q), 0);
  inverse[1] = 1;
  for (std::int64_t i = 2; i < q; ++i)
    inverse[static_cast<std::size_t>(i)] = mod(-(q / i) * inverse[static_cast<std::size_t>(q % i)], q);
  const auto exempt = paired_chain_nodes(config);

  search_result result;
  std::vector<std::int64_t> failures(config.nodes.size(), 0);
  for (std::int64_t index = 0; index < max_tries; ++index) {
    ++result.tries;
    partition_solution solution = draw_solution(problem, seed, index);
    auto nus = induced_multiplicities(config, problem, solution);
    if (!nus) {
      ++result.zero_multiplicity_tries;
      continue;
    }
    std::int64_t bad_nodes = 0;
    for (std::size_t i = 0; i < config.nodes.size(); ++i) {
      const node& n = config.nodes[i];
      const std::int64_t nu_i = (*nus)[static_cast<std::size_t>(n.first)];
      const std::int64_t nu_j = (*nus)[static_cast<std::size_t>(n.second)];
      const std::int64_t a = mod(-nu_j * inverse[static_cast<std::size_t>(nu_i)], q);
      if (exempt[i] && a == q - 1) continue;
      if (bad.contains(a)) {
        ++bad_nodes;
        ++failures[i];
      }
    }
    if (result.fewest_bad_nodes < 0 || bad_nodes < result.fewest_bad_nodes) result.fewest_bad_nodes = bad_nodes;
    if (bad_nodes == 1) ++result.near_misses;
    if (bad_nodes == 0) {
      result.assignment = branch_assignment{q, std::move(*nus)};
      result.solution = std::move(solution);
      return result;
    }
  }
  auto worst = std::max_element(failures.begin(), failures.end());
  if (worst != failures.end() && *worst > 0) {
    result.worst_node = static_cast<std::int64_t>(worst - failures.begin());
    result.worst_node_failures = *worst;
  }
  return result;
}

inline search_result sample_assignment(const partition_problem& problem, std::uint64_t seed, std::int64_t max_tries) {
  check_feasible(problem);
  const resolved_configuration config = build_resolution(problem.params);
  return sample_assignment(config, problem, make_bad_set(problem.q, 1), seed, max_tries);
}

}  // namespace chernslope
