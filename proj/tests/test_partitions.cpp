#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numeric>

#include "chernslope/girstmair.hpp"
#include "chernslope/partitions.hpp"
#include "chernslope/rootcover.hpp"
#include "oracles.hpp"

using namespace chernslope;

namespace {

std::int64_t sum_of(const std::vector<std::int64_t>& v) { return std::accumulate(v.begin(), v.end(), std::int64_t{0}); }

}  // namespace

TEST(RandomComposition, SumsAndShape) {
  try_rng rng(1);
  for (int trial = 0; trial < 500; ++trial) {
    const auto total = static_cast<std::int64_t>(rng.below(40));
    const auto parts = 1 + static_cast<std::int64_t>(rng.below(9));
    const auto c = random_composition(rng, total, parts);
    ASSERT_EQ(static_cast<std::int64_t>(c.size()), parts);
    EXPECT_EQ(sum_of(c), total);
    for (auto v : c) EXPECT_GE(v, 0);
  }
}

TEST(RandomComposition, UniformOverAllCompositions) {
  // 4 into 3 non-negative parts: C(6,2) = 15 compositions.
  try_rng rng(2024);
  std::map<std::vector<std::int64_t>, int> counts;
  const int draws = 30000;
  for (int i = 0; i < draws; ++i) ++counts[random_composition(rng, 4, 3)];
  ASSERT_EQ(counts.size(), 15u);
  double chi2 = 0;
  const double expected = draws / 15.0;
  for (const auto& [c, n] : counts) chi2 += (n - expected) * (n - expected) / expected;
  EXPECT_LT(chi2, 36.1);  // 14 degrees of freedom, p = 0.001
}

TEST(DrawSolution, UniformOverPositiveSolutions) {
  // 2(x1 + x2 + x3) + y1 + y2 + y3 = 17 with all parts positive.
  const partition_problem problem{arrangement_params::a0(2, 1, 1, 3, 0), 17};
  std::map<std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>>, int> counts;
  std::int64_t solutions = 0;
  for (std::int64_t x1 = 1; x1 < 9; ++x1)
    for (std::int64_t x2 = 1; x2 < 9; ++x2)
      for (std::int64_t x3 = 1; x3 < 9; ++x3)
        for (std::int64_t y1 = 1; y1 < 17; ++y1)
          for (std::int64_t y2 = 1; y2 < 17; ++y2) {
            const std::int64_t y3 = 17 - 2 * (x1 + x2 + x3) - y1 - y2;
            if (y3 >= 1) {
              ++solutions;
              counts[{{x1, x2, x3}, {y1, y2, y3}}] = 0;
            }
          }
  const int draws = 60 * static_cast<int>(solutions);
  for (int i = 0; i < draws; ++i) {
    const auto s = draw_solution(problem, 77, i);
    auto it = counts.find({s.section_parts, s.fiber_parts});
    ASSERT_NE(it, counts.end());
    ++it->second;
  }
  double chi2 = 0;
  for (const auto& [key, n] : counts) chi2 += (n - 60.0) * (n - 60.0) / 60.0;
  const double dof = static_cast<double>(solutions - 1);
  EXPECT_LT(chi2, dof + 5 * std::sqrt(2 * dof)) << solutions << " solutions";
}

TEST(DrawSolution, SatisfiesTheEquationsAndIsDeterministic) {
  for (const auto& params : {arrangement_params::a(2, 1, 1, 3, 0, 1, 1), arrangement_params::a(3, 2, 2, 4, 1, 2, 0),
                             arrangement_params::aprime(2, 2, 1, 4)}) {
    const std::int64_t q = 1009;
    const partition_problem problem{params, q};
    const std::int64_t E = to_int64(params.section_degree());
    for (int i = 0; i < 200; ++i) {
      const auto s = draw_solution(problem, 5, i);
      EXPECT_EQ(s, draw_solution(problem, 5, i));
      for (auto v : s.section_parts) EXPECT_GT(v, 0);
      for (auto v : s.fiber_parts) EXPECT_GT(v, 0);
      EXPECT_EQ(static_cast<std::int64_t>(s.fiber_parts.size()), to_int64(params.delta()) + params.w);
      if (params.fam == family::APRIME) {
        EXPECT_EQ(static_cast<std::int64_t>(s.section_parts.size()), params.half_d());
        EXPECT_EQ(sum_of(s.section_parts), q);
        EXPECT_EQ(sum_of(s.fiber_parts), q);
      } else {
        EXPECT_EQ(static_cast<std::int64_t>(s.section_parts.size()), params.d + params.u);
        EXPECT_EQ(E * sum_of(s.section_parts) + sum_of(s.fiber_parts), q);
      }
    }
  }
}

TEST(InducedMultiplicities, WorkedFamilyAExample) {
  const auto params = arrangement_params::a(2, 1, 1, 3, 0, 1, 1);
  const partition_problem problem{params, 17};
  const partition_solution solution{{1, 1, 1, 1}, {2, 2, 2, 3}};
  EXPECT_EQ(2 * sum_of(solution.section_parts) + sum_of(solution.fiber_parts), 17);
  const auto config = build_resolution(params);
  const auto nus = induced_multiplicities(config, problem, solution);
  ASSERT_TRUE(nus.has_value());
  EXPECT_EQ((*nus)[static_cast<std::size_t>(*config.negative_section)], 13);

  // Every node residue checked against the brute-force bad mask.
  const auto assign = branch_assignment::make(17, *nus);
  const auto report = verify_asymptotic(config, assign, 1);
  const auto mask = oracle::bad_mask(17, 1);
  std::vector<std::int64_t> expected_bad;
  for (std::size_t i = 0; i < config.nodes.size(); ++i) {
    const auto& n = config.nodes[i];
    const auto a = oracle::node_residue((*nus)[static_cast<std::size_t>(n.first)], (*nus)[static_cast<std::size_t>(n.second)], 17);
    if (mask[static_cast<std::size_t>(a)]) expected_bad.push_back(static_cast<std::int64_t>(i));
  }
  EXPECT_EQ(report.bad_nodes, expected_bad);
  EXPECT_EQ(report.ok, expected_bad.empty());
}

TEST(InducedMultiplicities, ChainsFollowThePullbackRule) {
  const auto params = arrangement_params::a0(3, 1, 1, 4, 0);
  const auto config = build_resolution(params);
  const partition_problem problem{params, 101};
  for (int i = 0; i < 50; ++i) {
    const auto nus = induced_multiplicities(config, problem, draw_solution(problem, 8, i));
    if (!nus) continue;
    for (const auto& t : config.tangencies) {
      const auto at = [&](std::int64_t id) { return (*nus)[static_cast<std::size_t>(id)]; };
      for (std::size_t k = 0; k < t.chain.size(); ++k)
        EXPECT_EQ(at(t.chain[k]), mod(static_cast<std::int64_t>(k + 1) * (at(t.section_a) + at(t.section_b)) + at(t.fiber), 101));
    }
    for (auto nu : *nus) EXPECT_NE(nu, 0);
  }
}

TEST(VerifyAsymptotic, AgreesWithOracleOnRandomAssignments) {
  const auto config = build_resolution(arrangement_params::a(2, 1, 1, 3, 0, 1, 0));
  try_rng rng(99);
  for (std::int64_t q : {17, 101, 211}) {
    const auto mask = oracle::bad_mask(q, 1);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<std::int64_t> nus;
      for (std::size_t i = 0; i < config.components.size(); ++i)
        nus.push_back(1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(q - 1))));
      const auto report = verify_asymptotic(config, branch_assignment::make(q, nus), 1);
      bool ok = true;
      for (const auto& n : config.nodes)
        if (mask[static_cast<std::size_t>(oracle::node_residue(nus[static_cast<std::size_t>(n.first)],
                                                               nus[static_cast<std::size_t>(n.second)], q))])
          ok = false;
      EXPECT_EQ(report.ok, ok);
      EXPECT_EQ(report.a_chain_nodes, 0);
    }
  }
}

TEST(VerifyAsymptotic, ResidueOneIsNeverGood) {
  const auto config = build_resolution(arrangement_params::a0(2, 1, 1, 3, 0));
  const auto& n = config.nodes.front();
  std::vector<std::int64_t> nus(config.components.size(), 5);
  nus[static_cast<std::size_t>(n.first)] = 3;
  nus[static_cast<std::size_t>(n.second)] = 101 - 3;
  const auto assign = branch_assignment::make(101, nus);
  EXPECT_EQ(assign.residue(n), 1);
  const auto report = verify_asymptotic(config, assign, 1);
  EXPECT_FALSE(report.ok);
  EXPECT_EQ(report.bad_nodes.front(), 0);
}

TEST(VerifyAsymptotic, AprimePairedChainsAreTalliedNotFailed) {
  for (const auto& params : {arrangement_params::aprime(2, 1, 1, 3), arrangement_params::aprime(3, 1, 2, 2),
                             arrangement_params::aprime(2, 2, 1, 4)}) {
    const auto config = build_resolution(params);
    const std::int64_t q = 1009;
    const partition_problem problem{params, q};
    const auto expected = log_chern_closed(params).a_chain_nodes;
    for (int i = 0; i < 20; ++i) {
      const auto nus = induced_multiplicities(config, problem, draw_solution(problem, 4, i));
      if (!nus) continue;
      const auto report = verify_asymptotic(config, branch_assignment::make(q, *nus), 1);
      EXPECT_EQ(exact_int(report.a_chain_nodes), expected) << describe(params);
    }
  }
}

TEST(CountEstimate, MatchesTheLeadingTerm) {
  struct row {
    arrangement_params params;
    std::int64_t q;
  };
  for (const auto& [params, q] : {row{arrangement_params::a0(2, 1, 1, 3, 0), 101}, row{arrangement_params::a(3, 1, 2, 4, 0, 1, 2), 1009},
                                  row{arrangement_params::a(2, 2, 1, 3, 1, 0, 1), 211}}) {
    const std::int64_t E = to_int64(params.section_degree());
    const std::int64_t weighted = params.d + params.u;
    const std::int64_t n = weighted + to_int64(params.delta()) + params.w;
    // q^{n-1} / ((n-1)! E^weighted), exactly
    exact_rational expected = exact_rational(ipow(q, n - 1), ipow(E, weighted));
    for (std::int64_t k = 2; k < n; ++k) expected /= k;
    const long double estimate = count_estimate({params, q});
    EXPECT_NEAR(static_cast<double>(estimate / to_long_double(expected)), 1.0, 1e-9) << describe(params);
  }
}

TEST(CountEstimate, SingleUnknownIsConstantAndGrowthIsMonotone) {
  for (long double q : {17.0L, 101.0L, 100003.0L}) EXPECT_NEAR(static_cast<double>(weighted_partition_leading_term(q, 0, 1, 1)), 1.0, 1e-12);
  const auto params = arrangement_params::a(2, 1, 1, 3, 0, 1, 1);
  long double previous = 0;
  for (std::int64_t q : primes_in(17, 2000)) {
    const long double value = count_estimate({params, q});
    EXPECT_GT(value, previous);
    previous = value;
  }
}

TEST(CheckFeasible, RejectsSmallOrInvalidQ) {
  const auto params = arrangement_params::a(2, 1, 1, 3, 0, 1, 1);  // needs q >= 2*4 + 4 = 12
  EXPECT_THROW(check_feasible({params, 11}), domain_error);
  EXPECT_NO_THROW(check_feasible({params, 13}));
  EXPECT_THROW(check_feasible({params, 15}), domain_error);
  EXPECT_THROW(check_feasible({arrangement_params::a0(3, 1, 1, 3, 0), 3}), domain_error);
  EXPECT_THROW(check_feasible({arrangement_params::aprime(2, 1, 1, 3), 13}), domain_error);  // delta = 15
  EXPECT_THROW(sample_assignment({params, 11}, 1, 10), domain_error);
}

TEST(SampleAssignment, FoundAssignmentsAreAsymptoticAndConsistent) {
  for (const auto& [params, q] : {std::pair{arrangement_params::a0(2, 1, 1, 3, 0), std::int64_t{211}},
                                  std::pair{arrangement_params::a(2, 1, 1, 3, 0, 1, 1), std::int64_t{1009}},
                                  std::pair{arrangement_params::aprime(2, 1, 1, 3), std::int64_t{2003}}}) {
    const auto config = build_resolution(params);
    const partition_problem problem{params, q};
    const auto result = sample_assignment(config, problem, make_bad_set(q, 1), 42, 200000);
    ASSERT_TRUE(result.found()) << describe(params);
    ASSERT_TRUE(result.solution.has_value());
    EXPECT_EQ(result.solution, std::optional(draw_solution(problem, 42, result.tries - 1)));
    EXPECT_TRUE(verify_asymptotic(config, *result.assignment, 1).ok);
    for (auto nu : result.assignment->nus) {
      EXPECT_GT(nu, 0);
      EXPECT_LT(nu, q);
    }
    const auto again = sample_assignment(config, problem, make_bad_set(q, 1), 42, 200000);
    EXPECT_EQ(again.assignment, result.assignment);
    EXPECT_EQ(again.tries, result.tries);
  }
}

TEST(SampleAssignment, NotFoundCarriesDiagnostics) {
  const auto params = arrangement_params::a(2, 1, 1, 3, 0, 1, 1);
  const auto result = sample_assignment({params, 17}, 1, 25);
  EXPECT_FALSE(result.found());
  EXPECT_EQ(result.tries, 25);
  EXPECT_GE(result.fewest_bad_nodes, 1);
  EXPECT_TRUE(result.worst_node.has_value());
  EXPECT_GT(result.worst_node_failures, 0);
}

TEST(SampleAssignment, RetriesPerSuccessFallAsQGrows) {
  const auto params = arrangement_params::a0(2, 1, 1, 3, 0);
  const auto config = build_resolution(params);
  std::vector<std::int64_t> qs;
  for (std::int64_t q : primes_in(100, 2000))
    if (qs.empty() || q >= qs.back() * 115 / 100) qs.push_back(q);
  ASSERT_GE(qs.size(), 20u);

  // Least-squares slope of log(mean tries) against log q.
  std::vector<double> xs, ys;
  for (std::int64_t q : qs) {
    const auto bad = make_bad_set(q, 1);
    double total = 0;
    const int runs = 4;
    for (int seed = 0; seed < runs; ++seed) {
      const auto r = sample_assignment(config, {params, q}, bad, static_cast<std::uint64_t>(seed), 1'000'000);
      ASSERT_TRUE(r.found()) << q;
      total += static_cast<double>(r.tries);
    }
    xs.push_back(std::log(static_cast<double>(q)));
    ys.push_back(std::log(total / runs));
  }
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n, my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  EXPECT_LT(sxy / sxx, 0.0);
  EXPECT_GT(ys.front(), ys.back());
}
