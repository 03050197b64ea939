#include <gtest/gtest.h>

#include "chernslope/nefcheck.hpp"

using namespace chernslope;

namespace {

const nef_entry& entry(const nef_report& report, const std::string& label) {
  for (const auto& e : report.entries)
    if (e.curve_class == label) return e;
  throw std::out_of_range("no entry " + label);
}

std::vector<arrangement_params> family_a_points() {
  std::vector<arrangement_params> out;
  for (std::int64_t p : {2, 3})
    for (std::int64_t r : {1, 2})
      for (std::int64_t d : {3, 5})
        for (const auto& [u, w] : {std::pair<std::int64_t, std::int64_t>{0, 0}, {1, 1}, {2, 0}})
          out.push_back(arrangement_params::a(p, r, 1 + (d == 5 ? 1 : 0), d, r - 1, u, w));
  return out;
}

std::vector<arrangement_params> family_aprime_points() {
  std::vector<arrangement_params> out;
  for (std::int64_t p : {2, 3, 5})
    for (std::int64_t r : {1, 2})
      for (std::int64_t l : {3, 4})
        for (std::int64_t e : {1, 2}) out.push_back(arrangement_params::aprime(p, r, e, l));
  return out;
}

}  // namespace

TEST(NefReport, AprimeNegativeSectionExample) {
  const auto report = make_nef_report(arrangement_params::aprime(2, 1, 1, 3), 17);
  EXPECT_EQ(entry(report, "S_{d+1}").pairing, 240);
  EXPECT_EQ(entry(report, "S_{d+1}").value, 240);
  EXPECT_EQ(entry(report, "G_{i,p^r}").value, exact_rational(15, 17));
}

TEST(NefReport, ChainInteriorCurvesPairToZero) {
  for (const auto& params : {arrangement_params::a(3, 1, 1, 3, 0, 1, 1), arrangement_params::aprime(3, 1, 1, 3),
                             arrangement_params::a0(2, 2, 1, 4, 0)}) {
    for (std::int64_t q : {17, 101}) {
      const auto report = make_nef_report(params, q);
      EXPECT_EQ(entry(report, "G_{i,j}").value, 0);
      EXPECT_EQ(entry(report, "G_{i,1}").value, 0);
      EXPECT_EQ(entry(report, "G_{i,p^r}").value, exact_rational(q - 2, q));
    }
  }
}

TEST(NefReport, FamilyANegativeSectionPositiveForLargeQ) {
  const auto params = arrangement_params::a(2, 1, 1, 3, 0, 1, 2);
  for (std::int64_t q : primes_in(17, 400)) {
    const exact_int E = 2, delta = 3, w = 2;
    const exact_rational expected = exact_rational(-2 * exact_int(q) + E + (delta + w) * (q - 1), q);
    const auto& s = entry(make_nef_report(params, q), "S_{d+1}");
    EXPECT_EQ(s.value, expected);
    EXPECT_GT(s.value, 0);
  }
}

TEST(NefReport, ClosedFormsAgreeWithTheConfiguration) {
  std::vector<arrangement_params> points = family_a_points();
  for (const auto& p : family_aprime_points()) points.push_back(p);
  for (const auto& params : points) {
    for (std::int64_t q : {17, 101, 1009}) {
      if (q == params.p) continue;
      const auto report = make_nef_report(params, q);
      ASSERT_TRUE(report.config_checked);
      EXPECT_TRUE(report.unmatched_classes.empty()) << describe(params);
      EXPECT_TRUE(report.consistent()) << describe(params) << " q=" << q;
      for (const auto& e : report.entries) {
        if (e.config_pairings.empty()) continue;
        ASSERT_EQ(e.config_pairings.size(), 1u) << e.curve_class << " " << describe(params);
        EXPECT_EQ(e.config_pairings.front(), e.pairing) << e.curve_class << " " << describe(params) << " q=" << q;
      }
    }
  }
}

TEST(NefReport, ValuesAreAffineInQWithPositiveSlope) {
  std::vector<arrangement_params> points = family_a_points();
  for (const auto& p : family_aprime_points()) points.push_back(p);
  for (const auto& params : points) {
    const auto r1 = make_nef_report(params, 101, 0), r2 = make_nef_report(params, 211, 0), r3 = make_nef_report(params, 1009, 0);
    ASSERT_EQ(r1.entries.size(), r2.entries.size());
    for (std::size_t i = 0; i < r1.entries.size(); ++i) {
      const exact_rational y1 = r1.entries[i].pairing, y2 = r2.entries[i].pairing, y3 = r3.entries[i].pairing;
      const exact_rational slope = (y2 - y1) / (211 - 101);
      EXPECT_EQ(y3, y1 + slope * (1009 - 101)) << r1.entries[i].curve_class;
      if (r1.entries[i].curve_class != "G_{i,1}" && r1.entries[i].curve_class != "G_{i,j}")
        EXPECT_GT(slope, 0) << r1.entries[i].curve_class << " " << describe(params);
    }
    EXPECT_GT((r2.t_value - r1.t_value) / (211 - 101), 0);
  }
}

TEST(MinNefQ, ThresholdsAreSmallAndStable) {
  for (const auto& points : {family_a_points(), family_aprime_points()}) {
    ASSERT_GE(points.size(), 20u);
    for (const auto& params : points) {
      const std::int64_t q0 = min_nef_q(params);
      EXPECT_LT(q0, 10007) << describe(params);
      EXPECT_GT(make_nef_report(params, q0).t_value, 0) << describe(params);
      std::int64_t q = q0;
      for (int k = 0; k < 6; ++k, q = next_prime(q + 1)) {
        if (q == params.p) continue;
        const auto report = make_nef_report(params, q);
        EXPECT_TRUE(report.all_nef) << describe(params) << " q=" << q;
        for (const auto& e : report.entries) EXPECT_GE(e.value, 0) << e.curve_class;
      }
    }
  }
}

TEST(MinNefQ, IsTheFirstPrimeThatWorks) {
  const auto params = arrangement_params::a(2, 1, 1, 3, 0, 0, 0);
  const std::int64_t q0 = min_nef_q(params);
  for (std::int64_t q : primes_in(17, q0 - 1)) EXPECT_FALSE(make_nef_report(params, q).all_nef) << q;
  EXPECT_THROW(min_nef_q(params, 16), cap_exceeded);
}

TEST(NefReport, RejectsBadQ) {
  EXPECT_THROW(make_nef_report(arrangement_params::aprime(2, 1, 1, 3), 15), domain_error);
  EXPECT_THROW(make_nef_report(arrangement_params::aprime(3, 1, 1, 3), 3), domain_error);
}
