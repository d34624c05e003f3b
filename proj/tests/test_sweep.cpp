#include <gtest/gtest.h>

#include <cstdlib>
#include <numbers>
#include <sstream>

#include "symment/sweep.hpp"

using namespace symment;
using std::numbers::pi;

namespace {

SweepConfig linear(int n, const std::string& theta, const std::string& pairs) {
  SweepConfig c;
  c.protocol = ProtocolKind::linear;
  c.case_id = 4;
  c.n = n;
  c.theta = AngleGrid::parse(theta);
  c.pairs = pairs;
  return c;
}

SweepConfig star(int n_outer, const std::string& theta, std::optional<int> post, const std::string& pairs) {
  SweepConfig c;
  c.protocol = ProtocolKind::star;
  c.n_outer = n_outer;
  c.theta = AngleGrid::parse(theta);
  c.postselect = post;
  c.pairs = pairs;
  return c;
}

SweepConfig periodic(int n, const std::string& t1, const std::string& t2, const std::string& pairs) {
  SweepConfig c;
  c.protocol = ProtocolKind::periodic;
  c.n = n;
  c.theta = AngleGrid::parse(t1);
  c.theta2 = AngleGrid::parse(t2);
  c.pairs = pairs;
  return c;
}

std::string csv(const std::vector<OutputRow>& rows) {
  std::ostringstream out;
  write_csv(out, rows);
  return out.str();
}

}  // namespace

TEST(Angles, ParsesPiExpressions) {
  EXPECT_DOUBLE_EQ(parse_angle("pi"), pi);
  EXPECT_DOUBLE_EQ(parse_angle("2pi"), 2 * pi);
  EXPECT_DOUBLE_EQ(parse_angle("pi/2"), pi / 2);
  EXPECT_DOUBLE_EQ(parse_angle("3pi/4"), 3 * pi / 4);
  EXPECT_DOUBLE_EQ(parse_angle("-0.5pi"), -pi / 2);
  EXPECT_DOUBLE_EQ(parse_angle("0.25"), 0.25);
  EXPECT_THROW(parse_angle("abc"), UsageError);
  EXPECT_THROW(parse_angle("1/0"), UsageError);
  EXPECT_THROW(parse_angle(""), UsageError);
}

TEST(AngleGrid, InclusiveEndpoints) {
  const auto g = AngleGrid::parse("0:2pi:201").points();
  ASSERT_EQ(g.size(), 201u);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_EQ(g.back(), 2 * pi);
  EXPECT_EQ(g[100], pi);
  EXPECT_EQ(g[50], pi / 2);
  EXPECT_EQ(AngleGrid::parse("pi/3").points(), std::vector<double>{pi / 3});
  EXPECT_THROW(AngleGrid::parse("0:1:1"), UsageError);
  EXPECT_THROW(AngleGrid::parse("1:0:5"), UsageError);
  EXPECT_THROW(AngleGrid::parse("0:1"), UsageError);
}

TEST(SweepConfig, Validation) {
  auto c = linear(20, "0:pi:3", "bulk");
  c.backend = Backend::statevector;
  EXPECT_THROW(validate(c), UsageError);
  c.backend = Backend::automatic;
  EXPECT_EQ(resolve_backend(c), Backend::mps);
  c.n = 12;
  EXPECT_EQ(resolve_backend(c), Backend::statevector);
  c.postselect = 0;
  EXPECT_THROW(validate(c), UsageError);

  auto p = periodic(8, "0:pi:3", "0:pi:3", "bulk");
  p.theta2_offset = 0.1;
  EXPECT_THROW(validate(p), UsageError);
  p.theta2.reset();
  p.theta2_offset.reset();
  EXPECT_THROW(validate(p), UsageError);
  EXPECT_THROW(validate(star(0, "0", std::nullopt, "star-all")), UsageError);
}

TEST(Pairs, KeywordsAndExplicitLists) {
  const auto bulk = resolve_pairs(linear(8, "0", "bulk"));
  ASSERT_EQ(bulk.size(), 5u);
  EXPECT_EQ(bulk.front(), (QubitPair{2, 3}));
  EXPECT_EQ(bulk.back(), (QubitPair{6, 7}));
  EXPECT_EQ(resolve_pairs(linear(8, "0", "bulk-center")), (std::vector<QubitPair>{{4, 5}}));
  EXPECT_EQ(resolve_pairs(linear(8, "0", "edges")), (std::vector<QubitPair>{{1, 2}, {7, 8}}));
  EXPECT_EQ(resolve_pairs(linear(8, "0", "3-5,1-2")), (std::vector<QubitPair>{{1, 2}, {3, 5}}));
  EXPECT_EQ(resolve_pairs(star(3, "0", std::nullopt, "star-all")).size(), 3u);
  EXPECT_EQ(resolve_pairs(star(4, "0", 1, "star-all")).size(), 6u);
  EXPECT_THROW(resolve_pairs(linear(8, "0", "star-all")), UsageError);
  EXPECT_THROW(resolve_pairs(star(3, "0", std::nullopt, "edges")), UsageError);
  EXPECT_THROW(resolve_pairs(linear(8, "0", "0-1")), UsageError);
  EXPECT_THROW(resolve_pairs(linear(8, "0", "2-2")), UsageError);
  EXPECT_THROW(resolve_pairs(linear(8, "0", "2_3")), UsageError);
  EXPECT_THROW(resolve_pairs(star(3, "0", 0, "1-4")), UsageError);
}

TEST(Families, Assignment) {
  const auto l = linear(10, "0", "bulk");
  EXPECT_EQ(family_for(l, {1, 2}), FormulaFamily::linear_edge);
  EXPECT_EQ(family_for(l, {9, 10}), FormulaFamily::linear_edge);
  EXPECT_EQ(family_for(l, {5, 6}), FormulaFamily::linear_bulk);
  EXPECT_EQ(family_for(l, {5, 7}), std::nullopt);
  const auto p = periodic(10, "0", "0", "bulk");
  EXPECT_EQ(family_for(p, {4, 5}), FormulaFamily::periodic_even);
  EXPECT_EQ(family_for(p, {5, 6}), FormulaFamily::periodic_odd);
  EXPECT_EQ(family_for(p, {1, 2}), std::nullopt);
  EXPECT_EQ(family_for(star(3, "0", std::nullopt, "star-all"), {2, 4}), FormulaFamily::star_central);
  EXPECT_EQ(family_for(star(3, "0", 1, "star-all"), {1, 3}), FormulaFamily::star_ring_1);
  EXPECT_EQ(family_for(star(5, "0", 1, "star-all"), {1, 3}), std::nullopt);
}

TEST(RunSweep, BulkCenterOnTwentyQubits) {
  const auto rows = run_sweep(linear(20, "0:2pi:201", "bulk-center"));
  ASSERT_EQ(rows.size(), 201u);
  double worst = 0.0;
  for (const auto& r : rows) {
    ASSERT_TRUE(r.abs_error.has_value());
    EXPECT_EQ(r.pair_left, 10);
    worst = std::max(worst, *r.abs_error);
  }
  EXPECT_LT(worst, 1e-8);
}

TEST(RunSweep, QuarterTurnBulkValue) {
  const auto rows = run_sweep(linear(20, "pi/4", "10-11"));
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_NEAR(*rows[0].concurrence_numeric, 0.280330, 1e-6);
}

TEST(RunSweep, StarRingsAreSymmetric) {
  const auto rows = run_sweep(star(3, "pi/2", 0, "star-all"));
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) {
    EXPECT_NEAR(*r.concurrence_numeric, *rows[0].concurrence_numeric, 1e-12);
    EXPECT_EQ(r.postselect_outcome, 0);
    EXPECT_NEAR(*r.abs_error, 0.0, 1e-10);
  }
}

TEST(RunSweep, ZeroAngleHasNoEntanglement) {
  for (const auto& r : run_sweep(linear(9, "0", "all-adjacent"))) EXPECT_NEAR(*r.concurrence_numeric, 0.0, 1e-14);
}

TEST(RunSweep, ZeroProbabilityBranchLeavesNumericEmpty) {
  const auto rows = run_sweep(star(3, "0:2pi:5", 0, "star-all"));
  for (const auto& r : rows) {
    ASSERT_TRUE(r.postselect_probability.has_value());
    if (*r.postselect_probability < kZeroProbability) {
      EXPECT_FALSE(r.concurrence_numeric.has_value());
      EXPECT_FALSE(r.abs_error.has_value());
    } else {
      EXPECT_TRUE(r.concurrence_numeric.has_value());
    }
  }
  EXPECT_FALSE(rows.front().concurrence_numeric.has_value());  // theta = 0
}

TEST(RunSweep, RowsSortedAndDeterministicAcrossThreadCounts) {
  auto c = periodic(14, "0:2pi:9", "0:pi:5", "bulk");
  ::setenv("SYMM_ENT_THREADS", "1", 1);
  const auto one = csv(run_sweep(c));
  ::setenv("SYMM_ENT_THREADS", "4", 1);
  const auto four = csv(run_sweep(c));
  ::unsetenv("SYMM_ENT_THREADS");
  EXPECT_EQ(one, four);
  const auto rows = run_sweep(c);
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const auto& a = rows[k - 1];
    const auto& b = rows[k];
    EXPECT_TRUE(a.theta < b.theta || (a.theta == b.theta && (*a.theta2 < *b.theta2 ||
                                                              (*a.theta2 == *b.theta2 && a.pair_left < b.pair_left))));
  }
}

TEST(RunSweep, BackendsAgree) {
  auto c = linear(10, "0:2pi:17", "all-adjacent");
  c.backend = Backend::mps;
  const auto a = run_sweep(c);
  c.backend = Backend::statevector;
  const auto b = run_sweep(c);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k)
    EXPECT_NEAR(*a[k].concurrence_numeric, *b[k].concurrence_numeric, 1e-10);
}

TEST(RunSweep, ThetaOffsetDrivesSecondAngle) {
  SweepConfig c = periodic(8, "0:pi:3", "0", "4-5");
  c.theta2.reset();
  c.theta2_offset = pi / 2;
  const auto rows = run_sweep(c);
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) EXPECT_DOUBLE_EQ(*r.theta2, r.theta + pi / 2);
}

TEST(Csv, RoundTripIsExact) {
  const auto rows = run_sweep(star(3, "0:2pi:7", 1, "star-all"));
  std::istringstream in(csv(rows));
  EXPECT_EQ(read_csv(in), rows);
  std::istringstream bad("nonsense\n");
  EXPECT_THROW(read_csv(bad), std::invalid_argument);
}

TEST(Json, CarriesNullsForEmptyFields) {
  const auto j = to_json(run_sweep(linear(6, "0.3", "2-4")));
  ASSERT_EQ(j.size(), 1u);
  EXPECT_TRUE(j[0]["concurrence_analytic"].is_null());
  EXPECT_TRUE(j[0]["theta2"].is_null());
  EXPECT_TRUE(j[0]["concurrence_numeric"].is_number());
}

TEST(Compare, LinearFamiliesPass) {
  // (18,19) is still a bulk pair at N = 20
  const auto bulk_only = run_compare(linear(20, "0:2pi:201", "10-11,18-19"));
  ASSERT_EQ(bulk_only.families.size(), 1u);
  EXPECT_TRUE(bulk_only.passed);
  const auto r = run_compare(linear(20, "0:2pi:201", "10-11,19-20"));
  ASSERT_EQ(r.families.size(), 2u);
  EXPECT_TRUE(r.passed);
  for (const auto& f : r.families) EXPECT_LE(f.max_abs_error, 1e-8);
}

TEST(Compare, PeriodicBothParitiesPass) {
  const auto r = run_compare(periodic(40, "0:2pi:11", "0:2pi:11", "bulk"));
  ASSERT_EQ(r.families.size(), 2u);
  EXPECT_TRUE(r.passed);
  for (const auto& f : r.families) EXPECT_LT(f.max_spread, 1e-10);
}

TEST(Compare, InjectedErrorIsDetected) {
  auto c = linear(20, "0:2pi:51", "bulk-center");
  c.analytic_offset = 1e-3;
  const auto r = run_compare(c);
  EXPECT_FALSE(r.passed);
  ASSERT_EQ(r.families.size(), 1u);
  EXPECT_NEAR(r.families[0].max_abs_error, 1e-3, 1e-8);
}

TEST(Compare, MissingFamilyListsOptions) {
  auto c = linear(8, "0:pi:3", "2-3");
  c.case_id = 2;
  try {
    run_compare(c);
    FAIL() << "expected UsageError";
  } catch (const UsageError& e) {
    EXPECT_NE(std::string(e.what()).find("valid options"), std::string::npos);
  }
}

TEST(OracleCheck, AllLinearCases) {
  for (int cs = 1; cs <= 4; ++cs) {
    auto c = linear(10, "0:2pi:51", "all-adjacent");
    c.case_id = cs;
    const auto r = run_oracle_check(c);
    EXPECT_TRUE(r.passed()) << "case " << cs << " rdm " << r.max_rdm_deviation;
    EXPECT_LT(r.max_discarded_weight, 1e-14);
  }
}

TEST(OracleCheck, StarBothBranches) {
  const auto r = run_oracle_check(star(5, "0:2pi:51", std::nullopt, "star-all"));
  EXPECT_TRUE(r.passed());
  EXPECT_GT(r.comparisons, 51u * 5u);
}

TEST(OracleCheck, PeriodicGridWithSeed) {
  auto c = periodic(8, "0:2pi:21", "0:2pi:21", "all-adjacent");
  c.seed = 17;
  const auto r = run_oracle_check(c);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.points, 21u * 21u + 8u);
}

TEST(OracleCheck, RejectsLargeSystems) {
  EXPECT_THROW(run_oracle_check(linear(13, "0:1:3", "bulk")), UsageError);
}
