#include <gtest/gtest.h>

#include "factpat/factpat.hpp"
#include "oracles.hpp"

using namespace factpat;

namespace {

std::uint64_t ipow(std::uint64_t q, unsigned d) {
  std::uint64_t n = 1;
  for (unsigned i = 0; i < d; ++i) n *= q;
  return n;
}

CensusOptions exhaustive(unsigned workers = 1, std::uint64_t seed = 1) {
  CensusOptions o;
  o.workers = workers;
  o.seed = seed;
  return o;
}

}  // namespace

TEST(Sieve, Counts) {
  const auto F2 = make_field("2");
  const auto t2 = sieve_irreducibles(*F2, 3);
  EXPECT_EQ(t2.of_degree(1).size(), 2U);
  EXPECT_EQ(t2.of_degree(2).size(), 1U);
  EXPECT_EQ(t2.of_degree(3).size(), 2U);
  EXPECT_EQ(t2.of_degree(3)[0], parse_poly(*F2, "1,1,0,1"));
  EXPECT_EQ(sieve_irreducibles(*make_field("3"), 2).of_degree(2).size(), 3U);
  for (const char* desc : {"2", "3", "5", "3^2"}) {
    const auto F = make_field(desc);
    const unsigned maxd = F->q() <= 3 ? 6 : 4;
    const auto t = sieve_irreducibles(*F, maxd);
    for (unsigned k = 1; k <= maxd; ++k) {
      std::uint64_t total = 0;
      for (unsigned d = 1; d <= k; ++d)
        if (k % d == 0) total += d * t.of_degree(d).size();
      EXPECT_EQ(total, ipow(F->q(), k)) << desc << " k=" << k;
    }
  }
}

TEST(Sieve, EntriesAreIrreducibleAndSorted) {
  const auto F = make_field("5");
  const auto t = sieve_irreducibles(*F, 4);
  for (unsigned d = 1; d <= 4; ++d)
    for (std::size_t i = 0; i < t.of_degree(d).size(); ++i) {
      EXPECT_TRUE(is_irreducible(*F, t.of_degree(d)[i]));
      if (i) {
        EXPECT_TRUE(canonical_less(t.of_degree(d)[i - 1], t.of_degree(d)[i]));
      }
    }
}

TEST(Sieve, Budget) {
  EXPECT_THROW(sieve_irreducibles(*make_field("10007"), 3), BudgetExceeded);
  EXPECT_THROW(sieve_irreducibles(*make_field("5"), 0), DomainError);
}

TEST(Oracle, AgreesWithFactor) {
  for (const char* desc : {"3", "5"}) {
    const auto F = make_field(desc);
    const unsigned maxd = F->q() == 3 ? 5 : 4;
    const auto t = sieve_irreducibles(*F, maxd / 2);
    Rng rng(3);
    for (unsigned d = 1; d <= maxd; ++d)
      for (std::uint64_t i = 0; i < ipow(F->q(), d); ++i) {
        const Poly f = monic_from_index(*F, d, i);
        const auto o = oracle_factor(*F, f, t);
        ASSERT_EQ(reconstruct(*F, o), f);
        ASSERT_EQ(o, factor(*F, f, rng).first);
      }
  }
}

TEST(Oracle, IrreducibleIsItself) {
  const auto F = make_field("7");
  const auto t = sieve_irreducibles(*F, 3);
  for (const auto& g : t.of_degree(3)) {
    const auto o = oracle_factor(*F, g, t);
    ASSERT_EQ(o.factors.size(), 1U);
    EXPECT_EQ(o.factors[0].first, g);
    EXPECT_EQ(o.factors[0].second, 1U);
  }
  EXPECT_THROW(oracle_factor(*F, monic_from_index(*F, 8, 5), t), DomainError);
}

TEST(Census, FullSetMatchesOracle) {
  const auto F = make_field("5");
  const auto spec = family_explicit_filter(4, nullptr);
  const auto rep = run_pattern_census(spec, *F, exhaustive());
  EXPECT_EQ(rep.members, 625U);
  EXPECT_EQ(rep.oracle.policy, OraclePolicy::All);
  EXPECT_EQ(rep.oracle.checked, 625U);
  EXPECT_EQ(rep.oracle.mismatches, 0U);
  // independent tally through the oracle alone
  const auto t = sieve_irreducibles(*F, 2);
  std::map<FactorizationPattern, std::uint64_t, PatternOrder> want;
  for (std::uint64_t i = 0; i < 625; ++i) ++want[pattern_of(oracle_factor(*F, monic_from_index(*F, 4, i), t))];
  std::uint64_t total = 0;
  for (const auto& row : rep.rows) {
    EXPECT_EQ(row.count, want[row.pattern]) << row.pattern.to_string();
    EXPECT_EQ(row.count, row.count_sq + row.count_nsq);
    total += row.count;
  }
  EXPECT_EQ(total, 625U);
  EXPECT_EQ(rep.status(), 0);
}

TEST(Census, SquareFreeCountsOnFullSet) {
  // q^r - q^(r-1) square-free monic polynomials of degree r >= 2
  const auto F = make_field("7");
  const auto rep = run_pattern_census(family_explicit_filter(4, nullptr), *F, exhaustive());
  EXPECT_EQ(rep.square_free, 2401U - 343U);
  // square-free counts of a single irreducible pattern equal the necklace count
  EXPECT_EQ(rep.rows[0].pattern, FactorizationPattern::parse("4^1"));
  EXPECT_EQ(rep.rows[0].count, (2401U - 49U) / 4);
}

TEST(Census, ParallelEqualsSerial) {
  const auto F = make_field("7");
  const auto spec = family_trinomial_plus_one(6, 3);
  const auto a = run_pattern_census(spec, *F, exhaustive(1, 9));
  const auto b = run_pattern_census(spec, *F, exhaustive(3, 9));
  EXPECT_EQ(emit_json(a), emit_json(b));
  CensusOptions s = exhaustive(1, 9);
  s.mode = CensusMode::Sampled;
  s.sample_size = 5000;
  const auto c = run_pattern_census(spec, *F, s);
  s.workers = 4;
  const auto d = run_pattern_census(spec, *F, s);
  EXPECT_EQ(emit_json(c), emit_json(d));
  EXPECT_EQ(emit_csv(c), emit_csv(d));
}

TEST(Census, SampledRowsCarryStandardErrors) {
  const auto F = make_field("101");
  CensusOptions o;
  o.mode = CensusMode::Sampled;
  o.sample_size = 20000;
  o.seed = 4;
  o.oracle_budget = 1'000'000;
  const auto rep = run_pattern_census(family_toeplitz_hessenberg(4), *F, o);
  EXPECT_EQ(rep.members, 20000U);
  std::uint64_t total = 0;
  for (const auto& row : rep.rows) {
    total += row.count;
    EXPECT_GT(row.std_error, 0.0);
    EXPECT_TRUE(row.sampled_holds) << row.pattern.to_string();
  }
  EXPECT_EQ(total, 20000U);
  EXPECT_EQ(rep.oracle.policy, OraclePolicy::Subsample);
  EXPECT_GT(rep.oracle.checked, 100U);
  EXPECT_LT(rep.oracle.checked, 300U);
  EXPECT_EQ(rep.oracle.mismatches, 0U);
}

TEST(Census, HypothesisUnmetIsMarked) {
  const auto F = make_field("3");
  const auto rep = run_pattern_census(family_trinomial_plus_one(5, 3), *F, exhaustive());
  EXPECT_FALSE(rep.hypothesis_failures.empty());
  for (const auto& row : rep.rows) EXPECT_FALSE(row.applicable);
  EXPECT_EQ(rep.status(), 3);
}

TEST(Census, Budget) {
  CensusOptions o = exhaustive();
  o.enumeration_budget = 100;
  EXPECT_THROW(run_pattern_census(family_explicit_filter(4, nullptr), *make_field("5"), o), BudgetExceeded);
}

TEST(CostCensus, MeansAndStructuralChecks) {
  const auto F = make_field("101");
  const auto c = run_cost_census(family_explicit_filter(6, nullptr), *F, 3000, 7, 2);
  EXPECT_EQ(c.n, 3000U);
  EXPECT_EQ(c.erf_gcd_violations, 0U);
  EXPECT_EQ(c.ddf_iteration_violations, 0U);
  EXPECT_GT(c.square_free_runs, 2800U);
  EXPECT_DOUBLE_EQ(c.stage[1].mean(), static_cast<double>(c.totals.x2.arithmetic()) / 3000.0);
  EXPECT_EQ(c.status(), 0);
  const auto d = run_cost_census(family_explicit_filter(6, nullptr), *F, 3000, 7, 1);
  EXPECT_EQ(emit_json(c), emit_json(d));
}

TEST(Report, JsonRoundTripAndSchema) {
  const auto F = make_field("5");
  const auto rep = run_pattern_census(family_explicit_filter(4, nullptr), *F, exhaustive());
  const std::string text = emit_json(rep);
  const Json j = Json::parse(text);
  EXPECT_EQ(j.dump(2) + "\n", text);
  EXPECT_TRUE(validate_report(j).empty());
  EXPECT_EQ(j["schema"], "factpat-report-v1");
  EXPECT_EQ(j["rows"].size(), 5U);
  EXPECT_EQ(j["rows"][0]["all"]["theorem"], "pattern_bound_all");
  for (const char* key : {"main_term", "error_bound", "observed", "holds", "slack"})
    EXPECT_TRUE(j["rows"][0]["sq"].contains(key)) << key;
  Json broken = j;
  broken.erase("rows");
  EXPECT_FALSE(validate_report(broken).empty());
  const auto c = run_cost_census(family_explicit_filter(4, nullptr), *F, 100, 1);
  EXPECT_TRUE(validate_report(Json::parse(emit_json(c))).empty());
}

TEST(Report, CsvShape) {
  const auto F = make_field("5");
  const auto rep = run_pattern_census(family_explicit_filter(4, nullptr), *F, exhaustive());
  const std::string csv = emit_csv(rep);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), static_cast<long>(enumerate_patterns(4).size() + 1));
  const auto c = run_cost_census(family_explicit_filter(4, nullptr), *F, 100, 1);
  const std::string cc = emit_csv(c);
  EXPECT_EQ(std::count(cc.begin(), cc.end(), '\n'), 5);
}
