#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "factpat/bigint.hpp"
#include "factpat/errors.hpp"
#include "factpat/estimate.hpp"
#include "factpat/factor.hpp"
#include "factpat/families.hpp"
#include "factpat/ff.hpp"
#include "factpat/patterns.hpp"
#include "factpat/rng.hpp"
#include "factpat/sieve.hpp"

namespace factpat {

enum class CensusMode { Exhaustive, Sampled };

struct CensusOptions {
  CensusMode mode = CensusMode::Exhaustive;
  std::uint64_t sample_size = 0;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::uint64_t enumeration_budget = 100'000'000;
  /// Oracle work allowed for validating every member: members x sieve entries.
  std::uint64_t oracle_budget = 500'000'000;
  std::uint64_t sieve_budget = 50'000'000;
  bool use_oracle = true;
};

enum class OraclePolicy { All, Subsample, Skipped };

inline const char* policy_name(OraclePolicy p) {
  switch (p) {
    case OraclePolicy::All: return "all";
    case OraclePolicy::Subsample: return "subsample-1pct";
    case OraclePolicy::Skipped: return "skipped";
  }
  return "?";
}

struct OracleSummary {
  OraclePolicy policy = OraclePolicy::Skipped;
  std::uint64_t checked = 0;
  std::uint64_t mismatches = 0;
  std::string note;
};

struct PatternRow {
  FactorizationPattern pattern;
  std::uint64_t count = 0;
  std::uint64_t count_sq = 0;
  std::uint64_t count_nsq = 0;
  Ratio T;
  Ratio main_term;  // T q^(r-m)
  /// False when the family hypotheses fail for this field: no claim is made.
  bool applicable = true;
  // exhaustive mode
  BoundReport all;
  BoundReport sq;
  // sampled mode
  double frequency = 0;
  double std_error = 0;
  double tolerance = 0;
  bool sampled_holds = false;

  [[nodiscard]] bool holds(CensusMode mode) const { return mode == CensusMode::Exhaustive ? all.holds && sq.holds : sampled_holds; }
};

struct SizeCheck {
  bool applicable = false;
  FamilySizeBounds bounds;
  bool holds_lower = false;
  bool holds_half = false;
};

struct SqCheck {
  bool applicable = false;
  SqProbabilityBound bound;
  Ratio fraction;
  bool holds = false;  // fraction >= bound and fraction > 1/2
};

struct CensusReport {
  std::string family;
  FamilySpec spec;
  std::string field;
  std::uint64_t q = 0;
  unsigned r = 0;
  unsigned m = 0;
  BigInt delta, D, delta_G;
  CensusMode mode = CensusMode::Exhaustive;
  std::uint64_t sample_size = 0;
  std::uint64_t seed = 0;
  std::uint64_t members = 0;  // members (exhaustive) or draws (sampled)
  std::uint64_t square_free = 0;
  std::vector<std::string> hypothesis_failures;
  std::vector<PatternRow> rows;
  SizeCheck size;
  SqCheck sq;
  OracleSummary oracle;
  double wall_seconds = 0;

  /// 0 every check holds, 2 some check failed, 3 hypotheses unmet so no claim was checked.
  [[nodiscard]] int status() const {
    bool any_unmet = false;
    for (const auto& row : rows) {
      if (!row.applicable) {
        any_unmet = true;
        continue;
      }
      if (!row.holds(mode)) return 2;
    }
    if (size.applicable && !(size.holds_lower && size.holds_half)) return 2;
    if (sq.applicable && !sq.holds) return 2;
    if (oracle.mismatches != 0) return 2;
    return any_unmet ? 3 : 0;
  }
};

namespace detail {

/// Runs body(lo, hi, acc) over contiguous slices of [0, n) on `workers` threads and sums the accumulators.
template <class Acc, class Body>
Acc run_partitioned(std::uint64_t n, unsigned workers, const Acc& zero, Body body) {
  if (workers < 1) workers = 1;
  if (workers > n) workers = static_cast<unsigned>(std::max<std::uint64_t>(n, 1));
  std::vector<Acc> parts(workers, zero);
  std::vector<std::exception_ptr> errors(workers);
  auto slice = [&](unsigned w) {
    const std::uint64_t lo = n / workers * w + std::min<std::uint64_t>(w, n % workers);
    const std::uint64_t hi = lo + n / workers + (w < n % workers ? 1 : 0);
    try {
      body(lo, hi, parts[w]);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    slice(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(slice, w);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  Acc total = zero;
  for (auto& p : parts) total += p;
  return total;
}

struct PatternAcc {
  std::vector<std::uint64_t> count, count_sq;
  std::uint64_t members = 0, square_free = 0, oracle_checked = 0, oracle_mismatches = 0;

  PatternAcc& operator+=(const PatternAcc& o) {
    for (std::size_t i = 0; i < count.size(); ++i) {
      count[i] += o.count[i];
      count_sq[i] += o.count_sq[i];
    }
    members += o.members;
    square_free += o.square_free;
    oracle_checked += o.oracle_checked;
    oracle_mismatches += o.oracle_mismatches;
    return *this;
  }
};

inline bool subsample_pick(std::uint64_t seed, std::uint64_t index) {
  return derive_seed(seed ^ 0x0fac7e55ULL, index) % 100 == 0;
}

}  // namespace detail

/// Factors every member (exhaustive) or `sample_size` uniform draws (sampled), tallies
/// patterns, and evaluates the pattern, family-size and square-free bounds.
inline CensusReport run_pattern_census(const FamilySpec& spec, const FieldCtx& F, const CensusOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  CensusReport rep;
  rep.family = spec.descriptor;
  rep.spec = spec;
  rep.field = F.describe();
  rep.q = F.q();
  rep.r = spec.degree;
  rep.m = spec.m;
  rep.delta = spec.delta();
  rep.D = spec.D();
  rep.delta_G = spec.delta_G();
  rep.mode = opt.mode;
  rep.seed = opt.seed;
  rep.hypothesis_failures = hypothesis_failures(spec, F);

  const auto patterns = enumerate_patterns(spec.degree);
  std::map<FactorizationPattern, std::size_t, PatternOrder> slot;
  for (std::size_t i = 0; i < patterns.size(); ++i) slot.emplace(patterns[i], i);

  const bool exhaustive = opt.mode == CensusMode::Exhaustive;
  const std::uint64_t n = exhaustive ? index_count(spec, F, opt.enumeration_budget) : opt.sample_size;
  if (!exhaustive && n == 0) throw DomainError("sampled census needs a positive sample size");
  rep.sample_size = exhaustive ? 0 : n;

  // oracle policy
  std::optional<IrreducibleTable> table;
  const unsigned sieve_degree = std::max(1U, spec.degree / 2);
  if (!opt.use_oracle) {
    rep.oracle.note = "disabled";
  } else if (sieve_cost(F.q(), sieve_degree) > opt.sieve_budget) {
    rep.oracle.note = "sieve over budget";
  } else {
    table = sieve_irreducibles(F, sieve_degree, opt.sieve_budget);
    const auto per_member = static_cast<unsigned __int128>(table->entries_up_to(sieve_degree));
    rep.oracle.policy = per_member * n <= opt.oracle_budget ? OraclePolicy::All : OraclePolicy::Subsample;
  }

  detail::PatternAcc zero;
  zero.count.assign(patterns.size(), 0);
  zero.count_sq.assign(patterns.size(), 0);
  const auto policy = rep.oracle.policy;
  const std::uint64_t seed = opt.seed;

  auto acc = detail::run_partitioned(n, opt.workers, zero, [&](std::uint64_t lo, std::uint64_t hi, detail::PatternAcc& a) {
    for (std::uint64_t i = lo; i < hi; ++i) {
      Rng rng(derive_seed(seed, i));
      std::optional<Poly> f;
      if (exhaustive)
        f = member_at(spec, F, i);
      else
        f = sample_member(spec, F, rng);
      if (!f) continue;
      const auto fz = factor(F, *f, rng).first;
      const auto pat = pattern_of(fz);
      const bool sqf = std::all_of(fz.factors.begin(), fz.factors.end(), [](const auto& x) { return x.second == 1; });
      const std::size_t k = slot.at(pat);
      ++a.count[k];
      ++a.members;
      if (sqf) {
        ++a.count_sq[k];
        ++a.square_free;
      }
      if (policy == OraclePolicy::All || (policy == OraclePolicy::Subsample && detail::subsample_pick(seed, i))) {
        ++a.oracle_checked;
        if (!(oracle_factor(F, *f, *table) == fz)) ++a.oracle_mismatches;
      }
    }
  });

  rep.members = acc.members;
  rep.square_free = acc.square_free;
  rep.oracle.checked = acc.oracle_checked;
  rep.oracle.mismatches = acc.oracle_mismatches;

  const bool hyp_ok = rep.hypothesis_failures.empty();
  const Ratio qrm(big_pow(BigInt(F.q()), spec.degree - spec.m));
  const Ratio family_size = exhaustive ? Ratio(rep.members) : Ratio(exact_size(spec, F).value_or(BigInt(qrm)));
  for (std::size_t k = 0; k < patterns.size(); ++k) {
    PatternRow row;
    row.pattern = patterns[k];
    row.count = acc.count[k];
    row.count_sq = acc.count_sq[k];
    row.count_nsq = row.count - row.count_sq;
    row.T = proportion(row.pattern);
    row.main_term = row.T * qrm;
    row.applicable = hyp_ok;
    const Interval b_all = pattern_bound_all(F.q(), spec.degree, spec.m, rep.delta, rep.D, row.T);
    const Interval b_sq = pattern_bound_sq(F.q(), spec.degree, spec.m, rep.delta, rep.D, row.T);
    row.all = check_bound(row.main_term, b_all, BigInt(row.count));
    row.sq = check_bound(row.main_term, b_sq, BigInt(row.count_sq));
    if (!exhaustive) {
      const double T = to_double(row.T);
      row.frequency = static_cast<double>(row.count) / static_cast<double>(n);
      row.std_error = std::sqrt(T * (1 - T) / static_cast<double>(n));
      row.tolerance = to_double(b_all.hi / family_size) + 4 * row.std_error;
      row.sampled_holds = std::fabs(row.frequency - T) <= row.tolerance;
    }
    rep.rows.push_back(std::move(row));
  }

  if (exhaustive) {
    rep.size.bounds = family_size_bounds(F.q(), spec.degree, spec.m, rep.delta_G);
    rep.size.applicable = rep.size.bounds.hypothesis_met && hyp_ok;
    const Ratio sz(rep.members);
    rep.size.holds_lower = sz >= rep.size.bounds.lower.hi;
    rep.size.holds_half = sz >= rep.size.bounds.half_lower;

    rep.sq.bound = sq_probability_bound(F.q(), spec.degree, rep.delta_G);
    const BigInt four_r2d = 4 * BigInt(spec.degree) * spec.degree * rep.delta_G;
    rep.sq.applicable = rep.sq.bound.hypothesis_met && BigInt(F.q()) > four_r2d && hyp_ok && rep.members > 0;
    rep.sq.fraction = rep.members ? Ratio(BigInt(rep.square_free), BigInt(rep.members)) : Ratio(0);
    rep.sq.holds = rep.sq.fraction >= rep.sq.bound.value && rep.sq.fraction > Ratio(1, 2);
  }
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

/// Running sums for one scalar statistic.
struct Moments {
  std::uint64_t n = 0;
  unsigned __int128 sum = 0;
  unsigned __int128 sum_sq = 0;

  void add(std::uint64_t x) {
    ++n;
    sum += x;
    sum_sq += static_cast<unsigned __int128>(x) * x;
  }
  Moments& operator+=(const Moments& o) {
    n += o.n;
    sum += o.sum;
    sum_sq += o.sum_sq;
    return *this;
  }
  [[nodiscard]] double mean() const { return n ? static_cast<double>(sum) / static_cast<double>(n) : 0.0; }
  /// Standard error of the mean.
  [[nodiscard]] double std_error() const {
    if (n < 2) return 0.0;
    const double m = mean();
    const double var = (static_cast<double>(sum_sq) - static_cast<double>(n) * m * m) / static_cast<double>(n - 1);
    return std::sqrt(std::max(var, 0.0) / static_cast<double>(n));
  }
};

struct CostCensus {
  std::string family;
  std::string field;
  std::uint64_t q = 0;
  unsigned r = 0;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  CostReport totals;
  Moments stage[4];       // arithmetic operations of X1..X4
  Moments largest_degree;  // largest irreducible-factor degree
  std::uint64_t ddf_complete = 0;  // runs with lambda in {0,1}^r
  std::uint64_t square_free_runs = 0;
  std::uint64_t erf_gcd_violations = 0;      // square-free runs whose ERF used other than 2 gcds
  std::uint64_t ddf_iteration_violations = 0;  // runs where DDF iterations != largest factor degree
  CostModel model;
  double wall_seconds = 0;

  [[nodiscard]] double ddf_completion_frequency() const { return n ? static_cast<double>(ddf_complete) / n : 0.0; }
  /// Mean tally of one counter for stage i (0-based).
  [[nodiscard]] double mean_of(const CostTally& t, std::uint64_t CostTally::*field) const {
    return n ? static_cast<double>(t.*field) / static_cast<double>(n) : 0.0;
  }
  [[nodiscard]] int status() const { return erf_gcd_violations == 0 && ddf_iteration_violations == 0 ? 0 : 2; }
};

namespace detail {

struct CostAcc {
  CostReport totals;
  Moments stage[4];
  Moments largest;
  std::uint64_t ddf_complete = 0, square_free = 0, erf_bad = 0, ddf_bad = 0;

  CostAcc& operator+=(const CostAcc& o) {
    totals += o.totals;
    for (int i = 0; i < 4; ++i) stage[i] += o.stage[i];
    largest += o.largest;
    ddf_complete += o.ddf_complete;
    square_free += o.square_free;
    erf_bad += o.erf_bad;
    ddf_bad += o.ddf_bad;
    return *this;
  }
};

}  // namespace detail

/// n seeded draws from the family, each factored with per-stage tallies.
inline CostCensus run_cost_census(const FamilySpec& spec, const FieldCtx& F, std::uint64_t n, std::uint64_t seed,
                                  unsigned workers = 1) {
  if (n == 0) throw DomainError("cost census needs n >= 1");
  const auto t0 = std::chrono::steady_clock::now();
  CostCensus c;
  c.family = spec.descriptor;
  c.field = F.describe();
  c.q = F.q();
  c.r = spec.degree;
  c.n = n;
  c.seed = seed;
  c.model = cost_model(F.q(), std::max(2U, spec.degree));
  auto acc = detail::run_partitioned(n, workers, detail::CostAcc{}, [&](std::uint64_t lo, std::uint64_t hi, detail::CostAcc& a) {
    for (std::uint64_t i = lo; i < hi; ++i) {
      Rng rng(derive_seed(seed, i));
      const Poly f = sample_member(spec, F, rng);
      const auto [fz, rep] = factor(F, f, rng);
      a.totals += rep;
      a.stage[0].add(rep.x1.arithmetic());
      a.stage[1].add(rep.x2.arithmetic());
      a.stage[2].add(rep.x3.arithmetic());
      a.stage[3].add(rep.x4.arithmetic());
      const auto pat = pattern_of(fz);
      a.largest.add(pat.largest_part());
      if (pat.distinct_parts()) ++a.ddf_complete;
      const bool sqf = std::all_of(fz.factors.begin(), fz.factors.end(), [](const auto& x) { return x.second == 1; });
      if (sqf) {
        ++a.square_free;
        if (rep.x1.gcd_calls != 2) ++a.erf_bad;
      }
      if (rep.ddf_iterations != pat.largest_part()) ++a.ddf_bad;
    }
  });
  c.totals = acc.totals;
  c.totals.r = spec.degree;
  c.totals.q = F.q();
  for (int i = 0; i < 4; ++i) c.stage[i] = acc.stage[i];
  c.largest_degree = acc.largest;
  c.ddf_complete = acc.ddf_complete;
  c.square_free_runs = acc.square_free;
  c.erf_gcd_violations = acc.erf_bad;
  c.ddf_iteration_violations = acc.ddf_bad;
  c.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return c;
}

}  // namespace factpat
